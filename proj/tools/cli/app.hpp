#pragma once

#include <iosfwd>

namespace mlsa::cli {

// Full command-line entry point. Returns 0 on success, 1 on validation
// errors and 2 on numerical failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlsa::cli

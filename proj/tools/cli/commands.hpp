#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace mlsa::cli {

const std::vector<std::string>& subcommands();

// Subcommand-specific checks that must pass before any computation.
void check_subcommand_preconditions(const std::string& subcommand, const RunConfig& config);

// Runs one subcommand, writes its result files into `dir` and returns the
// summary recorded in the manifest.
Json run_subcommand(const std::string& subcommand, const RunConfig& config,
                    const std::filesystem::path& dir, std::ostream& log);

}  // namespace mlsa::cli

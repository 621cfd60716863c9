#pragma once

#include <stdexcept>

namespace mlsa {

// Bad input: a violated precondition or an out-of-range parameter.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computation that should have succeeded did not (singular system,
// reducible chain, non-finite iterate, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mlsa

#pragma once

#include <algorithm>

namespace mlsa {

// alpha: bias rate, beta: kernel/measure convergence rate, zeta: Hölder
// exponent in theta, kappa: per-step cost exponent.
struct RateParameters {
  double alpha = 1.0;
  double beta = 1.0;
  double zeta = 1.0;
  double kappa = 0.5;

  double variance_rate() const { return std::min(alpha * zeta, beta); }
};

// Throws ValidationError unless zeta in (1/2, 1] and the rest are positive.
void validate(const RateParameters& rates);

}  // namespace mlsa

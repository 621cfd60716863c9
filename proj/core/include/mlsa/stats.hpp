#pragma once

#include <span>
#include <vector>

namespace mlsa {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct SlopeFit {
  double slope = 0.0;
  bool exact = false;  // every quantity was exactly zero
  std::size_t points = 0;
};

// Slope of log2(values) against levels. Zero values are skipped; when all
// are zero the fit is reported as exact.
SlopeFit fit_log2_slope(std::span<const double> levels, std::span<const double> values);

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);

struct JackknifeMean {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Leave-one-out jackknife of the sample mean.
JackknifeMean jackknife_mean(std::span<const double> v);

}  // namespace mlsa

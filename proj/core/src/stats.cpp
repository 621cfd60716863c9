#include "mlsa/stats.hpp"

#include <cmath>

#include "mlsa/errors.hpp"

namespace mlsa {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("least_squares needs two equally sized samples of length >= 2");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ValidationError("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

SlopeFit fit_log2_slope(std::span<const double> levels, std::span<const double> values) {
  if (levels.size() != values.size())
    throw ValidationError("fit_log2_slope: size mismatch");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) {
      xs.push_back(levels[i]);
      ys.push_back(std::log2(values[i]));
    }
  }
  SlopeFit out;
  out.points = xs.size();
  if (xs.empty()) {
    out.exact = true;
    return out;
  }
  if (xs.size() == 1) return out;
  out.slope = least_squares(xs, ys).slope;
  return out;
}

double mean(std::span<const double> v) {
  if (v.empty()) throw ValidationError("mean of an empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw ValidationError("sample variance needs two or more values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

JackknifeMean jackknife_mean(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 2) throw ValidationError("jackknife needs two or more values");
  double total = 0.0;
  for (double x : v) total += x;
  const double full = total / static_cast<double>(n);
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) loo[i] = (total - v[i]) / static_cast<double>(n - 1);
  const double loo_mean = mean(loo);
  double ss = 0.0;
  for (double x : loo) ss += (x - loo_mean) * (x - loo_mean);
  JackknifeMean out;
  out.estimate = full;
  out.standard_error = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * ss);
  return out;
}

}  // namespace mlsa

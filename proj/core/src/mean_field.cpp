#include "mlsa/mean_field.hpp"

#include <cmath>

#include "mlsa/errors.hpp"

namespace mlsa::oracle {

double field_h(const model::FiniteLevelModel& model, Level level, double theta) {
  const Eigen::VectorXd pi = model::target_density(model, level, theta);
  return pi.dot(model.statistic(level)) - theta;
}

double field_derivative(const model::FiniteLevelModel& model, Level level, double theta) {
  const Eigen::VectorXd pi = model::target_density(model, level, theta);
  const Eigen::VectorXd stat = model.statistic(level);
  const double mean = pi.dot(stat);
  const double var = pi.dot((stat.array() - mean).square().matrix());
  return var - 1.0;
}

double root_theta_star(const model::FiniteLevelModel& model, Level level) {
  double lo = -2.0;
  double hi = 2.0;
  double h_lo = field_h(model, level, lo);
  const double h_hi = field_h(model, level, hi);
  if (!(h_lo > 0.0 && h_hi < 0.0))
    throw NumericalError("root_theta_star: h_l does not change sign on [-2, 2] at level " +
                         level.to_string());
  double best = 0.0;
  double best_abs = INFINITY;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double h = field_h(model, level, mid);
    if (std::abs(h) < best_abs) {
      best_abs = std::abs(h);
      best = mid;
    }
    if (h == 0.0 || hi - lo < 1e-15) break;
    if ((h > 0.0) == (h_lo > 0.0)) {
      lo = mid;
      h_lo = h;
    } else {
      hi = mid;
    }
  }
  if (!(best_abs < 1e-12))
    throw NumericalError("root_theta_star: bisection did not reach |h| < 1e-12 at level " +
                         level.to_string());
  return best;
}

}  // namespace mlsa::oracle

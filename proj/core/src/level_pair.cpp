#include "mlsa/errors.hpp"
#include "mlsa/mean_field.hpp"
#include "mlsa/stationary.hpp"
#include "mlsa/variance.hpp"

namespace mlsa::oracle {

LevelPairAnalysis analyze_level_pair(const model::FiniteLevelModel& model, Level level,
                                     std::optional<model::Coupling> coupling) {
  if (level.is_limit() || level.index() < 1)
    throw ValidationError("level-pair analysis needs a finite level l >= 1");
  const Level coarse = level.coarser();

  LevelPairAnalysis a;
  a.level = level;
  a.coupling = coupling.value_or(model.coupling());
  a.theta_star_l = root_theta_star(model, level);
  a.theta_star_lm1 = root_theta_star(model, coarse);
  a.dh_l = field_derivative(model, level, a.theta_star_l);
  a.dh_lm1 = field_derivative(model, coarse, a.theta_star_lm1);

  a.pi_l = model::target_density(model, level, a.theta_star_l);
  a.pi_lm1 = model::target_density(model, coarse, a.theta_star_lm1);
  a.K_l = model::kernel_matrix(model, level, a.theta_star_l);
  a.K_lm1 = model::kernel_matrix(model, coarse, a.theta_star_lm1);

  // H_l(theta, .) = phi_l - theta; the shift drops out after centring.
  a.H_hat_l = poisson_solve(a.K_l, a.pi_l, model.statistic(level).array() - a.theta_star_l);
  a.H_hat_lm1 =
      poisson_solve(a.K_lm1, a.pi_lm1, model.statistic(coarse).array() - a.theta_star_lm1);

  const auto coupled =
      model::coupled_kernel_matrix(model, level, a.theta_star_l, a.theta_star_lm1, a.coupling);
  a.coupled_stationary = stationary(coupled);
  return a;
}

double coupled_expectation(const Eigen::VectorXd& pi_pairs, const Eigen::VectorXd& f,
                           const Eigen::VectorXd& g) {
  const Eigen::Index m = f.size();
  if (g.size() != m || pi_pairs.size() != m * m)
    throw ValidationError("coupled_expectation: dimension mismatch");
  // pi_pairs reshaped row-major: entry (x, y) at x * m + y.
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> P(
      pi_pairs.data(), m, m);
  return f.dot(P * g);
}

double coupled_mean_squared_distance(const model::FiniteLevelModel& model,
                                     const Eigen::VectorXd& pi_pairs) {
  const std::size_t m = model.size();
  double s = 0.0;
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < m; ++y) {
      const double d = model::metric_D(model, x, y);
      s += pi_pairs[static_cast<Eigen::Index>(model::pair_index(m, x, y))] * d * d;
    }
  }
  return s;
}

}  // namespace mlsa::oracle

#include "mlsa/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mlsa/errors.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/mean_field.hpp"
#include "mlsa/poisson.hpp"
#include "mlsa/stationary.hpp"
#include "mlsa/variance.hpp"

namespace mlsa::oracle {

namespace {

// |||A|||_W = max_x sum_y |A(x, y)| W(y) / W(x).
double operator_norm(const Eigen::MatrixXd& A, const Eigen::VectorXd& W) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < A.rows(); ++x)
    worst = std::max(worst, A.row(x).cwiseAbs().dot(W) / W[x]);
  return worst;
}

// |f|_W = max_x |f(x)| / W(x).
double function_norm(const Eigen::VectorXd& f, const Eigen::VectorXd& W) {
  return f.cwiseAbs().cwiseQuotient(W).maxCoeff();
}

// ||mu||_W = sum_x |mu(x)| W(x).
double measure_norm(const Eigen::VectorXd& mu, const Eigen::VectorXd& W) {
  return mu.cwiseAbs().dot(W);
}

Eigen::VectorXd weight(const model::FiniteLevelModel& model, Level level, double theta, double r) {
  return model::lyapunov_V(model, level, theta).array().pow(r);
}

PoissonSolution drift_poisson(const model::FiniteLevelModel& model, Level level, double theta) {
  const Eigen::MatrixXd K = model::kernel_matrix(model, level, theta);
  const Eigen::VectorXd pi = model::target_density(model, level, theta);
  return poisson_solve(K, pi, model.statistic(level).array() - theta);
}

double lipschitz_constant(const model::FiniteLevelModel& model, const Eigen::VectorXd& f) {
  double worst = 0.0;
  for (std::size_t x = 0; x < model.size(); ++x)
    for (std::size_t y = x + 1; y < model.size(); ++y)
      worst = std::max(worst, std::abs(f[static_cast<Eigen::Index>(x)] - f[static_cast<Eigen::Index>(y)]) /
                                  model::metric_D(model, x, y));
  return worst;
}

std::vector<double> as_levels(std::span<const unsigned> levels) {
  return {levels.begin(), levels.end()};
}

void check_levels(std::span<const unsigned> levels, const char* who) {
  if (levels.size() < 4)
    throw ValidationError(std::string(who) + ": needs at least 4 levels for a slope fit");
  for (unsigned l : levels)
    if (l < 1) throw ValidationError(std::string(who) + ": levels must be >= 1");
}

template <class Row, class Get>
NamedSlope slope_of(const std::string& name, const std::vector<Row>& rows,
                    const std::vector<double>& ls, Get get) {
  std::vector<double> v;
  for (const auto& row : rows) v.push_back(get(row));
  return {name, fit_log2_slope(ls, v)};
}

}  // namespace

RateDiagnostics rate_diagnostics(const model::FiniteLevelModel& model,
                                 std::span<const unsigned> levels, double theta, double r) {
  check_levels(levels, "rate_diagnostics");
  if (!(r > 0.0 && r <= 1.0)) throw ValidationError("rate_diagnostics: r must lie in (0, 1]");

  const Level inf = Level::limit();
  const Eigen::MatrixXd K = model::kernel_matrix(model, inf, theta);
  const Eigen::VectorXd pi = model::target_density(model, inf, theta);
  const Eigen::VectorXd W = weight(model, inf, theta, r);

  RateDiagnostics out;
  out.theta = theta;
  out.r = r;
  for (unsigned l : levels) {
    const Level lv(l);
    RateRow row;
    row.level = l;
    row.kernel_gap =
        operator_norm(model::kernel_matrix(model, lv, theta) - K, weight(model, lv, theta, r));
    row.measure_gap = measure_norm(model::target_density(model, lv, theta) - pi, W);
    // H_l - H = phi_l - phi, and the theta terms cancel.
    row.mean_drift_gap = std::abs(pi.dot(model.statistic(lv) - model.base_statistic()));
    const Eigen::VectorXd dH = model.statistic(lv) - model.statistic(lv.coarser());
    row.kernel_drift_gap = function_norm(K * dH, weight(model, lv.coarser(), theta, r));
    // dH_l/dtheta = -1 at every level.
    row.derivative_gap = 0.0;
    row.drift_max = std::max({row.mean_drift_gap, row.kernel_drift_gap, row.derivative_gap});
    out.rows.push_back(row);
  }

  const auto ls = as_levels(levels);
  const auto& rows = out.rows;
  out.slopes.push_back(slope_of("kernel_gap", rows, ls, [](const RateRow& x) { return x.kernel_gap; }));
  out.slopes.push_back(slope_of("measure_gap", rows, ls, [](const RateRow& x) { return x.measure_gap; }));
  out.slopes.push_back(slope_of("drift_gap", rows, ls, [](const RateRow& x) { return x.drift_max; }));
  out.slopes.push_back(
      slope_of("drift_gap.mean", rows, ls, [](const RateRow& x) { return x.mean_drift_gap; }));
  out.slopes.push_back(
      slope_of("drift_gap.kernel", rows, ls, [](const RateRow& x) { return x.kernel_drift_gap; }));
  out.slopes.push_back(
      slope_of("drift_gap.derivative", rows, ls, [](const RateRow& x) { return x.derivative_gap; }));
  return out;
}

LemmaDiagnostics lemma_diagnostics(const model::FiniteLevelModel& model,
                                   std::span<const unsigned> levels, double theta,
                                   double theta_prime, double zeta, double r) {
  check_levels(levels, "lemma_diagnostics");
  if (!(zeta > 0.5 && zeta <= 1.0))
    throw ValidationError("lemma_diagnostics: zeta must lie in (1/2, 1]");
  if (!(r > 0.0 && r <= 1.0)) throw ValidationError("lemma_diagnostics: r must lie in (0, 1]");

  LemmaDiagnostics out;
  out.theta = theta;
  out.theta_prime = theta_prime;
  out.zeta = zeta;
  out.r = r;
  const double dtheta = std::abs(theta - theta_prime);

  for (unsigned l : levels) {
    const Level lv(l);
    const Level cv = lv.coarser();
    LemmaRow row;
    row.level = l;

    const Eigen::VectorXd W = weight(model, lv, theta, r);
    const PoissonSolution fine = drift_poisson(model, lv, theta);
    const PoissonSolution coarse = drift_poisson(model, cv, theta);
    row.poisson_level_gap = function_norm(fine.g_hat - coarse.g_hat, W);

    if (dtheta > 0.0) {
      const PoissonSolution moved = drift_poisson(model, lv, theta_prime);
      row.poisson_theta_gap = function_norm(fine.g_hat - moved.g_hat, W);
      row.holder_ratio = row.poisson_theta_gap / std::pow(dtheta, zeta);
    }

    row.derivative_gap =
        std::abs(field_derivative(model, lv, theta) - field_derivative(model, cv, theta_prime));
    row.lipschitz_ratio = lipschitz_constant(model, fine.g_hat);
    row.lipschitz_bound = 1.0 + lipschitz_constant(model, model.statistic(lv));

    const LevelPairAnalysis a = analyze_level_pair(model, lv);
    const Eigen::VectorXd& pc = a.coupled_stationary;
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(fine.g_hat.size());
    const Eigen::VectorXd& H = a.H_hat_l.g_hat;
    const Eigen::VectorXd& Hb = a.H_hat_lm1.g_hat;
    const Eigen::VectorXd& KH = a.H_hat_l.Kg_hat;
    const Eigen::VectorXd& KHb = a.H_hat_lm1.Kg_hat;
    const double cross = coupled_expectation(pc, H, Hb);
    const double kcross = coupled_expectation(pc, KH, KHb);
    row.square_vs_cross_fine = std::abs(coupled_expectation(pc, H.cwiseProduct(H), one) - cross);
    row.square_vs_cross_coarse =
        std::abs(coupled_expectation(pc, one, Hb.cwiseProduct(Hb)) - cross);
    row.kernel_square_vs_cross_fine =
        std::abs(coupled_expectation(pc, KH.cwiseProduct(KH), one) - kcross);
    row.kernel_square_vs_cross_coarse =
        std::abs(coupled_expectation(pc, one, KHb.cwiseProduct(KHb)) - kcross);
    row.delta_beta = model.bias_scale(lv);
    row.root_gap_zeta = std::pow(std::abs(a.theta_star_l - a.theta_star_lm1), zeta);
    row.distance_rms = std::sqrt(coupled_mean_squared_distance(model, pc));
    out.rows.push_back(row);
  }

  const auto ls = as_levels(levels);
  const auto& rows = out.rows;
  out.slopes.push_back(
      slope_of("poisson_level_gap", rows, ls, [](const LemmaRow& x) { return x.poisson_level_gap; }));
  out.slopes.push_back(
      slope_of("poisson_theta_gap", rows, ls, [](const LemmaRow& x) { return x.poisson_theta_gap; }));
  out.slopes.push_back(slope_of("derivative_gap", rows, ls, [](const LemmaRow& x) { return x.derivative_gap; }));
  out.slopes.push_back(
      slope_of("square_cross.fine", rows, ls, [](const LemmaRow& x) { return x.square_vs_cross_fine; }));
  out.slopes.push_back(
      slope_of("square_cross.coarse", rows, ls, [](const LemmaRow& x) { return x.square_vs_cross_coarse; }));
  out.slopes.push_back(slope_of("kernel_square_cross.fine", rows, ls,
                                [](const LemmaRow& x) { return x.kernel_square_vs_cross_fine; }));
  out.slopes.push_back(slope_of("kernel_square_cross.coarse", rows, ls,
                                [](const LemmaRow& x) { return x.kernel_square_vs_cross_coarse; }));
  out.slopes.push_back(
      slope_of("root_gap", rows, ls, [](const LemmaRow& x) { return x.root_gap_zeta; }));
  out.slopes.push_back(
      slope_of("distance_rms", rows, ls, [](const LemmaRow& x) { return x.distance_rms; }));
  return out;
}

const SlopeFit& find_slope(std::span<const NamedSlope> slopes, const std::string& name) {
  for (const auto& s : slopes)
    if (s.name == name) return s.fit;
  throw ValidationError("no slope named '" + name + "'");
}

}  // namespace mlsa::oracle

#include "mlsa/ml_driver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlsa/errors.hpp"
#include "mlsa/mean_field.hpp"
#include "mlsa/msa.hpp"
#include "mlsa/parallel.hpp"
#include "mlsa/rng.hpp"
#include "mlsa/stats.hpp"
#include "mlsa/step_schedule.hpp"

namespace mlsa::ml {

namespace {

// ceil that does not round exact integers up after floating-point noise.
double safe_ceil(double v) { return std::ceil(v * (1.0 - 1e-12)); }

double level_cost(const LevelPlan& plan, unsigned l) {
  const double fine = std::pow(Level(l).delta(), -plan.kappa);
  const double coarse = l == 0 ? 0.0 : std::pow(Level(l - 1).delta(), -plan.kappa);
  return static_cast<double>(plan.n[l]) * (fine + coarse);
}

}  // namespace

LevelPlan schedule_levels(double epsilon, const RateParameters& rates, std::uint64_t n_min,
                          double c_n) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("experiment.epsilon must lie in (0, 1)");
  validate(rates);
  if (!(c_n > 0.0) || !std::isfinite(c_n)) throw ValidationError("experiment.c_n must be positive");
  if (n_min == 0) throw ValidationError("experiment.n_min must be at least 1");

  const double vr = rates.variance_rate();
  LevelPlan plan;
  plan.epsilon = epsilon;
  plan.kappa = rates.kappa;
  if (vr < rates.kappa) {
    std::ostringstream os;
    os << "rates: min(alpha*zeta, beta) = " << vr << " is below kappa = " << rates.kappa
       << "; the level schedule is only defined for min(alpha*zeta, beta) >= kappa";
    throw ValidationError(os.str());
  }
  if (vr == rates.kappa) {
    plan.log_penalty = true;
    plan.note = "cost O(eps^-2 log(eps)^2)";
  }

  plan.L = static_cast<unsigned>(std::max(1.0, safe_ceil(std::log2(1.0 / epsilon) / rates.alpha)));
  const double exponent = 0.5 * (vr + rates.kappa);
  for (unsigned l = 0; l <= plan.L; ++l) {
    const double raw = c_n / (epsilon * epsilon) * std::pow(Level(l).delta(), exponent);
    const auto n = std::max<std::uint64_t>(n_min, static_cast<std::uint64_t>(safe_ceil(raw)));
    plan.n.push_back(n);
    plan.gamma.push_back(1.0 / static_cast<double>(n));
  }
  plan.predicted_cost = predicted_cost(plan);
  return plan;
}

void validate(const LevelPlan& plan) {
  if (plan.n.size() != plan.L + 1 || plan.gamma.size() != plan.L + 1)
    throw ValidationError("plan: n and gamma must have L + 1 entries");
  for (unsigned l = 0; l <= plan.L; ++l) {
    if (plan.n[l] == 0) throw ValidationError("plan: every n_l must be positive");
    if (!(plan.gamma[l] > 0.0) || !std::isfinite(plan.gamma[l]))
      throw ValidationError("plan: every gamma_l must be positive");
  }
  if (!(plan.kappa > 0.0)) throw ValidationError("plan: kappa must be positive");
}

double predicted_cost(const LevelPlan& plan) {
  double c = 0.0;
  for (unsigned l = 0; l < plan.n.size(); ++l)
    c += std::pow(Level(l).delta(), -plan.kappa) * static_cast<double>(plan.n[l]);
  return c;
}

MLEstimate ml_estimate(const model::FiniteLevelModel& model, const LevelPlan& plan,
                       std::uint64_t seed, const MlOptions& options) {
  validate(plan);
  const unsigned levels = plan.L + 1;
  std::vector<unsigned> order = options.level_order;
  if (order.empty()) {
    for (unsigned l = 0; l < levels; ++l) order.push_back(l);
  } else {
    std::vector<unsigned> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (unsigned l = 0; l < levels; ++l)
      if (sorted.size() != levels || sorted[l] != l)
        throw ValidationError("level_order must be a permutation of 0..L");
  }

  MLEstimate est;
  est.level_estimates.assign(levels, 0.0);
  est.level_costs.assign(levels, 0.0);
  est.seeds.resize(levels);
  for (unsigned l = 0; l < levels; ++l) est.seeds[l] = derive_seed(seed, l);

  auto run_level = [&](unsigned l) {
    const auto schedule = StepSchedule::constant(plan.gamma[l], plan.n[l]);
    try {
      if (l == 0) {
        sa::RunOptions run;
        run.theta0 = options.theta0;
        run.record_paths = false;
        est.level_estimates[0] =
            sa::msa_run(model, Level(0), schedule, options.reproj, plan.n[0], est.seeds[0], run)
                .final_theta;
      } else {
        sa::CoupledRunOptions run;
        run.theta0 = options.theta0;
        run.theta0_bar = options.theta0;
        run.coupling = options.coupling;
        run.record_paths = false;
        est.level_estimates[l] = sa::coupled_msa_run(model, Level(l), schedule, options.reproj,
                                                     plan.n[l], est.seeds[l], run)
                                     .final_increment();
      }
    } catch (const NumericalError& e) {
      throw NumericalError("level " + std::to_string(l) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("level " + std::to_string(l) + ": " + e.what());
    }
    est.level_costs[l] = level_cost(plan, l);
  };
  parallel_for(order.size(), options.workers, [&](std::size_t i) { run_level(order[i]); });

  for (unsigned l = 0; l < levels; ++l) {
    est.theta_hat += est.level_estimates[l];
    est.realized_cost += est.level_costs[l];
  }
  return est;
}

MseCostTable mse_cost_experiment(const model::FiniteLevelModel& model,
                                 const std::vector<double>& epsilons, std::size_t replicates,
                                 std::uint64_t seed0, const MseCostOptions& options) {
  if (epsilons.size() < 3) throw ValidationError("experiment.epsilons needs at least three values");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1]))
      throw ValidationError("experiment.epsilons must be strictly decreasing");
  if (replicates < 50) throw ValidationError("experiment.replicates must be at least 50");

  MseCostTable table;
  table.theta_star = oracle::root_theta_star(model, Level::limit());

  MlOptions inner = options.ml;
  inner.workers = 1;
  std::vector<double> log_eps;
  std::vector<double> log_cost;
  double ratio_min = INFINITY;
  double ratio_max = 0.0;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const LevelPlan plan = schedule_levels(epsilons[e], options.rates, options.n_min, options.c_n);
    std::vector<double> sq(replicates);
    std::vector<double> cost(replicates);
    std::vector<double> value(replicates);
    parallel_for(replicates, options.ml.workers, [&](std::size_t r) {
      const MLEstimate est = ml_estimate(model, plan, seed0 + r + e * replicates, inner);
      const double err = est.theta_hat - table.theta_star;
      sq[r] = err * err;
      cost[r] = est.realized_cost;
      value[r] = est.theta_hat;
    });

    MseCostRow row;
    row.epsilon = epsilons[e];
    row.L = plan.L;
    row.mse = mean(sq);
    row.stderr_mse = std::sqrt(sample_variance(sq) / static_cast<double>(replicates));
    row.mean_cost = mean(cost);
    row.predicted_cost = plan.predicted_cost;
    row.mean_estimate = mean(value);
    table.rows.push_back(row);

    log_eps.push_back(std::log(row.epsilon));
    log_cost.push_back(std::log(row.mean_cost));
    const double ratio = row.mse / (row.epsilon * row.epsilon);
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  table.cost_slope = least_squares(log_eps, log_cost).slope;
  table.mse_ratio_drift = ratio_min > 0.0 ? ratio_max / ratio_min : INFINITY;
  return table;
}

}  // namespace mlsa::ml

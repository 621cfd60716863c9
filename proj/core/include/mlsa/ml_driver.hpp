#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlsa/finite_model.hpp"
#include "mlsa/rates.hpp"
#include "mlsa/reprojection.hpp"

namespace mlsa::ml {

struct LevelPlan {
  double epsilon = 0.0;
  unsigned L = 0;
  std::vector<std::uint64_t> n;  // n_l, l = 0..L
  std::vector<double> gamma;     // 1 / n_l
  double kappa = 0.5;
  double predicted_cost = 0.0;   // sum_l Delta_l^{-kappa} n_l
  bool log_penalty = false;      // min{alpha zeta, beta} == kappa
  std::string note;
};

inline constexpr std::uint64_t kDefaultMinSteps = 100;
inline constexpr double kDefaultStepConstant = 1.0;

// L = ceil(log2(1/eps) / alpha),
// n_l = max(n_min, ceil(c_n eps^{-2} Delta_l^{(min{alpha zeta, beta} + kappa)/2})),
// gamma_l = 1 / n_l. Rejects min{alpha zeta, beta} < kappa.
LevelPlan schedule_levels(double epsilon, const RateParameters& rates,
                          std::uint64_t n_min = kDefaultMinSteps,
                          double c_n = kDefaultStepConstant);

// Throws ValidationError if the plan is internally inconsistent.
void validate(const LevelPlan& plan);

double predicted_cost(const LevelPlan& plan);

struct MlOptions {
  ReprojectionFamily reproj{10.0, 1.0};
  double theta0 = 0.0;
  std::optional<model::Coupling> coupling;
  unsigned workers = 1;
  // Sequential execution order of the level runs (a permutation of 0..L);
  // the result does not depend on it.
  std::vector<unsigned> level_order;
};

struct MLEstimate {
  double theta_hat = 0.0;
  // Entry 0 is the level-0 estimate, entry l >= 1 the increment estimate.
  std::vector<double> level_estimates;
  std::vector<double> level_costs;
  std::vector<std::uint64_t> seeds;
  double realized_cost = 0.0;
};

// Collapsing-sum estimator: level 0 from a single-level run with constant
// step gamma_0, each l >= 1 from an independent coupled run with gamma_l,
// final iterates only. Costs are Delta_l^{-kappa} per fine step plus
// Delta_{l-1}^{-kappa} per coarse step.
MLEstimate ml_estimate(const model::FiniteLevelModel& model, const LevelPlan& plan,
                       std::uint64_t seed, const MlOptions& options = {});

struct MseCostRow {
  double epsilon = 0.0;
  unsigned L = 0;
  double mse = 0.0;
  double stderr_mse = 0.0;
  double mean_cost = 0.0;
  double predicted_cost = 0.0;
  double mean_estimate = 0.0;
};

struct MseCostTable {
  double theta_star = 0.0;  // limit-level root, the reference value
  std::vector<MseCostRow> rows;
  double cost_slope = 0.0;  // d log(cost) / d log(eps)
  // max / min over rows of mse / eps^2.
  double mse_ratio_drift = 0.0;
};

struct MseCostOptions {
  RateParameters rates{};
  std::uint64_t n_min = kDefaultMinSteps;
  double c_n = kDefaultStepConstant;
  MlOptions ml{};
};

// epsilons strictly decreasing, at least three of them; replicates >= 50.
MseCostTable mse_cost_experiment(const model::FiniteLevelModel& model,
                                 const std::vector<double>& epsilons, std::size_t replicates,
                                 std::uint64_t seed0, const MseCostOptions& options = {});

}  // namespace mlsa::ml

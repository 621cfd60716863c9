#pragma once

#include <optional>

#include <Eigen/Dense>

#include "mlsa/finite_model.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/poisson.hpp"

namespace mlsa::oracle {

// Everything the asymptotic variance of the level-l increment depends on,
// evaluated at the pair of roots (theta*_l, theta*_{l-1}).
struct LevelPairAnalysis {
  Level level{1};
  model::Coupling coupling = model::Coupling::crn;
  double theta_star_l = 0.0;
  double theta_star_lm1 = 0.0;
  double dh_l = 0.0;
  double dh_lm1 = 0.0;
  Eigen::VectorXd pi_l;
  Eigen::VectorXd pi_lm1;
  model::KernelMatrix K_l;
  model::KernelMatrix K_lm1;
  PoissonSolution H_hat_l;    // Poisson solution of H_l(theta*_l, .) under K_l
  PoissonSolution H_hat_lm1;  // same for level l - 1
  Eigen::VectorXd coupled_stationary;  // pi-check over pairs, index x * m + y
};

LevelPairAnalysis analyze_level_pair(const model::FiniteLevelModel& model, Level level,
                                     std::optional<model::Coupling> coupling = std::nullopt);

// pi-check(f ⊗ g) for vectors f (fine coordinate) and g (coarse coordinate).
double coupled_expectation(const Eigen::VectorXd& pi_pairs, const Eigen::VectorXd& f,
                           const Eigen::VectorXd& g);

// pi-check(D^2).
double coupled_mean_squared_distance(const model::FiniteLevelModel& model,
                                     const Eigen::VectorXd& pi_pairs);

struct VarianceReport {
  unsigned level = 1;
  double sigma = 0.0;
  // Split used in the bound: sigma = t1 + t2, and t1 = t3 + t4.
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  double dh_l = 0.0;
  double dh_lm1 = 0.0;
  double theta_star_l = 0.0;
  double theta_star_lm1 = 0.0;
  // pi-check(H^2 ⊗ 1 - (K H)^2 ⊗ 1), its coarse mirror, and the cross term
  // pi-check(H ⊗ H̄ - K H ⊗ K̄ H̄).
  double fine_term = 0.0;
  double coarse_term = 0.0;
  double cross_term = 0.0;
  double mean_squared_distance = 0.0;  // pi-check(D^2)
  Eigen::VectorXd coupled_stationary;
};

// Exact asymptotic variance of gamma_n^{-1/2}(increment - (theta*_l - theta*_{l-1})).
// Throws NumericalError if the result is negative beyond 1e-10.
VarianceReport asymptotic_variance_exact(const model::FiniteLevelModel& model, Level level,
                                         std::optional<model::Coupling> coupling = std::nullopt);

VarianceReport variance_from_analysis(const model::FiniteLevelModel& model,
                                      const LevelPairAnalysis& analysis);

}  // namespace mlsa::oracle

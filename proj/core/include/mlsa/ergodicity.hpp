#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mlsa/finite_model.hpp"

namespace mlsa::oracle {

struct RhoEstimate {
  double rho = 0.0;   // fitted geometric rate of the V-weighted distance to pi
  double slem = 0.0;  // second-largest eigenvalue modulus of K
  int iterations = 0;
};

// sup_{|f| <= V} |(K^n - pi)(f)|_V is computed exactly for each n (the
// supremum is attained at f = ±V row by row) and its geometric decay rate is
// fitted on the tail above the round-off floor.
RhoEstimate rho_estimate(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi,
                         const Eigen::VectorXd& V, int max_iterations = 4000);

struct CertifyOptions {
  // Smallest drift rate reported when no state lies outside the small set.
  double lambda_floor = 0.5;
  // Add every state with K V >= V (at some grid point) to the small set;
  // without it such states make any lambda < 1 impossible.
  bool augment_small_set = true;
  // Largest power of K tried for the minorization.
  std::size_t max_minorization_steps = 0;  // 0 -> 4 m
};

struct CertificateFailure {
  double theta = 0.0;
  unsigned level = 0;
  std::size_t state = 0;
  double ratio = 0.0;  // K V(x) / V(x)
};

struct ErgodicityCertificate {
  bool valid = false;
  std::optional<CertificateFailure> failure;
  std::vector<std::size_t> small_set;
  std::vector<std::size_t> augmented_states;  // added beyond the mass windows
  double epsilon_minor = 0.0;
  std::size_t minorization_steps = 0;  // k with K^k(x, .) >= eps nu(.) on C
  Eigen::VectorXd nu;
  double nu_mass = 0.0;  // nu(C)
  double lambda_drift = 0.0;
  double b_drift = 0.0;
  double rho_hat = 0.0;
  std::size_t grid_points = 0;

  bool in_small_set(std::size_t x) const;
};

// Uniform drift/minorization certificate over levels x theta_grid with the
// model's Lyapunov function. The small set is the union, over the grid, of
// the contiguous top-half-mass window around each mode.
ErgodicityCertificate certify_drift_minorization(const model::FiniteLevelModel& model,
                                                 std::span<const unsigned> levels,
                                                 std::span<const double> theta_grid,
                                                 const CertifyOptions& options = {});

// Checks K V(x) <= lambda V(x) + b 1_C(x) at one (theta, level, x).
bool drift_holds(const model::FiniteLevelModel& model, const ErgodicityCertificate& cert,
                 Level level, double theta, std::size_t x, double tolerance = 1e-12);

}  // namespace mlsa::oracle

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlsa/level.hpp"

namespace mlsa::model {

// Shapes available for the base statistic phi(u) and the synthetic bias
// c(u), u in [0, 1]. All are bounded by 1/2 in absolute value.
enum class Basis {
  sine,         // sin(2 pi u) / 2
  cosine,       // cos(2 pi u) / 2
  skew_cosine,  // cos(2 pi u - pi / 4) / 2
  linear,       // u - 1/2
  zero,         // 0
};

enum class Coupling { crn, independent };

std::string to_string(Basis b);
Basis basis_from_string(const std::string& name);
std::string to_string(Coupling c);
Coupling coupling_from_string(const std::string& name);

struct ModelSpec {
  std::size_t m = 32;
  double beta0 = 1.0;
  double lyap_exponent = 0.5;
  Basis phi = Basis::sine;
  Basis bias = Basis::cosine;
  Coupling coupling = Coupling::crn;
};

// Finite-state exponential family on the grid u_x = x / (m - 1):
//   pi_{theta,l}(x) ∝ exp(theta * phi_l(u_x)),
//   phi_l = phi + Delta_l^{beta0} * c,
// with the limit level carrying no bias. Immutable once built.
class FiniteLevelModel {
 public:
  explicit FiniteLevelModel(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }
  std::size_t size() const { return spec_.m; }
  double beta0() const { return spec_.beta0; }
  double lyap_exponent() const { return spec_.lyap_exponent; }
  Coupling coupling() const { return spec_.coupling; }

  double position(std::size_t x) const { return positions_[x]; }
  const Eigen::VectorXd& base_statistic() const { return phi_; }
  const Eigen::VectorXd& bias() const { return bias_; }

  // Delta_l^{beta0}; 0 at the limit level.
  double bias_scale(Level level) const;

  // phi_l evaluated on the whole grid.
  Eigen::VectorXd statistic(Level level) const;
  double statistic(Level level, std::size_t x) const;

  FiniteLevelModel with_coupling(Coupling c) const;

 private:
  ModelSpec spec_;
  std::vector<double> positions_;
  Eigen::VectorXd phi_;
  Eigen::VectorXd bias_;
};

// Throws ValidationError for m < 3, beta0 <= 0 or lyap_exponent outside (0, 1).
FiniteLevelModel build_model(const ModelSpec& spec);

// H_l(theta, x) = phi_l(u_x) - theta.
double drift_H(const FiniteLevelModel& model, Level level, double theta, std::size_t x);

// D(x, y) = |u_x - u_y|.
double metric_D(const FiniteLevelModel& model, std::size_t x, std::size_t y);

// Normalised target; computed from max-shifted exponentials.
Eigen::VectorXd target_density(const FiniteLevelModel& model, Level level, double theta);

// V_{theta,l}(x) = (pi(x) / max pi)^{-lyap_exponent} >= 1.
Eigen::VectorXd lyapunov_V(const FiniteLevelModel& model, Level level, double theta);

}  // namespace mlsa::model

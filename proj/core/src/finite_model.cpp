#include "mlsa/finite_model.hpp"

#include <cmath>
#include <numbers>

#include "mlsa/errors.hpp"

namespace mlsa::model {

namespace {

double basis_value(Basis b, double u) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (b) {
    case Basis::sine:
      return 0.5 * std::sin(two_pi * u);
    case Basis::cosine:
      return 0.5 * std::cos(two_pi * u);
    case Basis::skew_cosine:
      return 0.5 * std::cos(two_pi * u - 0.25 * std::numbers::pi);
    case Basis::linear:
      return u - 0.5;
    case Basis::zero:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

std::string to_string(Basis b) {
  switch (b) {
    case Basis::sine:
      return "sine";
    case Basis::cosine:
      return "cosine";
    case Basis::skew_cosine:
      return "skew-cosine";
    case Basis::linear:
      return "linear";
    case Basis::zero:
      return "zero";
  }
  return "?";
}

Basis basis_from_string(const std::string& name) {
  if (name == "sine") return Basis::sine;
  if (name == "cosine") return Basis::cosine;
  if (name == "skew-cosine") return Basis::skew_cosine;
  if (name == "linear") return Basis::linear;
  if (name == "zero") return Basis::zero;
  throw ValidationError("unknown basis '" + name +
                        "' (expected sine|cosine|skew-cosine|linear|zero)");
}

std::string to_string(Coupling c) { return c == Coupling::crn ? "crn" : "independent"; }

Coupling coupling_from_string(const std::string& name) {
  if (name == "crn") return Coupling::crn;
  if (name == "independent") return Coupling::independent;
  throw ValidationError("unknown coupling '" + name + "' (expected crn|independent)");
}

FiniteLevelModel::FiniteLevelModel(const ModelSpec& spec) : spec_(spec) {
  if (spec.m < 3) throw ValidationError("model.m must be at least 3 (random-walk proposal needs an interior state)");
  if (!(spec.beta0 > 0.0) || !std::isfinite(spec.beta0))
    throw ValidationError("model.beta0 must be a positive finite number");
  if (!(spec.lyap_exponent > 0.0 && spec.lyap_exponent < 1.0))
    throw ValidationError("model.lyap_exponent must lie in (0, 1)");

  const std::size_t m = spec.m;
  positions_.resize(m);
  phi_.resize(static_cast<Eigen::Index>(m));
  bias_.resize(static_cast<Eigen::Index>(m));
  for (std::size_t x = 0; x < m; ++x) {
    const double u = static_cast<double>(x) / static_cast<double>(m - 1);
    positions_[x] = u;
    phi_[static_cast<Eigen::Index>(x)] = basis_value(spec.phi, u);
    bias_[static_cast<Eigen::Index>(x)] = basis_value(spec.bias, u);
  }
}

double FiniteLevelModel::bias_scale(Level level) const {
  if (level.is_limit()) return 0.0;
  return std::pow(level.delta(), spec_.beta0);
}

Eigen::VectorXd FiniteLevelModel::statistic(Level level) const {
  const double s = bias_scale(level);
  if (s == 0.0) return phi_;
  return phi_ + s * bias_;
}

double FiniteLevelModel::statistic(Level level, std::size_t x) const {
  const auto i = static_cast<Eigen::Index>(x);
  return phi_[i] + bias_scale(level) * bias_[i];
}

FiniteLevelModel FiniteLevelModel::with_coupling(Coupling c) const {
  ModelSpec s = spec_;
  s.coupling = c;
  return FiniteLevelModel(s);
}

FiniteLevelModel build_model(const ModelSpec& spec) { return FiniteLevelModel(spec); }

double drift_H(const FiniteLevelModel& model, Level level, double theta, std::size_t x) {
  if (x >= model.size()) throw ValidationError("state index out of range");
  return model.statistic(level, x) - theta;
}

double metric_D(const FiniteLevelModel& model, std::size_t x, std::size_t y) {
  return std::abs(model.position(x) - model.position(y));
}

Eigen::VectorXd target_density(const FiniteLevelModel& model, Level level, double theta) {
  Eigen::VectorXd a = theta * model.statistic(level);
  a.array() -= a.maxCoeff();
  Eigen::VectorXd p = a.array().exp();
  return p / p.sum();
}

Eigen::VectorXd lyapunov_V(const FiniteLevelModel& model, Level level, double theta) {
  // log(pi(x) / max pi) = a(x) - max a, with a = theta * phi_l.
  Eigen::VectorXd a = theta * model.statistic(level);
  a.array() -= a.maxCoeff();
  return (-model.lyap_exponent() * a.array()).exp();
}

}  // namespace mlsa::model

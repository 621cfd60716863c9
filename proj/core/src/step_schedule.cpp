#include "mlsa/step_schedule.hpp"

#include <cmath>
#include <sstream>

#include "mlsa/errors.hpp"

namespace mlsa {

std::string to_string(StepKind kind) {
  return kind == StepKind::polynomial ? "polynomial" : "constant";
}

StepKind step_kind_from_string(const std::string& name) {
  if (name == "polynomial") return StepKind::polynomial;
  if (name == "constant") return StepKind::constant;
  throw ValidationError("unknown step schedule kind '" + name + "' (expected polynomial|constant)");
}

StepSchedule StepSchedule::polynomial(double gamma0, double rho, std::uint64_t n_total) {
  return make_step_schedule(StepKind::polynomial, gamma0, rho, n_total);
}

StepSchedule StepSchedule::constant(double gamma0, std::uint64_t n_total) {
  return make_step_schedule(StepKind::constant, gamma0, std::nullopt, n_total);
}

double StepSchedule::step_size(std::uint64_t n) const {
  if (kind_ == StepKind::constant) return gamma0_;
  return gamma0_ * std::pow(static_cast<double>(n), -rho_);
}

double StepSchedule::partial_sum(std::uint64_t n) const {
  double s = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) s += step_size(k);
  return s;
}

double StepSchedule::partial_sum_squares(std::uint64_t n) const {
  double s = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const double g = step_size(k);
    s += g * g;
  }
  return s;
}

double StepSchedule::ratio_diagnostic(std::uint64_t n) const {
  if (n < 2) throw ValidationError("ratio diagnostic needs n >= 2");
  return std::abs(std::log(step_size(n) / step_size(n - 1))) / step_size(n);
}

StepSchedule make_step_schedule(StepKind kind, double gamma0, std::optional<double> rho,
                                std::uint64_t n_total) {
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0))
    throw ValidationError("schedule.gamma0 must be a positive finite number");
  if (n_total == 0) throw ValidationError("schedule.n_total must be positive");
  if (kind == StepKind::constant) return StepSchedule(kind, gamma0, 0.0, n_total);

  const double r = rho.value_or(kDefaultRho);
  if (!std::isfinite(r) || r <= 0.5) {
    std::ostringstream os;
    os << "schedule.rho = " << r
       << " violates sum(gamma_n^2) < infinity: polynomial steps need rho in (1/2, 1)";
    throw ValidationError(os.str());
  }
  if (r >= 1.0) {
    std::ostringstream os;
    os << "schedule.rho = " << r
       << " violates log(gamma_n/gamma_{n-1}) = o(gamma_n)"
       << (r > 1.0 ? " and sum(gamma_n) = infinity" : "")
       << ": polynomial steps need rho in (1/2, 1)";
    throw ValidationError(os.str());
  }
  return StepSchedule(kind, gamma0, r, n_total);
}

}  // namespace mlsa

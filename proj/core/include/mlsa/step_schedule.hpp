#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mlsa {

enum class StepKind { polynomial, constant };

class StepSchedule;

inline constexpr double kDefaultRho = 0.75;

// Validating constructor. rho is ignored (and may be empty) for constant
// schedules. Throws ValidationError naming the violated condition.
StepSchedule make_step_schedule(StepKind kind, double gamma0, std::optional<double> rho,
                                std::uint64_t n_total);

std::string to_string(StepKind kind);
StepKind step_kind_from_string(const std::string& name);

// Step-size sequence gamma_n, n >= 1.
//
// Polynomial schedules gamma0 * n^{-rho} are accepted only for rho in
// (1/2, 1): that is exactly the range where sum(gamma_n) diverges,
// sum(gamma_n^2) converges and log(gamma_n / gamma_{n-1}) = o(gamma_n).
// Constant schedules are what the multilevel driver uses per level.
class StepSchedule {
 public:
  static StepSchedule polynomial(double gamma0, double rho, std::uint64_t n_total);
  static StepSchedule constant(double gamma0, std::uint64_t n_total);

  StepKind kind() const { return kind_; }
  double gamma0() const { return gamma0_; }
  double rho() const { return rho_; }
  std::uint64_t n_total() const { return n_total_; }

  double step_size(std::uint64_t n) const;

  double partial_sum(std::uint64_t n) const;
  double partial_sum_squares(std::uint64_t n) const;
  // |log(gamma_n / gamma_{n-1})| / gamma_n, n >= 2.
  double ratio_diagnostic(std::uint64_t n) const;

 private:
  friend StepSchedule make_step_schedule(StepKind, double, std::optional<double>, std::uint64_t);

  StepSchedule(StepKind kind, double gamma0, double rho, std::uint64_t n_total)
      : kind_(kind), gamma0_(gamma0), rho_(rho), n_total_(n_total) {}

  StepKind kind_;
  double gamma0_;
  double rho_;
  std::uint64_t n_total_;
};


}  // namespace mlsa

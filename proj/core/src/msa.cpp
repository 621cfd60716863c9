#include "mlsa/msa.hpp"

#include <cmath>
#include <span>
#include <string>

#include "mlsa/errors.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/rng.hpp"

namespace mlsa::sa {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_start(const ReprojectionFamily& reproj, double theta0, const char* key) {
  if (!std::isfinite(theta0) || !reproj.set(0).contains(theta0))
    throw ValidationError(std::string(key) + " must lie in the first reprojection set");
}

std::size_t start_state(const model::FiniteLevelModel& model, std::optional<std::size_t> x0,
                        Rng& rng) {
  if (x0) {
    if (*x0 >= model.size()) throw ValidationError("x0 is outside the state grid");
    return *x0;
  }
  return rng.index(model.size());
}

void check_finite(double v, std::uint64_t n) {
  if (!std::isfinite(v))
    throw NumericalError("non-finite parameter at step " + std::to_string(n));
}

}  // namespace

Trajectory msa_run(const model::FiniteLevelModel& model, Level level, const StepSchedule& schedule,
                   const ReprojectionFamily& reproj, std::uint64_t n_steps, std::uint64_t seed,
                   const RunOptions& options) {
  if (n_steps == 0) throw ValidationError("n_steps must be at least 1");
  check_start(reproj, options.theta0, "theta0");

  Rng rng(seed);
  const Eigen::VectorXd stat_v = model.statistic(level);
  const auto stat = as_span(stat_v);

  Trajectory t;
  t.theta0 = options.theta0;
  t.x0 = start_state(model, options.x0, rng);
  t.steps = n_steps;
  if (options.record_paths) {
    t.theta_path.reserve(n_steps + 1);
    t.x_path.reserve(n_steps + 1);
    t.psi_path.reserve(n_steps + 1);
    t.theta_path.push_back(t.theta0);
    t.x_path.push_back(t.x0);
    t.psi_path.push_back(0);
  }

  double theta = t.theta0;
  std::size_t x = t.x0;
  std::uint64_t psi = 0;
  Interval box = reproj.set(0);
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const int d = rng.direction();
    const double u = rng.uniform();
    x = model::detail::rwm_move(stat, theta, x, d, u);
    if (!options.freeze_theta) {
      const double half = theta + schedule.step_size(n) * (stat[x] - theta);
      check_finite(half, n);
      if (box.contains(half)) {
        theta = half;
      } else {
        theta = t.theta0;
        x = t.x0;
        ++psi;
        box = reproj.set(psi);
        t.reprojection_events.push_back(n);
      }
    }
    if (options.record_paths) {
      t.theta_path.push_back(theta);
      t.x_path.push_back(x);
      t.psi_path.push_back(psi);
    }
  }
  t.final_theta = theta;
  t.final_x = x;
  t.final_psi = psi;
  return t;
}

CoupledTrajectory coupled_msa_run(const model::FiniteLevelModel& model, Level level,
                                  const StepSchedule& schedule, const ReprojectionFamily& reproj,
                                  std::uint64_t n_steps, std::uint64_t seed,
                                  const CoupledRunOptions& options) {
  if (n_steps == 0) throw ValidationError("n_steps must be at least 1");
  if (level.is_limit() || level.index() < 1)
    throw ValidationError("coupled runs need a fine level l >= 1");
  check_start(reproj, options.theta0, "theta0");
  check_start(reproj, options.theta0_bar, "theta0_bar");

  Rng rng(seed);
  const Eigen::VectorXd fine_v = model.statistic(level);
  const Eigen::VectorXd coarse_v = model.statistic(level.coarser());
  const auto fs = as_span(fine_v);
  const auto cs = as_span(coarse_v);
  const bool crn = options.coupling.value_or(model.coupling()) == model::Coupling::crn;

  CoupledTrajectory t;
  t.theta0 = options.theta0;
  t.theta0_bar = options.theta0_bar;
  t.x0 = start_state(model, options.x0, rng);
  t.x0_bar = options.x0_bar ? start_state(model, options.x0_bar, rng) : t.x0;
  t.steps = n_steps;
  if (options.record_paths) {
    t.fine_theta_path.reserve(n_steps + 1);
    t.coarse_theta_path.reserve(n_steps + 1);
    t.fine_x_path.reserve(n_steps + 1);
    t.coarse_x_path.reserve(n_steps + 1);
    t.psi_path.reserve(n_steps + 1);
    t.fine_theta_path.push_back(t.theta0);
    t.coarse_theta_path.push_back(t.theta0_bar);
    t.fine_x_path.push_back(t.x0);
    t.coarse_x_path.push_back(t.x0_bar);
    t.psi_path.push_back(0);
  }

  double theta = t.theta0;
  double theta_bar = t.theta0_bar;
  std::size_t x = t.x0;
  std::size_t y = t.x0_bar;
  std::uint64_t psi = 0;
  Interval box = reproj.set(0);
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    if (crn) {
      const int d = rng.direction();
      const double u = rng.uniform();
      x = model::detail::rwm_move(fs, theta, x, d, u);
      y = model::detail::rwm_move(cs, theta_bar, y, d, u);
    } else {
      const int d = rng.direction();
      const double u = rng.uniform();
      const int d_bar = rng.direction();
      const double u_bar = rng.uniform();
      x = model::detail::rwm_move(fs, theta, x, d, u);
      y = model::detail::rwm_move(cs, theta_bar, y, d_bar, u_bar);
    }
    if (!options.freeze_theta) {
      const double g = schedule.step_size(n);
      const double half = theta + g * (fs[x] - theta);
      const double half_bar = theta_bar + g * (cs[y] - theta_bar);
      check_finite(half, n);
      check_finite(half_bar, n);
      if (box.contains(half) && box.contains(half_bar)) {
        theta = half;
        theta_bar = half_bar;
      } else {
        theta = t.theta0;
        theta_bar = t.theta0_bar;
        x = t.x0;
        y = t.x0_bar;
        ++psi;
        box = reproj.set(psi);
        t.reprojection_events.push_back(n);
      }
    }
    if (options.record_paths) {
      t.fine_theta_path.push_back(theta);
      t.coarse_theta_path.push_back(theta_bar);
      t.fine_x_path.push_back(x);
      t.coarse_x_path.push_back(y);
      t.psi_path.push_back(psi);
    }
  }
  t.final_theta = theta;
  t.final_theta_bar = theta_bar;
  t.final_x = x;
  t.final_x_bar = y;
  t.final_psi = psi;
  return t;
}

namespace {

bool check_psi(const std::vector<std::uint64_t>& psi, const std::vector<std::uint64_t>& events,
               std::uint64_t final_psi) {
  if (psi.empty()) return events.size() == final_psi;
  if (psi.front() != 0) return false;
  std::size_t e = 0;
  for (std::size_t n = 1; n < psi.size(); ++n) {
    if (psi[n] == psi[n - 1]) continue;
    if (psi[n] != psi[n - 1] + 1) return false;
    if (e >= events.size() || events[e] != n) return false;
    ++e;
  }
  return e == events.size() && psi.back() == final_psi;
}

}  // namespace

bool check_containment(const Trajectory& t, const ReprojectionFamily& reproj) {
  for (std::size_t n = 0; n < t.theta_path.size(); ++n)
    if (!reproj.set(t.psi_path[n]).contains(t.theta_path[n])) return false;
  return check_psi(t.psi_path, t.reprojection_events, t.final_psi);
}

bool check_containment(const CoupledTrajectory& t, const ReprojectionFamily& reproj) {
  for (std::size_t n = 0; n < t.fine_theta_path.size(); ++n) {
    const Interval box = reproj.set(t.psi_path[n]);
    if (!box.contains(t.fine_theta_path[n]) || !box.contains(t.coarse_theta_path[n])) return false;
  }
  return check_psi(t.psi_path, t.reprojection_events, t.final_psi);
}

}  // namespace mlsa::sa

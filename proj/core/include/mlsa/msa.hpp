#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mlsa/finite_model.hpp"
#include "mlsa/reprojection.hpp"
#include "mlsa/step_schedule.hpp"

namespace mlsa::sa {

struct RunOptions {
  double theta0 = 0.0;
  // Initial state; drawn uniformly on the grid from the run's RNG when empty.
  std::optional<std::size_t> x0;
  // Keep full paths. Final values and reprojection events are always kept.
  bool record_paths = true;
  // Hold theta at theta0 (zero step) while the chain still moves.
  bool freeze_theta = false;
};

// Paths are indexed by step, with entry 0 the initial condition.
struct Trajectory {
  std::vector<double> theta_path;
  std::vector<std::size_t> x_path;
  std::vector<std::uint64_t> psi_path;
  std::vector<std::uint64_t> reprojection_events;
  double theta0 = 0.0;
  std::size_t x0 = 0;
  double final_theta = 0.0;
  std::size_t final_x = 0;
  std::uint64_t final_psi = 0;
  std::uint64_t steps = 0;
};

// Reprojected Markovian stochastic approximation at one level:
//   X_n ~ K_{theta_{n-1},l}(X_{n-1}, .),
//   theta_{n-1/2} = theta_{n-1} + gamma_n H_l(theta_{n-1}, X_n),
//   keep it if inside K_{psi_{n-1}}, otherwise reset and increment psi.
// A reset also returns the chain state to x0.
Trajectory msa_run(const model::FiniteLevelModel& model, Level level, const StepSchedule& schedule,
                   const ReprojectionFamily& reproj, std::uint64_t n_steps, std::uint64_t seed,
                   const RunOptions& options = {});

struct CoupledRunOptions {
  double theta0 = 0.0;      // fine start
  double theta0_bar = 0.0;  // coarse start
  // Shared initial state unless x0_bar is given; drawn uniformly when empty.
  std::optional<std::size_t> x0;
  std::optional<std::size_t> x0_bar;
  std::optional<model::Coupling> coupling;
  bool record_paths = true;
  bool freeze_theta = false;
};

struct CoupledTrajectory {
  std::vector<double> fine_theta_path;
  std::vector<double> coarse_theta_path;
  std::vector<std::size_t> fine_x_path;
  std::vector<std::size_t> coarse_x_path;
  std::vector<std::uint64_t> psi_path;
  std::vector<std::uint64_t> reprojection_events;
  double theta0 = 0.0;
  double theta0_bar = 0.0;
  std::size_t x0 = 0;
  std::size_t x0_bar = 0;
  double final_theta = 0.0;
  double final_theta_bar = 0.0;
  std::size_t final_x = 0;
  std::size_t final_x_bar = 0;
  std::uint64_t final_psi = 0;
  std::uint64_t steps = 0;

  double final_increment() const { return final_theta - final_theta_bar; }
  double increment(std::size_t n) const { return fine_theta_path[n] - coarse_theta_path[n]; }
  // Step of the last reset, 0 when there was none.
  std::uint64_t last_reprojection() const {
    return reprojection_events.empty() ? 0 : reprojection_events.back();
  }
};

// Coupled increment procedure for levels (l, l-1): one coupled kernel draw
// per step, the same gamma_n for both parameters, and a joint reset when
// either parameter leaves the current set.
CoupledTrajectory coupled_msa_run(const model::FiniteLevelModel& model, Level level,
                                  const StepSchedule& schedule, const ReprojectionFamily& reproj,
                                  std::uint64_t n_steps, std::uint64_t seed,
                                  const CoupledRunOptions& options = {});

// Post-hoc checks of the containment and counter invariants on recorded paths.
bool check_containment(const Trajectory& t, const ReprojectionFamily& reproj);
bool check_containment(const CoupledTrajectory& t, const ReprojectionFamily& reproj);

}  // namespace mlsa::sa

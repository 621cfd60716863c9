#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlsa/finite_model.hpp"
#include "mlsa/reprojection.hpp"
#include "mlsa/step_schedule.hpp"

namespace mlsa::sa {

struct CltOptions {
  ReprojectionFamily reproj{10.0, 1.0};
  double theta0 = 0.0;
  std::optional<model::Coupling> coupling;
  unsigned workers = 1;
};

struct ReplicateSummary {
  std::uint64_t replicate = 0;
  std::uint64_t seed = 0;
  double final_increment = 0.0;
  std::uint64_t reprojections = 0;
  std::uint64_t last_reprojection = 0;
  bool kept = true;
};

struct CltVarianceEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double oracle_increment = 0.0;  // theta*_l - theta*_{l-1}
  double final_gamma = 0.0;
  std::size_t kept = 0;
  std::size_t discarded = 0;
  std::string warning;  // non-empty when more than 20% were discarded
  std::vector<ReplicateSummary> replicates;
};

// gamma_n^{-1} times the mean of (increment_n - (theta*_l - theta*_{l-1}))^2
// over independent coupled replicates seeded seed0 + r. Replicates that
// reprojected during the second half of the run are discarded. The
// standard error is the leave-one-out jackknife.
CltVarianceEstimate empirical_clt_variance(const model::FiniteLevelModel& model, Level level,
                                           const StepSchedule& schedule, std::uint64_t n_steps,
                                           std::size_t replicates, std::uint64_t seed0,
                                           const CltOptions& options = {});

}  // namespace mlsa::sa

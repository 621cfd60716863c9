#include "mlsa/clt_variance.hpp"

#include <sstream>

#include "mlsa/errors.hpp"
#include "mlsa/mean_field.hpp"
#include "mlsa/msa.hpp"
#include "mlsa/parallel.hpp"
#include "mlsa/stats.hpp"

namespace mlsa::sa {

CltVarianceEstimate empirical_clt_variance(const model::FiniteLevelModel& model, Level level,
                                           const StepSchedule& schedule, std::uint64_t n_steps,
                                           std::size_t replicates, std::uint64_t seed0,
                                           const CltOptions& options) {
  if (replicates < 100) throw ValidationError("experiment.replicates must be at least 100");
  if (schedule.kind() != StepKind::polynomial)
    throw ValidationError("schedule.kind must be polynomial for the CLT variance estimate");
  if (level.is_limit() || level.index() < 1)
    throw ValidationError("experiment.level must be >= 1");

  CltVarianceEstimate out;
  out.oracle_increment =
      oracle::root_theta_star(model, level) - oracle::root_theta_star(model, level.coarser());
  out.final_gamma = schedule.step_size(n_steps);

  CoupledRunOptions run;
  run.theta0 = options.theta0;
  run.theta0_bar = options.theta0;
  run.coupling = options.coupling;
  run.record_paths = false;

  out.replicates.resize(replicates);
  parallel_for(replicates, options.workers, [&](std::size_t r) {
    const std::uint64_t seed = seed0 + r;
    const CoupledTrajectory t =
        coupled_msa_run(model, level, schedule, options.reproj, n_steps, seed, run);
    ReplicateSummary& s = out.replicates[r];
    s.replicate = r;
    s.seed = seed;
    s.final_increment = t.final_increment();
    s.reprojections = t.final_psi;
    s.last_reprojection = t.last_reprojection();
    s.kept = 2 * s.last_reprojection <= n_steps;
  });

  std::vector<double> scaled;
  for (const auto& s : out.replicates) {
    if (!s.kept) {
      ++out.discarded;
      continue;
    }
    const double e = s.final_increment - out.oracle_increment;
    scaled.push_back(e * e / out.final_gamma);
  }
  out.kept = scaled.size();
  if (5 * out.discarded > replicates) {
    std::ostringstream os;
    os << out.discarded << " of " << replicates
       << " replicates reprojected in the second half of the run; the reprojection family is too tight";
    out.warning = os.str();
  }
  if (out.kept < 2) throw NumericalError("fewer than two replicates survived the reprojection filter");
  const JackknifeMean jk = jackknife_mean(scaled);
  out.estimate = jk.estimate;
  out.standard_error = jk.standard_error;
  return out;
}

}  // namespace mlsa::sa

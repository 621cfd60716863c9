#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mlsa/clt_variance.hpp"
#include "mlsa/diagnostics.hpp"
#include "mlsa/ergodicity.hpp"
#include "mlsa/errors.hpp"
#include "mlsa/mean_field.hpp"
#include "mlsa/ml_driver.hpp"
#include "mlsa/msa.hpp"
#include "mlsa/parallel.hpp"
#include "mlsa/rng.hpp"
#include "mlsa/variance.hpp"
#include "output.hpp"

namespace mlsa::cli {

namespace fs = std::filesystem;

namespace {

using U = std::uint64_t;
using I = std::int64_t;

model::FiniteLevelModel build(const RunConfig& rc) { return model::build_model(rc.model); }

Json slope_json(const SlopeFit& f) {
  Json j;
  j["slope"] = f.slope;
  j["exact"] = f.exact;
  j["points"] = f.points;
  return j;
}

std::string verdict(const SlopeFit& f, double target, double tol) {
  if (f.exact) return "exact";
  return std::abs(f.slope - target) <= tol ? "pass" : "fail";
}

void require_levels(const std::vector<unsigned>& levels, const std::string& key, std::size_t min_count,
                    unsigned min_level) {
  if (levels.size() < min_count)
    throw ValidationError(key + " needs at least " + std::to_string(min_count) + " entries");
  for (unsigned l : levels)
    if (l < min_level)
      throw ValidationError(key + " entries must be >= " + std::to_string(min_level));
}

ml::MseCostOptions ml_options(const RunConfig& rc) {
  ml::MseCostOptions o;
  o.rates = rc.rates;
  o.n_min = rc.experiment.n_min;
  o.c_n = rc.experiment.c_n;
  o.ml.reproj = rc.reprojection;
  o.ml.theta0 = rc.experiment.theta0;
  o.ml.coupling = rc.model.coupling;
  o.ml.workers = rc.workers;
  return o;
}

Json plan_json(const ml::LevelPlan& plan) {
  Json j;
  j["epsilon"] = plan.epsilon;
  j["L"] = plan.L;
  j["n"] = plan.n;
  j["gamma"] = plan.gamma;
  j["kappa"] = plan.kappa;
  j["predicted_cost"] = plan.predicted_cost;
  j["log_penalty"] = plan.log_penalty;
  j["note"] = plan.note;
  return j;
}

Json variance_exact(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const auto& levels = rc.experiment.levels;
  std::vector<oracle::VarianceReport> reports(levels.size());
  parallel_for(levels.size(), rc.workers, [&](std::size_t i) {
    reports[i] = oracle::asymptotic_variance_exact(mdl, Level(levels[i]));
  });

  CsvWriter csv(dir / "variance_exact.csv",
                {"l", "delta", "sigma", "t1", "t2", "theta_star_l", "dh_l", "t3", "t4",
                 "theta_star_lm1", "dh_lm1", "fine_term", "coarse_term", "cross_term",
                 "mean_squared_distance"});
  Json records = Json::array();
  std::vector<double> fit_l;
  std::vector<double> fit_s;
  for (const auto& r : reports) {
    const double delta = Level(r.level).delta();
    csv.row({U{r.level}, delta, r.sigma, r.t1, r.t2, r.theta_star_l, r.dh_l, r.t3, r.t4,
             r.theta_star_lm1, r.dh_lm1, r.fine_term, r.coarse_term, r.cross_term,
             r.mean_squared_distance});
    Json j;
    j["l"] = r.level;
    j["delta"] = delta;
    j["sigma"] = r.sigma;
    j["t1"] = r.t1;
    j["t2"] = r.t2;
    j["t3"] = r.t3;
    j["t4"] = r.t4;
    j["theta_star_l"] = r.theta_star_l;
    j["theta_star_lm1"] = r.theta_star_lm1;
    j["dh_l"] = r.dh_l;
    j["dh_lm1"] = r.dh_lm1;
    j["fine_term"] = r.fine_term;
    j["coarse_term"] = r.coarse_term;
    j["cross_term"] = r.cross_term;
    j["mean_squared_distance"] = r.mean_squared_distance;
    records.push_back(j);
    if (r.level >= 2) {
      fit_l.push_back(r.level);
      fit_s.push_back(r.sigma);
    }
  }
  Json out;
  out["levels"] = records;
  Json summary;
  if (fit_l.size() >= 2) {
    const SlopeFit f = fit_log2_slope(fit_l, fit_s);
    out["sigma_slope"] = slope_json(f);
    summary["sigma_slope"] = f.slope;
  }
  write_json(dir / "variance_exact.json", out);
  summary["rows"] = reports.size();
  return summary;
}

Json variance_empirical(const RunConfig& rc, const fs::path& dir, std::ostream& log) {
  const auto mdl = build(rc);
  const Level level(rc.experiment.level);
  sa::CltOptions o;
  o.reproj = rc.reprojection;
  o.theta0 = rc.experiment.theta0;
  o.coupling = rc.model.coupling;
  o.workers = rc.workers;
  const auto est = sa::empirical_clt_variance(mdl, level, rc.schedule, rc.schedule.n_total(),
                                              rc.experiment.replicates, rc.seed, o);
  const auto exact = oracle::asymptotic_variance_exact(mdl, level);
  if (!est.warning.empty()) log << "warning: " << est.warning << '\n';
  const double z = est.standard_error > 0.0 ? (est.estimate - exact.sigma) / est.standard_error : 0.0;

  CsvWriter csv(dir / "variance_empirical.csv",
                {"l", "n_steps", "replicates", "estimate", "standard_error", "exact_sigma", "z",
                 "oracle_increment", "final_gamma", "kept", "discarded"});
  csv.row({U{level.index()}, U{rc.schedule.n_total()}, U{rc.experiment.replicates}, est.estimate,
           est.standard_error, exact.sigma, z, est.oracle_increment, est.final_gamma, U{est.kept},
           U{est.discarded}});
  CsvWriter reps(dir / "replicates.csv",
                 {"replicate", "seed", "final_increment", "reprojections", "last_reprojection", "kept"});
  for (const auto& s : est.replicates)
    reps.row({U{s.replicate}, U{s.seed}, s.final_increment, U{s.reprojections},
              U{s.last_reprojection}, I{s.kept ? 1 : 0}});

  Json summary;
  summary["estimate"] = est.estimate;
  summary["standard_error"] = est.standard_error;
  summary["exact_sigma"] = exact.sigma;
  summary["z"] = z;
  summary["discarded"] = est.discarded;
  summary["warning"] = est.warning;
  return summary;
}

Json rate_check(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const auto& x = rc.experiment;
  const auto d = oracle::rate_diagnostics(mdl, x.diagnostic_levels, x.theta, x.norm_exponent);

  CsvWriter rows(dir / "rate_check.csv",
                 {"l", "delta", "kernel_gap", "measure_gap", "mean_drift_gap", "kernel_drift_gap",
                  "derivative_gap", "drift_max"});
  for (const auto& r : d.rows)
    rows.row({U{r.level}, Level(r.level).delta(), r.kernel_gap, r.measure_gap, r.mean_drift_gap,
              r.kernel_drift_gap, r.derivative_gap, r.drift_max});

  const double target = -rc.model.beta0;
  CsvWriter slopes(dir / "rate_slopes.csv", {"name", "slope", "exact", "points", "target", "verdict"});
  Json verdicts;
  for (const auto& s : d.slopes) {
    const std::string v = verdict(s.fit, target, x.tolerance);
    slopes.row({s.name, s.fit.slope, I{s.fit.exact ? 1 : 0}, U{s.fit.points}, target, v});
    Json j = slope_json(s.fit);
    j["verdict"] = v;
    verdicts[s.name] = j;
  }
  bool all = true;
  for (const char* key : {"kernel_gap", "measure_gap", "drift_gap"})
    all = all && verdicts[key]["verdict"] != "fail";
  Json out;
  out["theta"] = x.theta;
  out["r"] = x.norm_exponent;
  out["target_slope"] = target;
  out["tolerance"] = x.tolerance;
  out["verdicts"] = verdicts;
  out["all_pass"] = all;
  write_json(dir / "rate_verdicts.json", out);

  Json summary;
  summary["all_pass"] = all;
  for (const char* key : {"kernel_gap", "measure_gap", "drift_gap"}) summary[key] = verdicts[key]["slope"];
  return summary;
}

Json lemma_check(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const auto& x = rc.experiment;
  const auto d = oracle::lemma_diagnostics(mdl, x.diagnostic_levels, x.theta, x.theta_prime,
                                           rc.rates.zeta, x.norm_exponent);

  CsvWriter rows(dir / "lemma_check.csv",
                 {"l", "delta", "poisson_level_gap", "poisson_theta_gap", "holder_ratio",
                  "derivative_gap", "lipschitz_ratio", "lipschitz_bound", "square_vs_cross_fine",
                  "square_vs_cross_coarse", "kernel_square_vs_cross_fine",
                  "kernel_square_vs_cross_coarse", "delta_beta", "root_gap_zeta", "distance_rms"});
  double max_holder = 0.0;
  double max_theta_gap = 0.0;
  double max_lipschitz = 0.0;
  for (const auto& r : d.rows) {
    rows.row({U{r.level}, Level(r.level).delta(), r.poisson_level_gap, r.poisson_theta_gap,
              r.holder_ratio, r.derivative_gap, r.lipschitz_ratio, r.lipschitz_bound,
              r.square_vs_cross_fine, r.square_vs_cross_coarse, r.kernel_square_vs_cross_fine,
              r.kernel_square_vs_cross_coarse, r.delta_beta, r.root_gap_zeta, r.distance_rms});
    max_holder = std::max(max_holder, r.holder_ratio);
    max_theta_gap = std::max(max_theta_gap, r.poisson_theta_gap);
    max_lipschitz = std::max(max_lipschitz, r.lipschitz_ratio / r.lipschitz_bound);
  }

  const double target = -rc.model.beta0;
  CsvWriter slopes(dir / "lemma_slopes.csv", {"name", "slope", "exact", "points", "target", "verdict"});
  Json verdicts;
  for (const auto& s : d.slopes) {
    const std::string v = verdict(s.fit, target, x.tolerance);
    slopes.row({s.name, s.fit.slope, I{s.fit.exact ? 1 : 0}, U{s.fit.points}, target, v});
    Json j = slope_json(s.fit);
    j["verdict"] = v;
    verdicts[s.name] = j;
  }
  // The derivative gap may decay faster than the bound; report that separately.
  const SlopeFit& dgap = oracle::find_slope(d.slopes, "derivative_gap");
  const bool derivative_bound = dgap.exact || dgap.slope <= target + x.tolerance;

  Json out;
  out["theta"] = x.theta;
  out["theta_prime"] = x.theta_prime;
  out["zeta"] = rc.rates.zeta;
  out["r"] = x.norm_exponent;
  out["target_slope"] = target;
  out["tolerance"] = x.tolerance;
  out["verdicts"] = verdicts;
  out["derivative_gap_within_bound"] = derivative_bound;
  out["max_holder_ratio"] = max_holder;
  out["theta_gaps_vanish"] = x.theta == x.theta_prime ? Json(max_theta_gap == 0.0) : Json(nullptr);
  out["max_lipschitz_ratio_over_bound"] = max_lipschitz;
  write_json(dir / "lemma_verdicts.json", out);

  Json summary;
  summary["poisson_level_gap"] = verdicts["poisson_level_gap"]["slope"];
  summary["derivative_gap"] = verdicts["derivative_gap"]["slope"];
  summary["derivative_gap_within_bound"] = derivative_bound;
  summary["max_holder_ratio"] = max_holder;
  return summary;
}

Json certify(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const auto& x = rc.experiment;
  oracle::CertifyOptions o;
  o.lambda_floor = x.lambda_floor;
  const auto grid = x.theta_grid.points();
  const auto cert = oracle::certify_drift_minorization(mdl, x.certify_levels, grid, o);

  std::size_t violations = 0;
  Json first_violation = nullptr;
  if (cert.valid) {
    Rng rng(rc.seed);
    for (std::size_t i = 0; i < x.out_of_sample; ++i) {
      const double theta = x.theta_grid.min + (x.theta_grid.max - x.theta_grid.min) * rng.uniform();
      const unsigned l = x.certify_levels[rng.index(x.certify_levels.size())];
      const std::size_t state = rng.index(mdl.size());
      if (!oracle::drift_holds(mdl, cert, Level(l), theta, state)) {
        if (violations++ == 0) first_violation = {{"theta", theta}, {"level", l}, {"state", state}};
      }
    }
  }

  Json j;
  j["valid"] = cert.valid;
  j["lambda_drift"] = cert.lambda_drift;
  j["b_drift"] = cert.b_drift;
  j["epsilon_minor"] = cert.epsilon_minor;
  j["minorization_steps"] = cert.minorization_steps;
  j["nu_mass"] = cert.nu_mass;
  j["rho_hat"] = cert.rho_hat;
  j["small_set"] = cert.small_set;
  j["augmented_states"] = cert.augmented_states;
  j["nu"] = std::vector<double>(cert.nu.data(), cert.nu.data() + cert.nu.size());
  j["grid_points"] = cert.grid_points;
  if (cert.failure)
    j["failure"] = {{"theta", cert.failure->theta},
                    {"level", cert.failure->level},
                    {"state", cert.failure->state},
                    {"ratio", cert.failure->ratio}};
  else
    j["failure"] = nullptr;
  j["out_of_sample"] = {{"checked", cert.valid ? x.out_of_sample : 0},
                        {"violations", violations},
                        {"first_violation", first_violation}};
  write_json(dir / "certificate.json", j);

  Json summary;
  summary["valid"] = cert.valid;
  summary["lambda_drift"] = cert.lambda_drift;
  summary["epsilon_minor"] = cert.epsilon_minor;
  summary["rho_hat"] = cert.rho_hat;
  summary["out_of_sample_violations"] = violations;
  return summary;
}

Json run_msa(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const Level level(rc.experiment.level);
  sa::RunOptions o;
  o.theta0 = rc.experiment.theta0;
  o.x0 = rc.experiment.x0;
  o.record_paths = rc.trace;
  const auto t = sa::msa_run(mdl, level, rc.schedule, rc.reprojection, rc.schedule.n_total(),
                             rc.seed, o);
  const double star = oracle::root_theta_star(mdl, level);

  CsvWriter csv(dir / "msa_summary.csv",
                {"l", "steps", "theta0", "x0", "final_theta", "final_x", "reprojections",
                 "theta_star", "abs_error"});
  csv.row({U{level.index()}, U{t.steps}, t.theta0, U{t.x0}, t.final_theta, U{t.final_x},
           U{t.final_psi}, star, std::abs(t.final_theta - star)});
  CsvWriter events(dir / "reprojections.csv", {"step"});
  for (auto n : t.reprojection_events) events.row({U{n}});
  if (rc.trace) {
    CsvWriter tr(dir / "trace.csv", {"step", "theta", "x", "psi"});
    for (std::size_t n = 0; n < t.theta_path.size(); ++n)
      tr.row({U{n}, t.theta_path[n], U{t.x_path[n]}, U{t.psi_path[n]}});
  }
  Json summary;
  summary["final_theta"] = t.final_theta;
  summary["theta_star"] = star;
  summary["reprojections"] = t.final_psi;
  return summary;
}

Json run_coupled(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const Level level(rc.experiment.level);
  sa::CoupledRunOptions o;
  o.theta0 = rc.experiment.theta0;
  o.theta0_bar = rc.experiment.theta0;
  o.x0 = rc.experiment.x0;
  o.coupling = rc.model.coupling;
  o.record_paths = rc.trace;
  const auto t = sa::coupled_msa_run(mdl, level, rc.schedule, rc.reprojection,
                                     rc.schedule.n_total(), rc.seed, o);
  const double oracle_inc =
      oracle::root_theta_star(mdl, level) - oracle::root_theta_star(mdl, level.coarser());

  CsvWriter csv(dir / "coupled_summary.csv",
                {"l", "steps", "final_theta", "final_theta_bar", "final_increment",
                 "oracle_increment", "final_x", "final_x_bar", "reprojections"});
  csv.row({U{level.index()}, U{t.steps}, t.final_theta, t.final_theta_bar, t.final_increment(),
           oracle_inc, U{t.final_x}, U{t.final_x_bar}, U{t.final_psi}});
  CsvWriter events(dir / "reprojections.csv", {"step"});
  for (auto n : t.reprojection_events) events.row({U{n}});
  if (rc.trace) {
    CsvWriter tr(dir / "trace.csv", {"step", "theta", "theta_bar", "x", "x_bar", "psi", "increment"});
    for (std::size_t n = 0; n < t.fine_theta_path.size(); ++n)
      tr.row({U{n}, t.fine_theta_path[n], t.coarse_theta_path[n], U{t.fine_x_path[n]},
              U{t.coarse_x_path[n]}, U{t.psi_path[n]}, t.increment(n)});
  }
  Json summary;
  summary["final_increment"] = t.final_increment();
  summary["oracle_increment"] = oracle_inc;
  summary["reprojections"] = t.final_psi;
  return summary;
}

Json schedule(const RunConfig& rc, const fs::path& dir) {
  const auto& x = rc.experiment;
  const auto plan = ml::schedule_levels(x.epsilon, rc.rates, x.n_min, x.c_n);
  write_json(dir / "plan.json", plan_json(plan));
  CsvWriter csv(dir / "plan.csv", {"l", "delta", "n", "gamma", "cost"});
  for (unsigned l = 0; l <= plan.L; ++l) {
    const double delta = Level(l).delta();
    csv.row({U{l}, delta, U{plan.n[l]}, plan.gamma[l],
             std::pow(delta, -plan.kappa) * static_cast<double>(plan.n[l])});
  }
  Json summary;
  summary["L"] = plan.L;
  summary["predicted_cost"] = plan.predicted_cost;
  summary["note"] = plan.note;
  return summary;
}

Json ml_run(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const auto& x = rc.experiment;
  const auto plan = ml::schedule_levels(x.epsilon, rc.rates, x.n_min, x.c_n);
  const auto opts = ml_options(rc);
  const auto est = ml::ml_estimate(mdl, plan, rc.seed, opts.ml);
  const double star = oracle::root_theta_star(mdl, Level::limit());

  Json j;
  j["theta_hat"] = est.theta_hat;
  j["theta_star"] = star;
  j["abs_error"] = std::abs(est.theta_hat - star);
  j["realized_cost"] = est.realized_cost;
  j["plan"] = plan_json(plan);
  j["level_estimates"] = est.level_estimates;
  j["level_costs"] = est.level_costs;
  j["seeds"] = est.seeds;
  write_json(dir / "ml_estimate.json", j);
  CsvWriter csv(dir / "ml_levels.csv", {"l", "n", "gamma", "seed", "estimate", "cost"});
  for (unsigned l = 0; l <= plan.L; ++l)
    csv.row({U{l}, U{plan.n[l]}, plan.gamma[l], U{est.seeds[l]}, est.level_estimates[l],
             est.level_costs[l]});

  Json summary;
  summary["theta_hat"] = est.theta_hat;
  summary["realized_cost"] = est.realized_cost;
  summary["predicted_cost"] = plan.predicted_cost;
  return summary;
}

Json mse_cost(const RunConfig& rc, const fs::path& dir) {
  const auto mdl = build(rc);
  const auto& x = rc.experiment;
  const auto table = ml::mse_cost_experiment(mdl, x.epsilons, x.replicates, rc.seed, ml_options(rc));
  CsvWriter csv(dir / "mse_cost.csv",
                {"epsilon", "mse", "mean_cost", "stderr_mse", "L", "predicted_cost", "mean_estimate"});
  for (const auto& r : table.rows)
    csv.row({r.epsilon, r.mse, r.mean_cost, r.stderr_mse, U{r.L}, r.predicted_cost, r.mean_estimate});
  Json summary;
  summary["theta_star"] = table.theta_star;
  summary["cost_slope"] = table.cost_slope;
  summary["mse_ratio_drift"] = table.mse_ratio_drift;
  summary["replicates"] = x.replicates;
  return summary;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "variance-exact", "variance-empirical", "rate-check", "lemma-check", "certify",
      "run-msa",        "run-coupled",        "schedule",   "ml-run",      "mse-cost"};
  return names;
}

void check_subcommand_preconditions(const std::string& sub, const RunConfig& rc) {
  const auto& x = rc.experiment;
  if (sub == "variance-exact") {
    require_levels(x.levels, "experiment.levels", 1, 1);
  } else if (sub == "variance-empirical") {
    if (x.level < 1) throw ValidationError("experiment.level must be >= 1");
    if (x.replicates < 100) throw ValidationError("experiment.replicates must be at least 100");
    if (rc.schedule.kind() != StepKind::polynomial)
      throw ValidationError("schedule.kind must be polynomial for variance-empirical");
  } else if (sub == "rate-check" || sub == "lemma-check") {
    require_levels(x.diagnostic_levels, "experiment.diagnostic_levels", 4, 1);
  } else if (sub == "certify") {
    require_levels(x.certify_levels, "experiment.certify_levels", 1, 0);
    if (!(x.lambda_floor > 0.0 && x.lambda_floor < 1.0))
      throw ValidationError("experiment.lambda_floor must lie in (0, 1)");
  } else if (sub == "run-coupled") {
    if (x.level < 1) throw ValidationError("experiment.level must be >= 1");
  } else if (sub == "schedule" || sub == "ml-run") {
    if (!(x.epsilon > 0.0 && x.epsilon < 1.0))
      throw ValidationError("experiment.epsilon must lie in (0, 1)");
  } else if (sub == "mse-cost") {
    if (x.epsilons.size() < 3) throw ValidationError("experiment.epsilons needs at least three values");
    for (std::size_t i = 0; i < x.epsilons.size(); ++i) {
      if (!(x.epsilons[i] > 0.0 && x.epsilons[i] < 1.0))
        throw ValidationError("experiment.epsilons entries must lie in (0, 1)");
      if (i > 0 && !(x.epsilons[i] < x.epsilons[i - 1]))
        throw ValidationError("experiment.epsilons must be strictly decreasing");
    }
    if (x.replicates < 50) throw ValidationError("experiment.replicates must be at least 50");
  } else if (sub != "run-msa") {
    throw ValidationError("unknown subcommand '" + sub + "'");
  }
}

Json run_subcommand(const std::string& sub, const RunConfig& rc, const fs::path& dir,
                    std::ostream& log) {
  if (sub == "variance-exact") return variance_exact(rc, dir);
  if (sub == "variance-empirical") return variance_empirical(rc, dir, log);
  if (sub == "rate-check") return rate_check(rc, dir);
  if (sub == "lemma-check") return lemma_check(rc, dir);
  if (sub == "certify") return certify(rc, dir);
  if (sub == "run-msa") return run_msa(rc, dir);
  if (sub == "run-coupled") return run_coupled(rc, dir);
  if (sub == "schedule") return schedule(rc, dir);
  if (sub == "ml-run") return ml_run(rc, dir);
  if (sub == "mse-cost") return mse_cost(rc, dir);
  throw ValidationError("unknown subcommand '" + sub + "'");
}

}  // namespace mlsa::cli

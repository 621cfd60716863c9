#include "app.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "mlsa/errors.hpp"
#include "output.hpp"

#ifndef MLSA_VERSION
#define MLSA_VERSION "0.0.0"
#endif

namespace mlsa::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  bool trace = false;
  std::vector<double> epsilons;
  std::optional<std::size_t> replicates;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--output", f.output, "output directory");
  app.add_option("--seed", f.seed, "64-bit seed");
  app.add_option("--workers", f.workers, "worker threads");
  app.add_flag("--trace", f.trace, "write per-step trajectories");
  app.add_option("--epsilons", f.epsilons, "comma-separated precisions")->delimiter(',');
  app.add_option("--replicates", f.replicates, "replicate count");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// --a.b=value and --a.b value forms.
void apply_extras(Json& config, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0) throw ValidationError("unexpected argument '" + a + "'");
    const std::string body = a.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      apply_override(config, body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      apply_override(config, body, extras[++i]);
    } else {
      throw ValidationError("override '" + a + "' has no value");
    }
  }
}

const char* describe(const std::string& name) {
  if (name == "variance-exact") return "exact asymptotic variance of the level increments";
  if (name == "variance-empirical") return "replicate estimate of the scaled increment variance";
  if (name == "rate-check") return "level-convergence slopes and verdicts";
  if (name == "lemma-check") return "Poisson-solution and variance-block slopes";
  if (name == "certify") return "drift/minorization certificate over a theta grid";
  if (name == "run-msa") return "single-level stochastic approximation run";
  if (name == "run-coupled") return "coupled two-level increment run";
  if (name == "schedule") return "multilevel plan for one precision";
  if (name == "ml-run") return "one multilevel estimate";
  if (name == "mse-cost") return "MSE and cost across precisions";
  return "";
}

fs::path output_dir(const RunConfig& rc) {
  if (!rc.output.empty()) return rc.output;
  if (const char* env = std::getenv("MLSA_OUTPUT_DIR"); env && *env) return env;
  return "mlsa-out";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilevel Markovian stochastic approximation toolkit", "mlsa"};
  app.set_version_flag("--version", MLSA_VERSION);
  app.require_subcommand(1);
  app.allow_extras();
  Flags flags;
  add_flags(app, flags);

  std::string chosen;
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name, describe(name));
    sub->allow_extras();
    sub->fallthrough();
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Json config = default_config();
    if (!flags.config.empty()) merge_strict(config, read_config_file(flags.config));
    apply_extras(config, app.remaining(true));
    if (flags.output) config["output"] = *flags.output;
    if (flags.seed) config["seed"] = *flags.seed;
    if (flags.workers) config["workers"] = *flags.workers;
    if (flags.trace) config["trace"] = true;
    if (!flags.epsilons.empty()) config["experiment"]["epsilons"] = flags.epsilons;
    if (flags.replicates) config["experiment"]["replicates"] = *flags.replicates;

    RunConfig rc = resolve(config);
    check_subcommand_preconditions(chosen, rc);

    const fs::path dir = output_dir(rc);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("output: cannot create directory '" + dir.string() + "'");
    rc.resolved["output"] = dir.string();

    const Json results = run_subcommand(chosen, rc, dir, err);

    Json manifest = rc.resolved;
    manifest["meta"] = {{"tool", "mlsa"},
                        {"version", MLSA_VERSION},
                        {"subcommand", chosen},
                        {"seed", rc.seed},
                        {"timestamp", utc_timestamp()},
                        {"reprojection_resets_state", true},
                        {"results", results}};
    write_json(dir / "manifest.json", manifest);
    out << chosen << ": results written to " << dir.string() << '\n';
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace mlsa::cli

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlsa/finite_model.hpp"
#include "mlsa/rates.hpp"
#include "mlsa/reprojection.hpp"
#include "mlsa/step_schedule.hpp"

namespace mlsa::cli {

using Json = nlohmann::ordered_json;

struct ThetaGrid {
  double min = -2.0;
  double max = 2.0;
  std::size_t count = 41;

  std::vector<double> points() const;
};

struct Experiment {
  std::vector<unsigned> levels;
  std::vector<unsigned> diagnostic_levels;
  unsigned level = 3;
  double theta = 0.5;
  double theta_prime = 0.5;
  double norm_exponent = 0.5;
  ThetaGrid theta_grid;
  std::vector<unsigned> certify_levels;
  std::size_t replicates = 400;
  double theta0 = 0.0;
  std::optional<std::size_t> x0;
  double epsilon = 0.1;
  std::vector<double> epsilons;
  std::uint64_t n_min = 100;
  double c_n = 1.0;
  double tolerance = 0.3;
  double lambda_floor = 0.5;
  std::size_t out_of_sample = 100;
};

struct RunConfig {
  model::ModelSpec model;
  StepSchedule schedule = StepSchedule::polynomial(1.0, 0.75, 100000);
  ReprojectionFamily reprojection{2.0, 1.0};
  RateParameters rates;
  Experiment experiment;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string output;
  bool trace = false;
  Json resolved;  // the validated config, defaults filled in
};

Json default_config();

// Parses a JSON config file; a top-level "meta" object is dropped so a
// manifest can be fed back in.
Json read_config_file(const std::string& path);

// Copies `user` onto `base`. Keys absent from `base` are rejected, as are
// values whose JSON type differs from the default's.
void merge_strict(Json& base, const Json& user, const std::string& prefix = "");

// --a.b.c=value; the value is read as JSON when it parses, else as a string.
void apply_override(Json& config, const std::string& dotted_key, const std::string& value);

// Validates every block and builds the typed view. Throws ValidationError
// naming the offending key.
RunConfig resolve(const Json& config);

}  // namespace mlsa::cli

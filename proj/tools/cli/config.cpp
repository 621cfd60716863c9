#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mlsa/errors.hpp"

namespace mlsa::cli {

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

bool nullable(const std::string& key) { return key == "experiment.x0"; }

const char* type_label(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer() || j.is_number_unsigned()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

bool compatible(const Json& def, const Json& v, const std::string& key) {
  if (nullable(key)) return v.is_null() || v.is_number_unsigned() || v.is_number_integer();
  if (def.is_number_float()) return v.is_number();
  if (def.is_number_integer() || def.is_number_unsigned())
    return v.is_number_unsigned() || v.is_number_integer();
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array();
  if (def.is_object()) return v.is_object();
  return false;
}

const Json& at(const Json& j, const std::string& block, const std::string& key) {
  return j.at(block).at(key);
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ValidationError(key + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(key + " must be finite");
  return v;
}

std::uint64_t whole(const Json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw ValidationError(key + " must be non-negative");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ValidationError(key + " must be a non-negative integer");
}

unsigned small_whole(const Json& j, const std::string& key) {
  const std::uint64_t v = whole(j, key);
  if (v > std::numeric_limits<unsigned>::max()) throw ValidationError(key + " is too large");
  return static_cast<unsigned>(v);
}

std::vector<unsigned> level_list(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ValidationError(key + " must be an array of levels");
  std::vector<unsigned> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(small_whole(j[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_list(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ValidationError(key + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

template <class Fn>
auto keyed(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(key + ": " + e.what());
  }
}

}  // namespace

std::vector<double> ThetaGrid::points() const {
  std::vector<double> out;
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

Json default_config() {
  Json c;
  c["model"] = {{"m", 32},
                {"beta0", 1.0},
                {"lyap_exponent", 0.5},
                {"phi_choice", "sine"},
                {"bias_choice", "cosine"},
                {"coupling", "crn"}};
  c["schedule"] = {{"kind", "polynomial"}, {"gamma0", 1.0}, {"rho", 0.75}, {"n_total", 100000}};
  c["reprojection"] = {{"r0", 2.0}, {"growth", 1.0}};
  c["rates"] = {{"alpha", 1.0}, {"beta", 1.0}, {"zeta", 1.0}, {"kappa", 0.5}};
  Json e;
  e["levels"] = {1, 2, 3, 4, 5, 6, 7, 8};
  e["diagnostic_levels"] = {2, 3, 4, 5, 6, 7, 8};
  e["level"] = 3;
  e["theta"] = 0.5;
  e["theta_prime"] = 0.5;
  e["norm_exponent"] = 0.5;
  e["theta_grid"] = {{"min", -2.0}, {"max", 2.0}, {"count", 41}};
  e["certify_levels"] = {0, 1, 2, 3, 4, 5, 6};
  e["replicates"] = 400;
  e["theta0"] = 0.0;
  e["x0"] = nullptr;
  e["epsilon"] = 0.1;
  e["epsilons"] = {0.2, 0.1, 0.05};
  e["n_min"] = 100;
  e["c_n"] = 1.0;
  e["tolerance"] = 0.3;
  e["lambda_floor"] = 0.5;
  e["out_of_sample"] = 100;
  c["experiment"] = e;
  c["seed"] = 1;
  c["workers"] = 1;
  c["output"] = "";
  c["trace"] = false;
  return c;
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config file '" + path + "' must hold a JSON object");
  j.erase("meta");
  return j;
}

void merge_strict(Json& base, const Json& user, const std::string& prefix) {
  if (!user.is_object())
    throw ValidationError((prefix.empty() ? std::string("config") : prefix) + " must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = join(prefix, it.key());
    if (prefix.empty() && it.key() == "meta") continue;
    if (!base.contains(it.key())) throw ValidationError("unknown config key '" + key + "'");
    Json& slot = base[it.key()];
    if (!compatible(slot, it.value(), key))
      throw ValidationError(key + " has type " + type_label(it.value()) + ", expected " +
                            type_label(slot));
    if (slot.is_object())
      merge_strict(slot, it.value(), key);
    else
      slot = it.value();
  }
}

void apply_override(Json& config, const std::string& dotted_key, const std::string& value) {
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const Json::parse_error&) {
    parsed = value;
  }
  Json patch = parsed;
  std::string rest = dotted_key;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest.erase(0, pos + 1))
    parts.push_back(rest.substr(0, pos));
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (it->empty()) throw ValidationError("malformed override key '" + dotted_key + "'");
    Json wrapped = Json::object();
    wrapped[*it] = std::move(patch);
    patch = std::move(wrapped);
  }
  merge_strict(config, patch);
}

RunConfig resolve(const Json& c) {
  RunConfig rc;
  rc.resolved = c;

  const Json& m = c.at("model");
  rc.model.m = static_cast<std::size_t>(whole(m.at("m"), "model.m"));
  rc.model.beta0 = number(m.at("beta0"), "model.beta0");
  rc.model.lyap_exponent = number(m.at("lyap_exponent"), "model.lyap_exponent");
  rc.model.phi = keyed("model.phi_choice",
                       [&] { return model::basis_from_string(m.at("phi_choice").get<std::string>()); });
  rc.model.bias = keyed("model.bias_choice", [&] {
    return model::basis_from_string(m.at("bias_choice").get<std::string>());
  });
  rc.model.coupling = keyed("model.coupling", [&] {
    return model::coupling_from_string(m.at("coupling").get<std::string>());
  });
  model::build_model(rc.model);

  const Json& s = c.at("schedule");
  rc.schedule = keyed("schedule.kind", [&] {
    return step_kind_from_string(s.at("kind").get<std::string>());
  }) == StepKind::polynomial
                    ? make_step_schedule(StepKind::polynomial, number(s.at("gamma0"), "schedule.gamma0"),
                                         number(s.at("rho"), "schedule.rho"),
                                         whole(s.at("n_total"), "schedule.n_total"))
                    : make_step_schedule(StepKind::constant, number(s.at("gamma0"), "schedule.gamma0"),
                                         std::nullopt, whole(s.at("n_total"), "schedule.n_total"));

  rc.reprojection = ReprojectionFamily(number(at(c, "reprojection", "r0"), "reprojection.r0"),
                                       number(at(c, "reprojection", "growth"), "reprojection.growth"));

  rc.rates.alpha = number(at(c, "rates", "alpha"), "rates.alpha");
  rc.rates.beta = number(at(c, "rates", "beta"), "rates.beta");
  rc.rates.zeta = number(at(c, "rates", "zeta"), "rates.zeta");
  rc.rates.kappa = number(at(c, "rates", "kappa"), "rates.kappa");
  validate(rc.rates);

  const Json& e = c.at("experiment");
  Experiment& x = rc.experiment;
  x.levels = level_list(e.at("levels"), "experiment.levels");
  x.diagnostic_levels = level_list(e.at("diagnostic_levels"), "experiment.diagnostic_levels");
  x.level = small_whole(e.at("level"), "experiment.level");
  x.theta = number(e.at("theta"), "experiment.theta");
  x.theta_prime = number(e.at("theta_prime"), "experiment.theta_prime");
  x.norm_exponent = number(e.at("norm_exponent"), "experiment.norm_exponent");
  const Json& g = e.at("theta_grid");
  x.theta_grid.min = number(g.at("min"), "experiment.theta_grid.min");
  x.theta_grid.max = number(g.at("max"), "experiment.theta_grid.max");
  x.theta_grid.count = whole(g.at("count"), "experiment.theta_grid.count");
  x.certify_levels = level_list(e.at("certify_levels"), "experiment.certify_levels");
  x.replicates = whole(e.at("replicates"), "experiment.replicates");
  x.theta0 = number(e.at("theta0"), "experiment.theta0");
  if (!e.at("x0").is_null()) x.x0 = whole(e.at("x0"), "experiment.x0");
  x.epsilon = number(e.at("epsilon"), "experiment.epsilon");
  x.epsilons = number_list(e.at("epsilons"), "experiment.epsilons");
  x.n_min = whole(e.at("n_min"), "experiment.n_min");
  x.c_n = number(e.at("c_n"), "experiment.c_n");
  x.tolerance = number(e.at("tolerance"), "experiment.tolerance");
  x.lambda_floor = number(e.at("lambda_floor"), "experiment.lambda_floor");
  x.out_of_sample = whole(e.at("out_of_sample"), "experiment.out_of_sample");

  if (x.theta_grid.count == 0) throw ValidationError("experiment.theta_grid.count must be positive");
  if (!(x.theta_grid.min <= x.theta_grid.max))
    throw ValidationError("experiment.theta_grid.min must not exceed experiment.theta_grid.max");
  if (!(x.norm_exponent > 0.0 && x.norm_exponent <= 1.0))
    throw ValidationError("experiment.norm_exponent must lie in (0, 1]");
  if (!(x.tolerance > 0.0)) throw ValidationError("experiment.tolerance must be positive");
  if (!(x.c_n > 0.0)) throw ValidationError("experiment.c_n must be positive");
  if (x.n_min == 0) throw ValidationError("experiment.n_min must be at least 1");
  if (x.x0 && *x.x0 >= rc.model.m)
    throw ValidationError("experiment.x0 must be a state index below model.m");
  if (!rc.reprojection.set(0).contains(x.theta0))
    throw ValidationError("experiment.theta0 must lie in the first reprojection set");

  rc.seed = whole(c.at("seed"), "seed");
  rc.workers = small_whole(c.at("workers"), "workers");
  if (rc.workers == 0) throw ValidationError("workers must be at least 1");
  rc.output = c.at("output").get<std::string>();
  rc.trace = c.at("trace").get<bool>();
  return rc;
}

}  // namespace mlsa::cli

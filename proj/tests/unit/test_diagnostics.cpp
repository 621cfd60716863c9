#include <doctest.h>

#include <cmath>
#include <vector>

#include "mlsa/diagnostics.hpp"
#include "mlsa/errors.hpp"
#include "mlsa/finite_model.hpp"
#include "mlsa/mean_field.hpp"

using namespace mlsa;
using namespace mlsa::oracle;

namespace {

const std::vector<unsigned> kLevels = {2, 3, 4, 5, 6, 7, 8};

model::FiniteLevelModel with_bias(model::Basis b) {
  model::ModelSpec s;
  s.bias = b;
  return model::build_model(s);
}

}  // namespace

TEST_SUITE("oracle-diagnostics") {

TEST_CASE("rate slopes match the injected bias rate") {
  const auto m = with_bias(model::Basis::cosine);
  const auto d = rate_diagnostics(m, kLevels, 0.5);
  for (const char* name : {"kernel_gap", "measure_gap", "drift_gap"}) {
    const auto& f = find_slope(d.slopes, name);
    CHECK_FALSE(f.exact);
    CHECK(std::abs(f.slope + 1.0) <= 0.3);
  }
  CHECK(find_slope(d.slopes, "measure_gap").slope == doctest::Approx(-1.0).epsilon(0.2));
  CHECK(find_slope(d.slopes, "drift_gap.derivative").exact);
  CHECK_THROWS_AS(find_slope(d.slopes, "nope"), ValidationError);
}

TEST_CASE("first drift quantity is exactly Delta^beta0 |pi(c)|") {
  const auto m = with_bias(model::Basis::cosine);
  const auto d = rate_diagnostics(m, kLevels, 0.5);
  const auto pi = model::target_density(m, Level::limit(), 0.5);
  const double pic = std::abs(pi.dot(m.bias()));
  for (const auto& r : d.rows)
    CHECK(r.mean_drift_gap == doctest::Approx(Level(r.level).delta() * pic).epsilon(1e-12));
}

TEST_CASE("no bias means exact zeros") {
  const auto m = with_bias(model::Basis::zero);
  const auto d = rate_diagnostics(m, kLevels, 0.5);
  for (const auto& s : d.slopes) CHECK(s.fit.exact);
  const auto l = lemma_diagnostics(m, kLevels, 0.5, 0.5);
  CHECK(find_slope(l.slopes, "poisson_level_gap").exact);
  CHECK(find_slope(l.slopes, "derivative_gap").exact);
}

TEST_CASE("rate diagnostics preconditions") {
  const auto m = with_bias(model::Basis::cosine);
  const std::vector<unsigned> few = {2, 3, 4};
  CHECK_THROWS_AS(rate_diagnostics(m, few, 0.5), ValidationError);
  const std::vector<unsigned> zero = {0, 1, 2, 3};
  CHECK_THROWS_AS(rate_diagnostics(m, zero, 0.5), ValidationError);
}

TEST_CASE("lemma diagnostics on the default model") {
  const auto m = with_bias(model::Basis::cosine);
  const auto d = lemma_diagnostics(m, kLevels, 0.5, 0.5);
  CHECK(std::abs(find_slope(d.slopes, "poisson_level_gap").slope + 1.0) <= 0.3);
  CHECK(find_slope(d.slopes, "poisson_theta_gap").exact);
  // faster than the bound on this symmetric model
  CHECK(find_slope(d.slopes, "derivative_gap").slope <= -1.0 + 0.3);
  for (const auto& r : d.rows) {
    CHECK(r.poisson_theta_gap == 0.0);
    CHECK(r.holder_ratio == 0.0);
    CHECK(r.lipschitz_ratio > 0.0);
    const double var_gap = std::abs(oracle::field_derivative(m, Level(r.level), 0.5) -
                                    oracle::field_derivative(m, Level(r.level - 1), 0.5));
    CHECK(r.derivative_gap == doctest::Approx(var_gap).epsilon(1e-9));
  }
}

TEST_CASE("lemma diagnostics on the skewed-bias model") {
  const auto m = with_bias(model::Basis::skew_cosine);
  const auto d = lemma_diagnostics(m, kLevels, 0.5, 0.5);
  CHECK(std::abs(find_slope(d.slopes, "poisson_level_gap").slope + 1.0) <= 0.3);
  CHECK(std::abs(find_slope(d.slopes, "derivative_gap").slope + 1.0) <= 0.3);
}

TEST_CASE("theta continuity ratios are finite for distinct theta") {
  const auto m = with_bias(model::Basis::cosine);
  const auto d = lemma_diagnostics(m, kLevels, 0.5, 0.6);
  for (const auto& r : d.rows) {
    CHECK(r.poisson_theta_gap > 0.0);
    CHECK(std::isfinite(r.holder_ratio));
    CHECK(r.holder_ratio < 1e3);
  }
  const auto close = lemma_diagnostics(m, kLevels, 0.5, 0.55);
  for (std::size_t i = 0; i < d.rows.size(); ++i)
    CHECK(close.rows[i].poisson_theta_gap < d.rows[i].poisson_theta_gap);
}

}

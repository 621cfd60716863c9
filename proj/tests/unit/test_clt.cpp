#include <doctest.h>

#include <cmath>

#include "mlsa/clt_variance.hpp"
#include "mlsa/errors.hpp"
#include "mlsa/finite_model.hpp"
#include "mlsa/variance.hpp"

using namespace mlsa;
using namespace mlsa::sa;

TEST_SUITE("sa-clt") {

TEST_CASE("no bias gives a zero estimate") {
  model::ModelSpec s;
  s.bias = model::Basis::zero;
  const auto m = model::build_model(s);
  const auto sched = StepSchedule::polynomial(1.0, 0.75, 5000);
  CltOptions o;
  o.reproj = ReprojectionFamily(2.0, 1.0);
  const auto e = empirical_clt_variance(m, Level(3), sched, 5000, 100, 1, o);
  CHECK(e.estimate == 0.0);
  CHECK(e.oracle_increment == 0.0);
  CHECK(e.discarded == 0);
}

TEST_CASE("independent seed blocks agree") {
  const auto m = model::build_model(model::ModelSpec{});
  const std::uint64_t n = 50000;
  const auto sched = StepSchedule::polynomial(1.0, 0.75, n);
  CltOptions o;
  o.reproj = ReprojectionFamily(2.0, 1.0);
  const auto a = empirical_clt_variance(m, Level(3), sched, n, 100, 0, o);
  const auto b = empirical_clt_variance(m, Level(3), sched, n, 100, 1000, o);
  const auto c = empirical_clt_variance(m, Level(3), sched, n, 100, 2000, o);
  const double exact = oracle::asymptotic_variance_exact(m, Level(3)).sigma;
  for (const auto* e : {&a, &b, &c}) {
    CHECK(e->kept + e->discarded == 100);
    CHECK(e->standard_error > 0.0);
    CHECK(std::abs(e->estimate - exact) <= 4.0 * e->standard_error);
  }
  CHECK(std::abs(a.estimate - b.estimate) <= 4.0 * std::hypot(a.standard_error, b.standard_error));
  CHECK(std::abs(b.estimate - c.estimate) <= 4.0 * std::hypot(b.standard_error, c.standard_error));
}

TEST_CASE("results do not depend on the worker count") {
  const auto m = model::build_model(model::ModelSpec{});
  const auto sched = StepSchedule::polynomial(1.0, 0.75, 2000);
  CltOptions one;
  one.reproj = ReprojectionFamily(2.0, 1.0);
  CltOptions four = one;
  four.workers = 4;
  const auto a = empirical_clt_variance(m, Level(2), sched, 2000, 100, 5, one);
  const auto b = empirical_clt_variance(m, Level(2), sched, 2000, 100, 5, four);
  CHECK(a.estimate == b.estimate);
  CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("preconditions") {
  const auto m = model::build_model(model::ModelSpec{});
  const auto poly = StepSchedule::polynomial(1.0, 0.75, 100);
  CHECK_THROWS_AS(empirical_clt_variance(m, Level(3), poly, 100, 99, 0), ValidationError);
  CHECK_THROWS_AS(empirical_clt_variance(m, Level(0), poly, 100, 100, 0), ValidationError);
  CHECK_THROWS_AS(empirical_clt_variance(m, Level(3), StepSchedule::constant(0.01, 100), 100, 100, 0),
                  ValidationError);
}

}

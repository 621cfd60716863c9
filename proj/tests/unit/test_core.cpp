#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlsa/errors.hpp"
#include "mlsa/level.hpp"
#include "mlsa/parallel.hpp"
#include "mlsa/rates.hpp"
#include "mlsa/reprojection.hpp"
#include "mlsa/rng.hpp"
#include "mlsa/stats.hpp"
#include "mlsa/step_schedule.hpp"

using namespace mlsa;

TEST_SUITE("core") {

TEST_CASE("level delta is an exact power of two") {
  for (unsigned l = 0; l < 60; ++l) CHECK(Level(l).delta() == std::ldexp(1.0, -static_cast<int>(l)));
  CHECK(Level(0).delta() == 1.0);
  CHECK(Level::limit().delta() == 0.0);
  CHECK(Level::limit().is_limit());
  CHECK(Level(3).coarser() == Level(2));
  CHECK_THROWS_AS(Level(0).coarser(), ValidationError);
  CHECK_THROWS_AS(Level::limit().index(), ValidationError);
  CHECK(Level::limit().to_string() == "inf");
}

TEST_CASE("polynomial schedule evaluates gamma0 n^-rho") {
  const auto s = make_step_schedule(StepKind::polynomial, 1.0, 0.75, 10);
  CHECK(s.step_size(3) == doctest::Approx(std::pow(3.0, -0.75)).epsilon(1e-15));
  CHECK(s.step_size(3) == doctest::Approx(0.43869).epsilon(1e-4));
  CHECK(s.step_size(1) == 1.0);
}

TEST_CASE("constant schedule") {
  const auto s = make_step_schedule(StepKind::constant, 0.1, std::nullopt, 100);
  for (std::uint64_t n = 1; n <= 100; ++n) CHECK(s.step_size(n) == 0.1);
  CHECK(s.kind() == StepKind::constant);
}

TEST_CASE("schedule rejects rho outside (1/2, 1) naming the condition") {
  auto message = [](double rho) {
    try {
      make_step_schedule(StepKind::polynomial, 1.0, rho, 10);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(1.0).find("log(gamma_n/gamma_{n-1}) = o(gamma_n)") != std::string::npos);
  CHECK(message(0.5).find("sum(gamma_n^2) < infinity") != std::string::npos);
  CHECK(message(0.3).find("sum(gamma_n^2) < infinity") != std::string::npos);
  CHECK(message(1.5).find("sum(gamma_n) = infinity") != std::string::npos);
  CHECK(message(0.75).empty());
  CHECK_THROWS_AS(make_step_schedule(StepKind::polynomial, 0.0, 0.75, 10), ValidationError);
  CHECK_THROWS_AS(make_step_schedule(StepKind::constant, -1.0, std::nullopt, 10), ValidationError);
  CHECK_THROWS_AS(make_step_schedule(StepKind::constant, 1.0, std::nullopt, 0), ValidationError);
}

TEST_CASE("accepted polynomial schedules satisfy the three step conditions numerically") {
  for (double rho : {0.51, 0.6, 0.75, 0.9, 0.99}) {
    const auto s = make_step_schedule(StepKind::polynomial, 1.0, rho, 20000);
    // ratio diagnostic decreases towards 0
    double prev = s.ratio_diagnostic(2);
    for (std::uint64_t n = 3; n <= 20000; n += 97) {
      const double r = s.ratio_diagnostic(n);
      CHECK(r < prev);
      prev = r;
    }
    CHECK(s.ratio_diagnostic(20000) == doctest::Approx(rho * std::pow(20000.0, rho - 1.0)).epsilon(1e-3));
    // partial sums keep growing, partial sums of squares level off
    CHECK(s.partial_sum(20000) - s.partial_sum(10000) > 0.1 * (s.partial_sum(10000) - s.partial_sum(5000)));
    const double tail_sq = s.partial_sum_squares(20000) - s.partial_sum_squares(10000);
    const double head_sq = s.partial_sum_squares(10000) - s.partial_sum_squares(5000);
    CHECK(tail_sq < head_sq);
  }
}

TEST_CASE("reprojection sets") {
  const ReprojectionFamily f(1.0, 1.0);
  CHECK(reprojection_set(f, 0).lo == -1.0);
  CHECK(reprojection_set(f, 0).hi == 1.0);
  CHECK(reprojection_set(f, 3).lo == -4.0);
  CHECK(reprojection_set(f, 3).hi == 4.0);
  CHECK(reprojection_set(f, 5).contains(reprojection_set(f, 2)));
  for (std::uint64_t k = 1; k < 200; ++k) CHECK(f.set(k).contains(f.set(k - 1)));
  for (double theta : {0.0, 0.9, -3.5, 17.25, -1e6}) {
    const auto k = f.first_containing(theta);
    CHECK(f.set(k).contains(theta));
    if (k > 0) CHECK_FALSE(f.set(k - 1).contains(theta));
  }
  CHECK_THROWS_AS(ReprojectionFamily(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(ReprojectionFamily(1.0, -1.0), ValidationError);
}

TEST_CASE("rate parameters") {
  RateParameters r;
  CHECK_NOTHROW(validate(r));
  CHECK(r.variance_rate() == 1.0);
  r.zeta = 0.5;
  CHECK_THROWS_AS(validate(r), ValidationError);
  r.zeta = 1.01;
  CHECK_THROWS_AS(validate(r), ValidationError);
  r = RateParameters{};
  r.kappa = 0.0;
  CHECK_THROWS_AS(validate(r), ValidationError);
  r = RateParameters{2.0, 0.7, 0.6, 0.5};
  CHECK(r.variance_rate() == doctest::Approx(0.7));
}

TEST_CASE("rng is reproducible and in range") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int d = a.direction();
    CHECK(d == b.direction());
    CHECK((d == 1 || d == -1));
    const auto k = a.index(7);
    CHECK(k == b.index(7));
    CHECK(k < 7);
  }
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("rng direction is balanced") {
  Rng r(7);
  int up = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) up += r.direction() > 0;
  CHECK(std::abs(up - n / 2) < 4 * std::sqrt(n * 0.25));
}

TEST_CASE("slope fits") {
  std::vector<double> l = {1, 2, 3, 4};
  std::vector<double> v = {0.5, 0.25, 0.125, 0.0625};
  const auto f = fit_log2_slope(l, v);
  CHECK(f.slope == doctest::Approx(-1.0));
  CHECK_FALSE(f.exact);
  const auto z = fit_log2_slope(l, std::vector<double>{0, 0, 0, 0});
  CHECK(z.exact);
}

TEST_CASE("jackknife of the mean matches the classical standard error") {
  std::vector<double> v = {1.0, 2.0, 4.0, 8.0, 3.0};
  const auto jk = jackknife_mean(v);
  CHECK(jk.estimate == doctest::Approx(3.6));
  CHECK(jk.standard_error == doctest::Approx(std::sqrt(sample_variance(v) / 5.0)));
}

TEST_CASE("parallel_for is independent of the worker count and rethrows the first error") {
  std::vector<double> a(100);
  std::vector<double> b(100);
  parallel_for(100, 1, [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  parallel_for(100, 4, [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  CHECK(a == b);
  try {
    parallel_for(50, 3, [](std::size_t i) {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}

}

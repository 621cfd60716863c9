#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "mlsa/errors.hpp"
#include "mlsa/finite_model.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/stats.hpp"

using namespace mlsa;
using namespace mlsa::model;

namespace {

FiniteLevelModel make(std::size_t m = 32, Basis bias = Basis::cosine) {
  ModelSpec s;
  s.m = m;
  s.bias = bias;
  return build_model(s);
}

Eigen::MatrixXd dense(const CoupledKernelMatrix& K) { return Eigen::MatrixXd(K); }

}  // namespace

TEST_SUITE("finite-model") {

TEST_CASE("build_model defaults and preconditions") {
  ModelSpec s;
  s.m = 64;
  const auto m = build_model(s);
  for (std::size_t x = 0; x < 64; ++x) {
    const double u = static_cast<double>(x) / 63.0;
    CHECK(m.position(x) == doctest::Approx(u));
    const double phi = 0.5 * std::sin(2 * std::numbers::pi * u);
    const double c = 0.5 * std::cos(2 * std::numbers::pi * u);
    CHECK(m.statistic(Level(3), x) == doctest::Approx(phi + 0.125 * c).epsilon(1e-14));
    CHECK(m.statistic(Level::limit(), x) == doctest::Approx(phi).epsilon(1e-14));
    CHECK(std::abs(m.base_statistic()[static_cast<Eigen::Index>(x)]) <= 1.0);
    CHECK(std::abs(m.bias()[static_cast<Eigen::Index>(x)]) <= 1.0);
  }
  ModelSpec three;
  three.m = 3;
  CHECK_NOTHROW(build_model(three));
  ModelSpec two;
  two.m = 2;
  CHECK_THROWS_AS(build_model(two), ValidationError);
  ModelSpec bad;
  bad.beta0 = 0.0;
  CHECK_THROWS_AS(build_model(bad), ValidationError);
  bad = ModelSpec{};
  bad.lyap_exponent = 1.0;
  CHECK_THROWS_AS(build_model(bad), ValidationError);
}

TEST_CASE("drift_H") {
  const auto m = make();
  for (std::size_t x : {0u, 5u, 17u, 31u}) {
    const double s = m.statistic(Level(2), x);
    CHECK(drift_H(m, Level(2), s, x) == 0.0);
    CHECK(std::abs(drift_H(m, Level(2), 0.3, x) - drift_H(m, Level(2), -0.4, x)) ==
          doctest::Approx(0.7));
    CHECK(drift_H(m, Level::limit(), 0.1, x) == doctest::Approx(m.base_statistic()[static_cast<Eigen::Index>(x)] - 0.1));
  }
  // Lipschitz in x with constant (pi + 2^-l pi) in D
  for (unsigned l : {0u, 1u, 4u}) {
    const double bound = std::numbers::pi * (1.0 + std::ldexp(1.0, -static_cast<int>(l)));
    for (std::size_t x = 0; x < 32; ++x)
      for (std::size_t y = x + 1; y < 32; ++y)
        CHECK(std::abs(drift_H(m, Level(l), 0.2, x) - drift_H(m, Level(l), 0.2, y)) <=
              bound * metric_D(m, x, y) + 1e-12);
  }
}

TEST_CASE("metric D") {
  const auto m = make(16);
  for (std::size_t x = 0; x < 16; ++x) {
    CHECK(metric_D(m, x, x) == 0.0);
    for (std::size_t y = 0; y < 16; ++y) {
      CHECK(metric_D(m, x, y) == metric_D(m, y, x));
      for (std::size_t z = 0; z < 16; ++z)
        CHECK(metric_D(m, x, z) <= metric_D(m, x, y) + metric_D(m, y, z) + 1e-15);
    }
  }
}

TEST_CASE("target density") {
  const auto m = make(16);
  const auto flat = target_density(m, Level(2), 0.0);
  for (int i = 0; i < 16; ++i) CHECK(flat[i] == doctest::Approx(1.0 / 16));
  const auto p = target_density(m, Level(2), 0.7);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
  const auto lim = target_density(m, Level::limit(), 0.7);
  Eigen::VectorXd manual = (0.7 * m.base_statistic()).array().exp();
  manual /= manual.sum();
  CHECK((lim - manual).cwiseAbs().maxCoeff() < 1e-14);
  // huge theta does not overflow
  const auto big = target_density(m, Level(1), 800.0);
  CHECK(std::isfinite(big.sum()));
  CHECK(big.sum() == doctest::Approx(1.0));

  // m = 3, theta = 1, l = 0 by hand: u = 0, 1/2, 1
  const auto m3 = make(3);
  const double phi0[3] = {0.0 + 0.5, 0.0 - 0.5, 0.0 + 0.5};  // sin terms vanish, cos = 1, -1, 1
  double z = 0.0;
  for (double v : phi0) z += std::exp(v);
  const auto p3 = target_density(m3, Level(0), 1.0);
  for (int i = 0; i < 3; ++i) CHECK(p3[i] == doctest::Approx(std::exp(phi0[i]) / z).epsilon(1e-12));
}

TEST_CASE("kernel matrix is stochastic, reversible and invariant") {
  const auto m = make(16);
  for (double theta : {-2.0, -0.3, 0.0, 0.7, 1.9}) {
    for (unsigned l : {0u, 1u, 2u, 5u}) {
      const auto K = kernel_matrix(m, Level(l), theta);
      const auto pi = target_density(m, Level(l), theta);
      CHECK(K.minCoeff() >= 0.0);
      CHECK((K.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK((pi.transpose() * K - pi.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
      for (int x = 0; x < 16; ++x)
        for (int y = 0; y < 16; ++y) CHECK(std::abs(pi[x] * K(x, y) - pi[y] * K(y, x)) < 1e-12);
      Eigen::MatrixXd P = K;
      for (int k = 1; k < 40; ++k) P = P * K;
      CHECK(P.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("flat target gives the symmetric nearest-neighbour walk") {
  const auto m = make(8);
  const auto K = kernel_matrix(m, Level(1), 0.0);
  for (int x = 1; x < 7; ++x) {
    CHECK(K(x, x - 1) == 0.5);
    CHECK(K(x, x + 1) == 0.5);
    CHECK(K(x, x) == 0.0);
  }
  CHECK(K(0, 0) == 0.5);
  CHECK(K(7, 7) == 0.5);
}

TEST_CASE("coupled kernel marginals reproduce both single-level kernels") {
  const auto m = make(12);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> th(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = th(gen);
    const double tb = th(gen);
    const unsigned l = 1 + trial % 5;
    for (Coupling c : {Coupling::crn, Coupling::independent}) {
      const auto Kc = dense(coupled_kernel_matrix(m, Level(l), t, tb, c));
      const auto Kf = kernel_matrix(m, Level(l), t);
      const auto Kb = kernel_matrix(m, Level(l - 1), tb);
      CHECK((Kc.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      for (std::size_t x = 0; x < 12; ++x) {
        for (std::size_t y = 0; y < 12; ++y) {
          const auto r = static_cast<Eigen::Index>(pair_index(12, x, y));
          for (std::size_t a = 0; a < 12; ++a) {
            double fine = 0.0;
            double coarse = 0.0;
            for (std::size_t b = 0; b < 12; ++b) {
              fine += Kc(r, static_cast<Eigen::Index>(pair_index(12, a, b)));
              coarse += Kc(r, static_cast<Eigen::Index>(pair_index(12, b, a)));
            }
            CHECK(std::abs(fine - Kf(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(a))) <= 1e-12);
            CHECK(std::abs(coarse - Kb(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(a))) <= 1e-12);
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(coupled_kernel_matrix(m, Level(0), 0.1, 0.1), ValidationError);
}

TEST_CASE("identical chains under CRN keep the diagonal") {
  ModelSpec s;
  s.m = 10;
  s.bias = Basis::zero;
  const auto m = build_model(s);
  const auto Kc = dense(coupled_kernel_matrix(m, Level(3), 0.8, 0.8));
  for (std::size_t x = 0; x < 10; ++x) {
    const auto r = static_cast<Eigen::Index>(pair_index(10, x, x));
    double diag = 0.0;
    for (std::size_t y = 0; y < 10; ++y) diag += Kc(r, static_cast<Eigen::Index>(pair_index(10, y, y)));
    CHECK(diag == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("flat targets move in lockstep under CRN") {
  const auto m = make(10);
  Rng rng(11);
  std::size_t x = 2;
  std::size_t y = 6;
  const double d0 = metric_D(m, x, y);
  ModelSpec s;
  s.m = 10;
  s.bias = Basis::zero;
  s.phi = Basis::zero;
  const auto flat = build_model(s);
  for (int n = 0; n < 2000; ++n) {
    std::tie(x, y) = coupled_sample_step(flat, Level(2), 0.0, 0.0, x, y, rng);
    if (x == 0 || y == 9) break;  // a boundary rejection changes the gap
    CHECK(metric_D(flat, x, y) == doctest::Approx(d0));
  }
}

TEST_CASE("lyapunov function") {
  const auto m = make(8);
  const auto flat = lyapunov_V(m, Level(2), 0.0);
  for (int i = 0; i < 8; ++i) CHECK(flat[i] == 1.0);
  const auto V = lyapunov_V(m, Level(0), 1.0);
  const auto pi = target_density(m, Level(0), 1.0);
  CHECK(V.minCoeff() == doctest::Approx(1.0));
  CHECK(V.minCoeff() >= 1.0);
  CHECK(V.maxCoeff() == doctest::Approx(std::pow(pi.minCoeff() / pi.maxCoeff(), -0.5)));
}

TEST_CASE("neighbouring-level Lyapunov ratios stay bounded") {
  const auto m = make();
  double worst = 0.0;
  for (double theta = -2.0; theta <= 2.0; theta += 0.25)
    for (unsigned l = 1; l <= 8; ++l)
      worst = std::max(worst, lyapunov_V(m, Level(l - 1), theta)
                                  .cwiseQuotient(lyapunov_V(m, Level(l), theta))
                                  .maxCoeff());
  CHECK(worst < 3.0);
}

TEST_CASE("synthetic bias rate of the target law") {
  const auto m = make();
  std::vector<double> ls;
  std::vector<double> gaps;
  const auto lim = target_density(m, Level::limit(), 0.5);
  for (unsigned l = 2; l <= 8; ++l) {
    ls.push_back(l);
    gaps.push_back((target_density(m, Level(l), 0.5) - lim).cwiseAbs().sum());
  }
  CHECK(fit_log2_slope(ls, gaps).slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("samplers follow the kernel rows") {
  const auto m = make(16);
  const auto K = kernel_matrix(m, Level(1), 0.7);
  Rng rng(5);
  for (std::size_t x : {0u, 7u, 15u}) {
    std::vector<double> freq(16, 0.0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) freq[sample_step(m, Level(1), 0.7, x, rng)] += 1.0 / n;
    double tv = 0.0;
    for (int y = 0; y < 16; ++y) {
      const double p = K(static_cast<Eigen::Index>(x), y);
      tv += 0.5 * std::abs(freq[static_cast<std::size_t>(y)] - p);
      CHECK(std::abs(freq[static_cast<std::size_t>(y)] - p) <= 4 * std::sqrt(p * (1 - p) / n) + 1e-12);
    }
    CHECK(tv < 0.01);
  }
  // flat interior moves
  Rng r2(9);
  int up = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) up += sample_step(m, Level(1), 0.0, 8, r2) == 9;
  CHECK(std::abs(up - n / 2) < 4 * std::sqrt(n * 0.25));
}

TEST_CASE("coupled sampler follows the coupled kernel row and consumes two draws") {
  const auto m = make(8);
  const auto Kc = dense(coupled_kernel_matrix(m, Level(2), 0.9, -0.4));
  Rng rng(21);
  const std::size_t x = 3;
  const std::size_t y = 4;
  std::vector<double> freq(64, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = coupled_sample_step(m, Level(2), 0.9, -0.4, x, y, rng);
    freq[pair_index(8, a, b)] += 1.0 / n;
  }
  const auto r = static_cast<Eigen::Index>(pair_index(8, x, y));
  for (int k = 0; k < 64; ++k) {
    const double p = Kc(r, k);
    CHECK(std::abs(freq[static_cast<std::size_t>(k)] - p) <= 4 * std::sqrt(p * (1 - p) / n) + 1e-12);
  }

  Rng a(77);
  Rng b(77);
  coupled_sample_step(m, Level(2), 0.9, -0.4, x, y, a);
  b.direction();
  b.uniform();
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("same seed, same trajectory") {
  const auto m = make();
  Rng a(123);
  Rng b(123);
  std::size_t x = 4;
  std::size_t y = 4;
  for (int i = 0; i < 1000; ++i) {
    x = sample_step(m, Level(3), 0.4, x, a);
    y = sample_step(m, Level(3), 0.4, y, b);
    CHECK(x == y);
  }
}

}

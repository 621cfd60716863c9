#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "mlsa/finite_model.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/mean_field.hpp"
#include "mlsa/rng.hpp"
#include "mlsa/stats.hpp"
#include "mlsa/variance.hpp"

using namespace mlsa;
using namespace mlsa::oracle;

namespace {

model::FiniteLevelModel with_bias(model::Basis b, std::size_t m = 32) {
  model::ModelSpec s;
  s.m = m;
  s.bias = b;
  return model::build_model(s);
}

}  // namespace

TEST_SUITE("oracle-variance") {

TEST_CASE("variance report invariants on the default model") {
  const auto m = with_bias(model::Basis::cosine);
  for (unsigned l = 1; l <= 8; ++l) {
    const auto r = asymptotic_variance_exact(m, Level(l));
    CHECK(std::abs(r.sigma - (r.t1 + r.t2)) <= 1e-10);
    CHECK(std::abs(r.t1 - (r.t3 + r.t4)) <= 1e-10);
    CHECK(r.sigma >= -1e-10);
    CHECK(r.dh_l < 0.0);
    CHECK(r.dh_lm1 < 0.0);
    CHECK(r.coupled_stationary.size() == 32 * 32);
    CHECK(r.theta_star_l == doctest::Approx(root_theta_star(m, Level(l))));
  }
}

TEST_CASE("sigma, coupled distance and root gaps decrease over levels 2..8") {
  const auto m = with_bias(model::Basis::cosine);
  double s_prev = INFINITY;
  double d_prev = INFINITY;
  double g_prev = INFINITY;
  for (unsigned l = 2; l <= 8; ++l) {
    const auto r = asymptotic_variance_exact(m, Level(l));
    const double gap = std::abs(r.theta_star_l - r.theta_star_lm1);
    CHECK(r.sigma < s_prev);
    CHECK(r.mean_squared_distance < d_prev);
    CHECK(gap < g_prev);
    s_prev = r.sigma;
    d_prev = r.mean_squared_distance;
    g_prev = gap;
  }
}

TEST_CASE("identical levels under CRN give zero variance") {
  const auto m = with_bias(model::Basis::zero);
  for (unsigned l : {1u, 3u}) {
    const auto r = asymptotic_variance_exact(m, Level(l));
    CHECK(std::abs(r.sigma) <= 1e-8);
    CHECK(r.mean_squared_distance <= 1e-12);
  }
}

TEST_CASE("independent coupling never beats CRN") {
  const auto m = with_bias(model::Basis::cosine, 16);
  for (unsigned l = 1; l <= 6; ++l) {
    const auto crn = asymptotic_variance_exact(m, Level(l), model::Coupling::crn);
    const auto ind = asymptotic_variance_exact(m, Level(l), model::Coupling::independent);
    CHECK(ind.sigma >= crn.sigma);
    // The product law makes the cross term a product of two centred means.
    CHECK(std::abs(ind.cross_term) < 1e-9);
  }
}

TEST_CASE("marginal term is the single-chain variance, checked against batch means") {
  const auto m = with_bias(model::Basis::cosine, 16);
  const Level level(2);
  const auto a = analyze_level_pair(m, level);
  const Eigen::VectorXd& H = a.H_hat_l.g_hat;
  const Eigen::VectorXd& KH = a.H_hat_l.Kg_hat;
  const double classical = a.pi_l.dot((H.array().square() - KH.array().square()).matrix());
  const auto r = variance_from_analysis(m, a);
  CHECK(r.fine_term == doctest::Approx(classical).epsilon(1e-10));

  // Long run of the chain at the root; batch means of H_l(theta*, X_k).
  const Eigen::VectorXd stat = m.statistic(level);
  Rng rng(2024);
  std::size_t x = 8;
  const std::size_t n = 2000000;
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    x = model::sample_step(m, level, a.theta_star_l, x, rng);
    f[k] = stat[static_cast<Eigen::Index>(x)] - a.theta_star_l;
  }
  const auto bm = testing::batch_means(f, 100);
  CHECK(std::abs(bm.variance - classical) <= 3.0 * bm.standard_error);
}

TEST_CASE("coupled expectation helpers") {
  const std::size_t m = 3;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(9);
  p[model::pair_index(m, 0, 1)] = 0.25;
  p[model::pair_index(m, 2, 2)] = 0.75;
  Eigen::VectorXd f(3);
  f << 1.0, 2.0, 3.0;
  Eigen::VectorXd g(3);
  g << -1.0, 4.0, 0.5;
  CHECK(coupled_expectation(p, f, g) == doctest::Approx(0.25 * 1.0 * 4.0 + 0.75 * 3.0 * 0.5));
  const auto mdl = with_bias(model::Basis::cosine, 3);
  CHECK(coupled_mean_squared_distance(mdl, p) == doctest::Approx(0.25 * 0.25));
}

}

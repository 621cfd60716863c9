#include <doctest.h>

#include <random>
#include <vector>

#include "mlsa/ergodicity.hpp"
#include "mlsa/finite_model.hpp"
#include "mlsa/kernels.hpp"

using namespace mlsa;
using namespace mlsa::oracle;

namespace {

std::vector<double> grid(double lo, double hi, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(lo + (hi - lo) * i / (count - 1));
  return g;
}

}  // namespace

TEST_SUITE("oracle-ergodicity") {

TEST_CASE("flat target: V is constant and the drift holds") {
  const auto m = model::build_model(model::ModelSpec{});
  const std::vector<unsigned> levels = {0, 3};
  const std::vector<double> theta = {0.0};
  const auto c = certify_drift_minorization(m, levels, theta);
  CHECK(c.valid);
  CHECK(c.small_set.size() == 32);
  CHECK(c.lambda_drift == doctest::Approx(0.5));
  CHECK(c.b_drift == doctest::Approx(0.5));
  for (std::size_t x = 0; x < 32; ++x) CHECK(drift_holds(m, c, Level(3), 0.0, x));
}

TEST_CASE("default grid certificate") {
  const auto m = model::build_model(model::ModelSpec{});
  const std::vector<unsigned> levels = {0, 1, 2, 3, 4, 5, 6};
  const auto g = grid(-2.0, 2.0, 41);
  const auto c = certify_drift_minorization(m, levels, g);
  REQUIRE(c.valid);
  CHECK(c.lambda_drift > 0.0);
  CHECK(c.lambda_drift < 1.0);
  CHECK(c.epsilon_minor > 0.0);
  CHECK(c.epsilon_minor < 1.0);
  CHECK(c.rho_hat > 0.0);
  CHECK(c.rho_hat < 1.0);
  CHECK(c.nu.sum() == doctest::Approx(1.0));
  CHECK(c.grid_points == 7 * 41);

  // K^k(x, .) >= eps nu(.) on C at every grid point
  for (unsigned l : levels) {
    for (double theta : g) {
      const auto K = model::kernel_matrix(m, Level(l), theta);
      Eigen::MatrixXd P = K;
      for (std::size_t k = 1; k < c.minorization_steps; ++k) P = P * K;
      for (std::size_t x : c.small_set)
        CHECK((P.row(static_cast<Eigen::Index>(x)).transpose() - c.epsilon_minor * c.nu).minCoeff() >= -1e-15);
      for (std::size_t x = 0; x < 32; ++x) CHECK(drift_holds(m, c, Level(l), theta, x));
    }
  }

  // out-of-sample points
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> th(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const unsigned l = levels[gen() % levels.size()];
    const std::size_t x = gen() % 32;
    CHECK(drift_holds(m, c, Level(l), th(gen), x));
  }
}

TEST_CASE("without augmentation the offending state is reported") {
  const auto m = model::build_model(model::ModelSpec{});
  const std::vector<unsigned> levels = {0};
  const std::vector<double> theta = {0.0};
  CertifyOptions o;
  o.augment_small_set = false;
  const auto c = certify_drift_minorization(m, levels, theta, o);
  CHECK_FALSE(c.valid);
  REQUIRE(c.failure.has_value());
  CHECK(c.failure->ratio >= 1.0);
  CHECK(c.failure->level == 0);
  CHECK_FALSE(c.in_small_set(c.failure->state));
}

}

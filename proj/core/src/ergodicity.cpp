#include "mlsa/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mlsa/errors.hpp"
#include "mlsa/kernels.hpp"
#include "mlsa/stats.hpp"

namespace mlsa::oracle {

namespace {

constexpr double kRhoFloor = 1e-11;

double weighted_distance(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                         const Eigen::VectorXd& V) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < P.rows(); ++x) {
    const double s = ((P.row(x).transpose() - pi).cwiseAbs().cwiseProduct(V)).sum() / V[x];
    worst = std::max(worst, s);
  }
  return worst;
}

double second_modulus(const Eigen::MatrixXd& K) {
  if (K.rows() < 2) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(K, false);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mods.begin(), mods.end(), std::greater<>());
  return mods[1];
}

// Contiguous window around the mode, grown towards the heavier neighbour
// until it carries half of the mass.
std::vector<std::size_t> top_mass_window(const Eigen::VectorXd& pi) {
  const auto m = static_cast<std::size_t>(pi.size());
  Eigen::Index mode = 0;
  pi.maxCoeff(&mode);
  std::size_t lo = static_cast<std::size_t>(mode);
  std::size_t hi = lo;
  double mass = pi[mode];
  while (mass < 0.5) {
    const double left = lo > 0 ? pi[static_cast<Eigen::Index>(lo - 1)] : -1.0;
    const double right = hi + 1 < m ? pi[static_cast<Eigen::Index>(hi + 1)] : -1.0;
    if (left >= right) {
      --lo;
      mass += left;
    } else {
      ++hi;
      mass += right;
    }
  }
  std::vector<std::size_t> w;
  for (std::size_t x = lo; x <= hi; ++x) w.push_back(x);
  return w;
}

struct GridPoint {
  double theta;
  unsigned level;
  Eigen::MatrixXd K;
  Eigen::VectorXd pi;
  Eigen::VectorXd V;
  Eigen::VectorXd ratio;  // K V / V
};

}  // namespace

RhoEstimate rho_estimate(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi,
                         const Eigen::VectorXd& V, int max_iterations) {
  if (K.rows() != K.cols() || pi.size() != K.rows() || V.size() != K.rows())
    throw ValidationError("rho_estimate: dimension mismatch");
  if (max_iterations < 2) throw ValidationError("rho_estimate: max_iterations must be at least 2");

  RhoEstimate out;
  out.slem = second_modulus(K);

  std::vector<double> dist;
  Eigen::MatrixXd P = K;
  for (int n = 1; n <= max_iterations; ++n) {
    const double e = weighted_distance(P, pi, V);
    if (!(e > kRhoFloor)) break;
    dist.push_back(e);
    P = P * K;
  }
  out.iterations = static_cast<int>(dist.size());
  if (dist.empty()) return out;
  if (dist.size() == 1) {
    out.rho = 0.0;
    return out;
  }
  const std::size_t end = dist.size();
  const std::size_t begin = std::min(end / 2, end - 2);
  std::vector<double> ns;
  std::vector<double> logs;
  for (std::size_t i = begin; i < end; ++i) {
    ns.push_back(static_cast<double>(i + 1));
    logs.push_back(std::log(dist[i]));
  }
  out.rho = std::min(1.0, std::exp(least_squares(ns, logs).slope));
  return out;
}

bool ErgodicityCertificate::in_small_set(std::size_t x) const {
  return std::binary_search(small_set.begin(), small_set.end(), x);
}

ErgodicityCertificate certify_drift_minorization(const model::FiniteLevelModel& model,
                                                 std::span<const unsigned> levels,
                                                 std::span<const double> theta_grid,
                                                 const CertifyOptions& options) {
  if (levels.empty() || theta_grid.empty())
    throw ValidationError("certify: levels and theta grid must be non-empty");
  if (!(options.lambda_floor > 0.0 && options.lambda_floor < 1.0))
    throw ValidationError("certify: lambda_floor must lie in (0, 1)");

  const std::size_t m = model.size();
  const auto mi = static_cast<Eigen::Index>(m);
  ErgodicityCertificate cert;

  std::vector<GridPoint> grid;
  std::vector<char> in_c(m, 0);
  for (unsigned l : levels) {
    for (double theta : theta_grid) {
      GridPoint g{theta, l, model::kernel_matrix(model, Level(l), theta),
                  model::target_density(model, Level(l), theta),
                  model::lyapunov_V(model, Level(l), theta), {}};
      g.ratio = (g.K * g.V).cwiseQuotient(g.V);
      for (std::size_t x : top_mass_window(g.pi)) in_c[x] = 1;
      grid.push_back(std::move(g));
    }
  }
  cert.grid_points = grid.size();

  // States that cannot contract outside C.
  for (const auto& g : grid) {
    for (std::size_t x = 0; x < m; ++x) {
      if (in_c[x]) continue;
      const double r = g.ratio[static_cast<Eigen::Index>(x)];
      if (r < 1.0) continue;
      if (!options.augment_small_set) {
        if (!cert.failure) cert.failure = CertificateFailure{g.theta, g.level, x, r};
        continue;
      }
      in_c[x] = 1;
      cert.augmented_states.push_back(x);
    }
  }
  std::sort(cert.augmented_states.begin(), cert.augmented_states.end());
  cert.augmented_states.erase(std::unique(cert.augmented_states.begin(), cert.augmented_states.end()),
                              cert.augmented_states.end());
  for (std::size_t x = 0; x < m; ++x)
    if (in_c[x]) cert.small_set.push_back(x);
  if (cert.failure) return cert;

  double lambda = options.lambda_floor;
  for (const auto& g : grid)
    for (std::size_t x = 0; x < m; ++x)
      if (!in_c[x]) lambda = std::max(lambda, g.ratio[static_cast<Eigen::Index>(x)]);
  double b = 0.0;
  for (const auto& g : grid) {
    for (std::size_t x : cert.small_set) {
      const auto i = static_cast<Eigen::Index>(x);
      b = std::max(b, g.ratio[i] * g.V[i] - lambda * g.V[i]);
    }
  }
  cert.lambda_drift = lambda;
  cert.b_drift = b;

  // k-step minorization on C with one nu for the whole grid.
  const std::size_t k_max = options.max_minorization_steps ? options.max_minorization_steps : 4 * m;
  std::vector<Eigen::MatrixXd> powers;
  for (const auto& g : grid) powers.push_back(g.K);
  for (std::size_t k = 1; k <= k_max; ++k) {
    Eigen::VectorXd floor_row = Eigen::VectorXd::Constant(mi, INFINITY);
    for (const auto& P : powers)
      for (std::size_t x : cert.small_set)
        floor_row = floor_row.cwiseMin(P.row(static_cast<Eigen::Index>(x)).transpose());
    const double eps = floor_row.sum();
    if (eps > 1e-12) {
      cert.epsilon_minor = std::min(eps, 1.0);
      cert.minorization_steps = k;
      cert.nu = floor_row / eps;
      double mass = 0.0;
      for (std::size_t x : cert.small_set) mass += cert.nu[static_cast<Eigen::Index>(x)];
      cert.nu_mass = mass;
      break;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) powers[i] = powers[i] * grid[i].K;
  }

  // Rate read off K^s to keep the scan cheap; rho(K^s) = rho(K)^s.
  constexpr int stride = 16;
  double rho = 0.0;
  for (const auto& g : grid) {
    Eigen::MatrixXd Ks = g.K;
    for (int s = 1; s < stride; ++s) Ks = Ks * g.K;
    const RhoEstimate est = rho_estimate(Ks, g.pi, g.V, 400);
    rho = std::max(rho, std::pow(est.rho, 1.0 / stride));
  }
  cert.rho_hat = rho;

  cert.valid = cert.minorization_steps > 0 && cert.epsilon_minor > 0.0 &&
               cert.epsilon_minor <= 1.0 && lambda < 1.0 && rho > 0.0 && rho < 1.0;
  return cert;
}

bool drift_holds(const model::FiniteLevelModel& model, const ErgodicityCertificate& cert,
                 Level level, double theta, std::size_t x, double tolerance) {
  if (x >= model.size()) throw ValidationError("state index out of range");
  const Eigen::MatrixXd K = model::kernel_matrix(model, level, theta);
  const Eigen::VectorXd V = model::lyapunov_V(model, level, theta);
  const auto i = static_cast<Eigen::Index>(x);
  const double kv = K.row(i).dot(V);
  const double rhs = cert.lambda_drift * V[i] + (cert.in_small_set(x) ? cert.b_drift : 0.0);
  return kv <= rhs + tolerance * std::max(1.0, V[i]);
}

}  // namespace mlsa::oracle

#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlsa/finite_model.hpp"
#include "mlsa/stats.hpp"

namespace mlsa::oracle {

// Left-hand sides of the level-convergence assumptions, per level, at a
// fixed theta and norm exponent r.
struct RateRow {
  unsigned level = 0;
  double kernel_gap = 0.0;       // |||K_{theta,l} - K_theta|||_{V_{theta,l}^r}
  double measure_gap = 0.0;      // ||pi_{theta,l} - pi_theta||_{V_theta^r}
  double mean_drift_gap = 0.0;   // |pi_theta(H_l - H)|
  double kernel_drift_gap = 0.0; // |K_theta(H_l - H_{l-1})|_{V_{theta,l-1}^r}
  double derivative_gap = 0.0;   // |pi_theta(dH_l/dtheta - dH/dtheta)|
  double drift_max = 0.0;        // max of the three drift quantities
};

struct NamedSlope {
  std::string name;
  SlopeFit fit;
};

struct RateDiagnostics {
  double theta = 0.0;
  double r = 0.5;
  std::vector<RateRow> rows;
  // "kernel_gap", "measure_gap", "drift_gap" (max of the three), then the drift_gap components.
  std::vector<NamedSlope> slopes;
};

// Requires at least four levels, all >= 1.
RateDiagnostics rate_diagnostics(const model::FiniteLevelModel& model,
                                 std::span<const unsigned> levels, double theta, double r = 0.5);

struct LemmaRow {
  unsigned level = 0;
  double poisson_level_gap = 0.0;  // Poisson solutions at l vs l-1, V^r norm
  double poisson_theta_gap = 0.0;  // Poisson solutions at theta vs theta', fixed l
  double holder_ratio = 0.0;       // theta gap / |theta - theta'|^zeta (0 if theta == theta')
  double derivative_gap = 0.0;     // |dh_l(theta) - dh_{l-1}(theta')|
  double lipschitz_ratio = 0.0;    // max_{x != y} |H^(x) - H^(y)| / D(x, y)
  double lipschitz_bound = 0.0;    // 1 + |H_l|_Lip
  // Variance building blocks at the roots (absolute values).
  double square_vs_cross_fine = 0.0;     // pi-check(H^2 ⊗ 1 - H ⊗ H̄)
  double square_vs_cross_coarse = 0.0;   // pi-check(1 ⊗ H̄^2 - H ⊗ H̄)
  double kernel_square_vs_cross_fine = 0.0;
  double kernel_square_vs_cross_coarse = 0.0;
  double delta_beta = 0.0;              // Delta_l^{beta0}
  double root_gap_zeta = 0.0;           // |theta*_l - theta*_{l-1}|^zeta
  double distance_rms = 0.0;            // pi-check(D^2)^{1/2}
};

struct LemmaDiagnostics {
  double theta = 0.0;
  double theta_prime = 0.0;
  double zeta = 1.0;
  double r = 0.5;
  std::vector<LemmaRow> rows;
  std::vector<NamedSlope> slopes;
};

LemmaDiagnostics lemma_diagnostics(const model::FiniteLevelModel& model,
                                   std::span<const unsigned> levels, double theta,
                                   double theta_prime, double zeta = 1.0, double r = 0.5);

const SlopeFit& find_slope(std::span<const NamedSlope> slopes, const std::string& name);

}  // namespace mlsa::oracle

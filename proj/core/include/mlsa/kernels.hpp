#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mlsa/finite_model.hpp"
#include "mlsa/rng.hpp"

namespace mlsa::model {

// Row-stochastic m x m transition matrix.
using KernelMatrix = Eigen::MatrixXd;
// Row-stochastic m^2 x m^2 matrix on pairs; pair (x, y) has index x * m + y,
// the fine coordinate first.
using CoupledKernelMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline std::size_t pair_index(std::size_t m, std::size_t x, std::size_t y) { return x * m + y; }

// Random-walk Metropolis acceptance probability for the move x -> x + direction
// under the target ∝ exp(theta * stat). Off-grid proposals have probability 0.
double rwm_acceptance(std::span<const double> stat, double theta, std::size_t x, int direction);

// Proposal x +/- 1 with probability 1/2 each, off-grid proposals rejected in
// place, Metropolis acceptance. Reversible with respect to target_density.
KernelMatrix kernel_matrix(const FiniteLevelModel& model, Level level, double theta);

// Coupled kernel of the fine chain (level, theta) and the coarse chain
// (level - 1, theta_bar). Under CRN both chains share the proposal direction
// and the acceptance uniform; the independent option is the product kernel.
// Both marginals equal the single-level kernels exactly.
CoupledKernelMatrix coupled_kernel_matrix(const FiniteLevelModel& model, Level level, double theta,
                                          double theta_bar,
                                          std::optional<Coupling> coupling = std::nullopt);

// One transition of the chain. Consumes one direction draw and one uniform.
std::size_t sample_step(const FiniteLevelModel& model, Level level, double theta, std::size_t x,
                        Rng& rng);

// One transition of the coupled chain. Under CRN this consumes exactly one
// direction draw and one uniform; the independent coupling consumes two of each.
std::pair<std::size_t, std::size_t> coupled_sample_step(const FiniteLevelModel& model, Level level,
                                                        double theta, double theta_bar,
                                                        std::size_t x, std::size_t x_bar, Rng& rng,
                                                        std::optional<Coupling> coupling = std::nullopt);

namespace detail {

// Grid-level steps used by the samplers; `stat` holds phi_l on the grid.
inline std::size_t rwm_move(std::span<const double> stat, double theta, std::size_t x, int direction,
                            double u) {
  const double a = rwm_acceptance(stat, theta, x, direction);
  if (u < a) return direction > 0 ? x + 1 : x - 1;
  return x;
}

}  // namespace detail

}  // namespace mlsa::model

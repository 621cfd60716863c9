#pragma once

#include <Eigen/Dense>

namespace mlsa::oracle {

// g - K g = f - pi(f) with pi(g) = 0.
struct PoissonSolution {
  Eigen::VectorXd g_hat;
  Eigen::VectorXd Kg_hat;
  Eigen::VectorXd centered_f;
  double rcond = 0.0;  // reciprocal condition estimate of I - K + 1 pi^T
};

// Fundamental-matrix solve: (I - K + 1 pi^T) g = f - pi(f), then recentre.
// Throws ValidationError if pi is not invariant for K and NumericalError if
// the system is numerically singular.
PoissonSolution poisson_solve(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi,
                              const Eigen::VectorXd& f);

// Truncated series sum_{n=0}^{N} (K^n - pi)(f). Independent cross-check for
// poisson_solve; converges geometrically for ergodic K.
Eigen::VectorXd poisson_series(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi,
                               const Eigen::VectorXd& f, int n_terms);

}  // namespace mlsa::oracle

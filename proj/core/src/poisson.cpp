#include "mlsa/poisson.hpp"

#include <cmath>
#include <sstream>

#include "mlsa/errors.hpp"

namespace mlsa::oracle {

namespace {

void check_inputs(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
  if (K.rows() != K.cols() || pi.size() != K.rows() || f.size() != K.rows())
    throw ValidationError("poisson: dimension mismatch between kernel, law and function");
}

}  // namespace

PoissonSolution poisson_solve(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi,
                              const Eigen::VectorXd& f) {
  check_inputs(K, pi, f);
  const double invariance = ((pi.transpose() * K).transpose() - pi).cwiseAbs().maxCoeff();
  if (invariance > 1e-9) {
    std::ostringstream os;
    os << "poisson_solve: pi is not invariant for K (max |pi K - pi| = " << invariance << ")";
    throw ValidationError(os.str());
  }

  const Eigen::Index n = K.rows();
  PoissonSolution out;
  out.centered_f = f.array() - pi.dot(f);

  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - K;
  A.rowwise() += pi.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  out.rcond = lu.rcond();
  if (!(out.rcond > 1e-14)) {
    std::ostringstream os;
    os << "poisson_solve: fundamental matrix is ill-conditioned (rcond estimate " << out.rcond
       << ")";
    throw NumericalError(os.str());
  }
  out.g_hat = lu.solve(out.centered_f);
  out.g_hat.array() -= pi.dot(out.g_hat);
  out.Kg_hat = K * out.g_hat;
  return out;
}

Eigen::VectorXd poisson_series(const Eigen::MatrixXd& K, const Eigen::VectorXd& pi,
                               const Eigen::VectorXd& f, int n_terms) {
  check_inputs(K, pi, f);
  if (n_terms < 0) throw ValidationError("poisson_series: n_terms must be non-negative");
  const double mean = pi.dot(f);
  Eigen::VectorXd term = f;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(f.size());
  for (int k = 0; k <= n_terms; ++k) {
    sum.array() += term.array() - mean;
    term = K * term;
  }
  return sum;
}

}  // namespace mlsa::oracle

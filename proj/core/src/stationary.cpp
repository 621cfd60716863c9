#include "mlsa/stationary.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SparseLU>

#include "mlsa/errors.hpp"

namespace mlsa::oracle {

namespace {

void require_ergodic(const ChainStructure& s) {
  if (s.closed_classes != 1) {
    std::ostringstream os;
    os << "stationary: irreducibility check failed, eigenvalue 1 has multiplicity "
       << s.closed_classes << " (" << s.closed_classes << " closed classes)";
    throw NumericalError(os.str());
  }
  if (s.period != 1) {
    std::ostringstream os;
    os << "stationary: aperiodicity check failed, " << s.period
       << " eigenvalues on the unit circle (period " << s.period << ")";
    throw NumericalError(os.str());
  }
}

Eigen::VectorXd finish(Eigen::VectorXd pi) {
  if (!pi.allFinite()) throw NumericalError("stationary: solve produced non-finite values");
  // Transient states solve to zero up to round-off.
  for (Eigen::Index i = 0; i < pi.size(); ++i)
    if (pi[i] < 0.0 && pi[i] > -1e-13) pi[i] = 0.0;
  return pi / pi.sum();
}

}  // namespace

Eigen::VectorXd stationary(const Eigen::MatrixXd& K) {
  if (K.rows() != K.cols() || K.rows() == 0)
    throw ValidationError("stationary: kernel must be a non-empty square matrix");
  require_ergodic(analyze_structure(K));
  const Eigen::Index n = K.rows();
  Eigen::MatrixXd A = K.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;
  return finish(A.fullPivLu().solve(rhs));
}

Eigen::VectorXd stationary(const model::CoupledKernelMatrix& K) {
  if (K.rows() != K.cols() || K.rows() == 0)
    throw ValidationError("stationary: kernel must be a non-empty square matrix");
  require_ergodic(analyze_structure(K));
  const Eigen::Index n = K.rows();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(K.nonZeros() + 2 * n));
  for (Eigen::Index r = 0; r < K.outerSize(); ++r) {
    for (model::CoupledKernelMatrix::InnerIterator it(K, r); it; ++it) {
      // Entry (r, c) of K goes to (c, r) of K^T; row n-1 is replaced below.
      if (it.col() != n - 1) trips.emplace_back(it.col(), r, it.value());
    }
  }
  for (Eigen::Index i = 0; i < n - 1; ++i) trips.emplace_back(i, i, -1.0);
  for (Eigen::Index j = 0; j < n; ++j) trips.emplace_back(n - 1, j, 1.0);

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw NumericalError("stationary: sparse LU factorisation failed: " + lu.lastErrorMessage());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[n - 1] = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw NumericalError("stationary: sparse solve failed");
  return finish(std::move(pi));
}

}  // namespace mlsa::oracle

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mlsa/kernels.hpp"

namespace mlsa::oracle {

// Communication structure of a finite chain, read off the transition graph.
// A single closed class means eigenvalue 1 is simple; the period of that
// class is the number of eigenvalues on the unit circle.
struct ChainStructure {
  std::size_t closed_classes = 0;
  std::size_t period = 0;                   // of the (first) closed class
  std::vector<std::size_t> recurrent_states;  // members of the first closed class
};

ChainStructure analyze_structure(const std::vector<std::vector<std::size_t>>& successors);
ChainStructure analyze_structure(const Eigen::MatrixXd& K, double threshold = 0.0);
ChainStructure analyze_structure(const model::CoupledKernelMatrix& K);

// Solves pi^T K = pi^T with one balance equation replaced by sum(pi) = 1.
// Throws NumericalError when the chain has several closed classes or its
// recurrent class is periodic.
Eigen::VectorXd stationary(const Eigen::MatrixXd& K);
Eigen::VectorXd stationary(const model::CoupledKernelMatrix& K);

}  // namespace mlsa::oracle

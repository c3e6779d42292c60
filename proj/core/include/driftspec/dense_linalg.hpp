#pragma once

#include <Eigen/Dense>

namespace driftspec {

/// Eigen-decomposition of a dense symmetric matrix, ascending.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // orthonormal columns
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is at most
/// rel_tol * ||A||_F. Throws NumericError after max_sweeps.
SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double rel_tol = 1e-12, int max_sweeps = 100);

/// Lower Cholesky factor of an SPD matrix. On failure throws NumericError
/// reporting the smallest pivot encountered.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m);

}  // namespace driftspec

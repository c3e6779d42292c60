#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "driftspec/assembly.hpp"

namespace driftspec {

enum class SolverPath { dense, iterative };

enum class SolverChoice { automatic, dense, iterative };

/// Preconditioner for the iterative path, built on K + sigma M.
enum class PreconditionerKind {
  jacobi,   ///< inverse diagonal
  cholesky  ///< sparse Cholesky factorization
};

std::string_view to_string(SolverPath p);
std::string_view to_string(SolverChoice c);
std::string_view to_string(PreconditionerKind k);

/// Smallest eigenpairs of a pencil, ascending.
///
/// Eigenvectors are M-orthonormal columns with their largest-magnitude entry
/// positive. `residuals[j]` is the backward error
///   ||K v - mu M v||_2 / ((||K||_inf + |mu| ||M||_inf) ||v||_2).
/// `cluster[j]` groups eigenvalues closer than 1e-8 * max|mu|; comparisons
/// inside a cluster must use sorted values, never individual vectors.
struct SpectrumResult {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<double> residuals;
  std::vector<int> cluster;
  SolverPath path = SolverPath::dense;
  int iterations = 0;
  bool converged = true;

  std::size_t size() const { return eigenvalues.size(); }
};

struct SolveOptions {
  SolverChoice solver = SolverChoice::automatic;
  std::size_t dense_cap = 600;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  int max_iterations = 2000;
  /// Extra block columns beyond the requested count.
  std::size_t guard_vectors = 5;
  PreconditionerKind preconditioner = PreconditionerKind::cholesky;
};

/// Dense reference path: M = L L^T, C = L^{-1} K L^{-T}, cyclic Jacobi on C,
/// back-transform. Throws NumericError if M is not positive definite, the
/// Jacobi sweeps do not converge, or dof_count exceeds `dense_cap`.
SpectrumResult solve_dense(const OperatorPencil& p, std::size_t k,
                           std::size_t dense_cap = 600);

/// Locally optimal block preconditioned conjugate gradient (LOBPCG) with
/// block size k + guard_vectors, soft locking and a seeded start block.
/// Returns with `converged == false` when max_iterations is reached.
SpectrumResult solve_iterative(const OperatorPencil& p, std::size_t k,
                               const SolveOptions& opts = {});

/// Dense when the pencil is small enough or forced, otherwise iterative.
SpectrumResult solve_smallest(const OperatorPencil& p, std::size_t k,
                              const SolveOptions& opts = {});

/// v^T K v / v^T M v with K applied in edge-difference form (see
/// OperatorPencil::row_sums), accurate for smooth v on fine meshes.
double rayleigh_quotient(const OperatorPencil& p, const Eigen::VectorXd& v);

/// Rescales eigenvectors from v^T M v = 1 to v^T M v = volume.
void rescale_to_volume(SpectrumResult& r, double volume);

/// Recomputes residuals and cluster ids of `r` against `p`.
void finalize_spectrum(const OperatorPencil& p, SpectrumResult& r);

}  // namespace driftspec

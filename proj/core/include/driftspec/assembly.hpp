#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "driftspec/geometry.hpp"
#include "driftspec/weight.hpp"

namespace driftspec {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class BoundaryCondition { neumann, dirichlet };

enum class ProblemKind { drift_1d, thin_2d };

/// Symmetric pair (K, M) of the generalized problem K v = mu M v.
///
/// K is positive semidefinite and M positive definite. For Neumann problems
/// the constants lie in the kernel of K. `dof_to_node` maps each unknown to
/// its mesh node (Dirichlet elimination drops the two endpoints).
struct OperatorPencil {
  SparseMatrix stiffness;
  SparseMatrix mass;
  std::vector<std::size_t> dof_to_node;
  /// Exact row sums of K as assembled (0 for Neumann rows, the eliminated
  /// boundary coupling for Dirichlet rows). Empty means "use K's own row
  /// sums", which carry rounding from summing the diagonal.
  std::vector<double> row_sums;
  ProblemKind kind = ProblemKind::drift_1d;
  BoundaryCondition bc = BoundaryCondition::neumann;
  std::string description;

  std::size_t dof_count() const { return dof_to_node.size(); }
};

/// Piecewise-linear drift pencil:
///   K_ij = int phi_i' phi_j' e^{-phi} dx,   M_ij = int phi_i phi_j e^{-phi} dx
/// with 3-point Gauss quadrature per element.
OperatorPencil assemble_drift_1d(const IntervalMesh& mesh, const WeightSpec& w,
                                 BoundaryCondition bc);

/// Dirichlet pencil; the default weight is the Euclidean case phi == 0.
OperatorPencil assemble_dirichlet_1d(const IntervalMesh& mesh,
                                     const WeightSpec& w = WeightSpec());

/// Bilinear Neumann pencil of the thin domain in reference coordinates.
/// With y = eps f(x) t the weak form is
///   K = int int [(u_x - t (f'/f) u_t)(v_x - t (f'/f) v_t) + u_t v_t / (eps f)^2] eps f dt dx
///   M = int int u v eps f dt dx
/// integrated with 2x2 Gauss points per cell.
OperatorPencil assemble_thin_2d(const MappedGrid& grid);

/// Throws NumericError when stiffness or mass is not bit-exactly symmetric or,
/// for Neumann pencils, when |K 1| exceeds 1e-12 ||K||.
void check_pencil_invariants(const OperatorPencil& p);

/// Max-row-sum norm, used to scale residuals.
double norm_inf(const SparseMatrix& a);

}  // namespace driftspec

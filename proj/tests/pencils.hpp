#pragma once

// Random generalized eigenproblems shared by the solver tests and the
// acceptance run.

#include <random>
#include <string>

#include <Eigen/Dense>

#include "driftspec/assembly.hpp"
#include "driftspec/geometry.hpp"

namespace testing_pencils {

/// Dense SPD-pair pencil: K = A^T A / n (positive definite), M = I + B B^T / (2n).
inline driftspec::OperatorPencil algebraic(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n), b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = g(rng);
      b(i, j) = g(rng);
    }
  }
  Eigen::MatrixXd k = a.transpose() * a / n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) + b * b.transpose() / (2.0 * n);
  k = 0.5 * (k + k.transpose()).eval();
  m = 0.5 * (m + m.transpose()).eval();
  driftspec::OperatorPencil p;
  p.stiffness = k.sparseView();
  p.mass = m.sparseView();
  p.bc = driftspec::BoundaryCondition::dirichlet;  // no kernel to check
  for (int i = 0; i < n; ++i) p.dof_to_node.push_back(static_cast<std::size_t>(i));
  p.description = "random algebraic pencil " + std::to_string(seed);
  return p;
}

/// Well-conditioned SPD pair: K = A^T A + n I, M = B^T B + n I, with n drawn
/// from [10, 300].
inline driftspec::OperatorPencil shifted_gram(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = std::uniform_int_distribution<int>(10, 300)(rng);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n), b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = g(rng);
      b(i, j) = g(rng);
    }
  }
  const Eigen::MatrixXd shift = n * Eigen::MatrixXd::Identity(n, n);
  driftspec::OperatorPencil p;
  p.stiffness = (a.transpose() * a + shift).sparseView();
  p.mass = (b.transpose() * b + shift).sparseView();
  p.bc = driftspec::BoundaryCondition::dirichlet;
  for (int i = 0; i < n; ++i) p.dof_to_node.push_back(static_cast<std::size_t>(i));
  p.description = "shifted Gram pencil " + std::to_string(seed);
  return p;
}

/// Finite-element pencil with a random potential; at most 300 unknowns.
inline driftspec::OperatorPencil finite_element(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  static const char* potentials[] = {"x", "x^2", "sin(3*x)", "0.5*x^3 - x", "log(1 + x)",
                                     "2*cos(x)"};
  const std::string phi = potentials[std::uniform_int_distribution<int>(0, 5)(rng)];
  const auto w = driftspec::WeightSpec::from_phi_text(phi);
  const driftspec::IntervalDomain dom(0.0, 1.0 + std::uniform_real_distribution<double>(0, 1)(rng));
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: {
      const auto n = std::uniform_int_distribution<std::size_t>(40, 299)(rng);
      return driftspec::assemble_drift_1d(driftspec::build_interval_mesh(dom, n), w,
                                          driftspec::BoundaryCondition::neumann);
    }
    case 1: {
      const auto n = std::uniform_int_distribution<std::size_t>(40, 299)(rng);
      return driftspec::assemble_drift_1d(driftspec::build_interval_mesh(dom, n), w,
                                          driftspec::BoundaryCondition::dirichlet);
    }
    default: {
      const double eps = std::uniform_real_distribution<double>(0.02, 0.3)(rng);
      const auto grid = driftspec::build_mapped_grid(driftspec::ThinDomainSpec{dom, w, eps}, 36, 7);
      return driftspec::assemble_thin_2d(grid);
    }
  }
}

}  // namespace testing_pencils

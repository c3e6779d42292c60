#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "driftspec/assembly.hpp"
#include "driftspec/eigensolve.hpp"
#include "driftspec/error.hpp"

using namespace driftspec;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd dense(const SparseMatrix& a) { return Eigen::MatrixXd(a); }

OperatorPencil drift(const char* phi, std::size_t n, BoundaryCondition bc,
                     IntervalDomain d = IntervalDomain(0, 1)) {
  return assemble_drift_1d(build_interval_mesh(d, n), WeightSpec::from_phi_text(phi), bc);
}

}  // namespace

TEST(Assembly, TwoElementLaplacianByHand) {
  const OperatorPencil p = drift("0", 2, BoundaryCondition::neumann);
  Eigen::Matrix3d k;
  k << 2, -2, 0, -2, 4, -2, 0, -2, 2;
  Eigen::Matrix3d m;
  m << 2, 1, 0, 1, 4, 1, 0, 1, 2;
  m *= 0.5 / 6.0;
  EXPECT_LT((dense(p.stiffness) - k).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((dense(p.mass) - m).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Assembly, SingleElementExponentialWeightByHand) {
  // One element on [0, 1] with weight e^{-x}; moments of e^{-s} in closed form.
  // 3-point Gauss is exact to degree 5, so the mass entries carry ~1e-5.
  const OperatorPencil p = drift("x", 1, BoundaryCondition::neumann);
  const double e = std::exp(-1.0);
  const double k00 = 1 - e;
  const Eigen::MatrixXd k = dense(p.stiffness);
  const Eigen::MatrixXd m = dense(p.mass);
  EXPECT_NEAR(k(0, 0), k00, 1e-6);
  EXPECT_NEAR(k(0, 1), -k00, 1e-6);
  EXPECT_NEAR(m(0, 0), 1 - 2 * e, 2e-5);
  EXPECT_NEAR(m(0, 1), -1 + 3 * e, 2e-5);
  EXPECT_NEAR(m(1, 1), 2 - 5 * e, 2e-5);
  // On 8 elements the quadrature error drops by h^6.
  const OperatorPencil fine = drift("x", 8, BoundaryCondition::neumann);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
  EXPECT_NEAR(ones.dot(fine.mass * ones), 1 - e, 1e-10);
}

TEST(Assembly, NeumannKernelAndSymmetry) {
  for (const char* phi : {"0", "x", "sin(5*x) + x^2"}) {
    const OperatorPencil p = drift(phi, 101, BoundaryCondition::neumann);
    const Eigen::MatrixXd k = dense(p.stiffness);
    EXPECT_EQ(k, k.transpose());
    EXPECT_EQ(dense(p.mass), dense(p.mass).transpose());
    EXPECT_LE((k * Eigen::VectorXd::Ones(k.rows())).cwiseAbs().maxCoeff(),
              1e-12 * norm_inf(p.stiffness));
    for (double s : p.row_sums) EXPECT_EQ(s, 0.0);
  }
}

TEST(Assembly, DirichletEliminatesEndpoints) {
  const OperatorPencil p = drift("0", 10, BoundaryCondition::dirichlet);
  EXPECT_EQ(p.dof_count(), 9u);
  EXPECT_EQ(p.dof_to_node.front(), 1u);
  EXPECT_EQ(p.dof_to_node.back(), 9u);
  // Boundary-adjacent rows keep the eliminated coupling as their row sum.
  EXPECT_NEAR(p.row_sums.front(), 10.0, 1e-12);
  EXPECT_EQ(p.row_sums[4], 0.0);
  EXPECT_THROW(drift("0", 1, BoundaryCondition::dirichlet), GeometryError);
}

TEST(Assembly, DirichletGroundStateConvergesAtSecondOrder) {
  std::vector<double> err;
  for (std::size_t n : {25, 50, 100, 200}) {
    const SpectrumResult r = solve_dense(drift("0", n, BoundaryCondition::dirichlet), 1);
    err.push_back(r.eigenvalues[0] - kPi * kPi);
    EXPECT_GT(err.back(), 0.0);  // conforming FEM overestimates
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    EXPECT_NEAR(std::log2(err[i - 1] / err[i]), 2.0, 0.02);
  }
}

TEST(Assembly, RejectsNonPositiveWeight) {
  const IntervalMesh mesh = build_interval_mesh(IntervalDomain(0, 1), 10);
  EXPECT_THROW(assemble_drift_1d(mesh, WeightSpec::from_f_text("x - 0.5"),
                                 BoundaryCondition::neumann),
               GeometryError);
}

TEST(Assembly, ScaledWeightScalesBothMatrices) {
  const IntervalMesh mesh = build_interval_mesh(IntervalDomain(0, 1), 50);
  const WeightSpec w = WeightSpec::from_phi_text("x");
  const OperatorPencil a = assemble_drift_1d(mesh, w, BoundaryCondition::neumann);
  const OperatorPencil b = assemble_drift_1d(mesh, w.scaled(7.0), BoundaryCondition::neumann);
  EXPECT_LT((dense(b.stiffness) - 7.0 * dense(a.stiffness)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((dense(b.mass) - 7.0 * dense(a.mass)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Assembly, ThinMassIntegratesTheArea) {
  const ThinDomainSpec spec{IntervalDomain(0, 1), WeightSpec::from_phi_text("x"), 0.2};
  const MappedGrid g = build_mapped_grid(spec, 30, 5);
  const OperatorPencil p = assemble_thin_2d(g);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p.dof_count()));
  EXPECT_NEAR(ones.dot(p.mass * ones), g.physical_area(), 1e-14);
  EXPECT_LE((p.stiffness * ones).cwiseAbs().maxCoeff(), 1e-12 * norm_inf(p.stiffness));
  const Eigen::MatrixXd k = dense(p.stiffness);
  EXPECT_EQ(k, k.transpose());
}

TEST(Assembly, ThinRectangleSpectrum) {
  // f == 1, eps = 1/2: Neumann eigenvalues (j pi)^2 + (2 l pi)^2.
  const ThinDomainSpec spec{IntervalDomain(0, 1), WeightSpec(), 0.5};
  const OperatorPencil p = assemble_thin_2d(build_mapped_grid(spec, 24, 12));
  const SpectrumResult r = solve_dense(p, 5, 1000);
  const double pi2 = kPi * kPi;
  const double expected[] = {0.0, pi2, 4 * pi2, 4 * pi2, 5 * pi2};
  EXPECT_LT(std::abs(r.eigenvalues[0]), 1e-10);
  for (int j = 1; j < 5; ++j) EXPECT_NEAR(r.eigenvalues[j] / expected[j], 1.0, 1e-2) << j;
  // The (2, 0) and (0, 1) modes are degenerate; solvers must report a cluster.
  EXPECT_EQ(r.cluster[2], r.cluster[3]);
  EXPECT_NE(r.cluster[2], r.cluster[1]);
  EXPECT_NE(r.cluster[3], r.cluster[4]);
}

TEST(Assembly, ThinGridIsExactForConstantsInT) {
  // A function of x alone has zero t-gradient; with f == 1 the pencil then
  // reduces to the 1D Laplacian times eps.
  const ThinDomainSpec spec{IntervalDomain(0, 1), WeightSpec(), 0.3};
  const MappedGrid g = build_mapped_grid(spec, 20, 3);
  const OperatorPencil p = assemble_thin_2d(g);
  Eigen::VectorXd u(static_cast<Eigen::Index>(g.node_count()));
  for (std::size_t i = 0; i <= g.nx(); ++i) {
    for (std::size_t j = 0; j <= g.nt(); ++j) {
      u(static_cast<Eigen::Index>(g.node_index(i, j))) = g.x()[i] * g.x()[i];
    }
  }
  // int (2x)^2 * 0.3 dx over [0,1] for the piecewise-linear interpolant of x^2:
  // sum over cells of h * ((x_{i+1}^2 - x_i^2)/h)^2 * 0.3.
  double expected = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double h = g.x()[i + 1] - g.x()[i];
    const double s = (g.x()[i + 1] * g.x()[i + 1] - g.x()[i] * g.x()[i]) / h;
    expected += 0.3 * h * s * s;
  }
  EXPECT_NEAR(u.dot(p.stiffness * u), expected, 1e-12);
}

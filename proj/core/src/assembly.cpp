#include "driftspec/assembly.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "driftspec/error.hpp"
#include "driftspec/quadrature.hpp"

namespace driftspec {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

constexpr std::size_t kNoDof = std::numeric_limits<std::size_t>::max();

double positive_weight(const WeightSpec& w, double x) {
  const double f = w.f(x);
  if (!(f > 0.0) || !std::isfinite(f)) {
    std::ostringstream msg;
    msg << "non-positive weight at quadrature point x = " << x << " (f = " << f << ")";
    throw GeometryError(msg.str());
  }
  return f;
}

SparseMatrix from_triplets(std::size_t n, const Triplets& t) {
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

double norm_inf(const SparseMatrix& a) {
  double best = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

OperatorPencil assemble_drift_1d(const IntervalMesh& mesh, const WeightSpec& w,
                                 BoundaryCondition bc) {
  const std::size_t nodes = mesh.nodes.size();
  if (nodes < 2) throw GeometryError("drift assembly needs at least one element");
  if (bc == BoundaryCondition::dirichlet && nodes < 3) {
    throw GeometryError("Dirichlet assembly needs at least one interior node");
  }

  OperatorPencil p;
  p.kind = ProblemKind::drift_1d;
  p.bc = bc;
  p.description = std::string("drift 1d, ") +
                  (bc == BoundaryCondition::neumann ? "neumann" : "dirichlet") +
                  ", " + w.describe() + ", n = " + std::to_string(nodes - 1);

  std::vector<std::size_t> dof(nodes, kNoDof);
  for (std::size_t i = 0; i < nodes; ++i) {
    const bool boundary = i == 0 || i + 1 == nodes;
    if (bc == BoundaryCondition::dirichlet && boundary) continue;
    dof[i] = p.dof_to_node.size();
    p.dof_to_node.push_back(i);
  }

  p.row_sums.assign(p.dof_count(), 0.0);

  Triplets kt;
  Triplets mt;
  kt.reserve(4 * nodes);
  mt.reserve(4 * nodes);

  const auto& g = quadrature::gauss3();
  for (std::size_t e = 0; e + 1 < nodes; ++e) {
    const double x0 = mesh.nodes[e];
    const double h = mesh.nodes[e + 1] - x0;
    // Local matrices for the hat functions (1 - s, s) on this element.
    double k00 = 0.0, m00 = 0.0, m01 = 0.0, m11 = 0.0, wsum = 0.0;
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const double s = g.points[q];
      const double fw = g.weights[q] * positive_weight(w, x0 + s * h);
      wsum += fw;
      m00 += fw * (1.0 - s) * (1.0 - s);
      m01 += fw * (1.0 - s) * s;
      m11 += fw * s * s;
    }
    k00 = wsum / h;
    const std::array<std::size_t, 2> local{dof[e], dof[e + 1]};
    const double ke[2][2] = {{k00, -k00}, {-k00, k00}};
    const double me[2][2] = {{m00 * h, m01 * h}, {m01 * h, m11 * h}};
    for (int a = 0; a < 2; ++a) {
      if (local[a] == kNoDof) continue;
      if (local[1 - a] == kNoDof) p.row_sums[local[a]] += k00;
      for (int b = 0; b < 2; ++b) {
        if (local[b] == kNoDof) continue;
        const auto r = static_cast<Eigen::Index>(local[a]);
        const auto c = static_cast<Eigen::Index>(local[b]);
        kt.emplace_back(r, c, ke[a][b]);
        mt.emplace_back(r, c, me[a][b]);
      }
    }
  }

  p.stiffness = from_triplets(p.dof_count(), kt);
  p.mass = from_triplets(p.dof_count(), mt);
  check_pencil_invariants(p);
  return p;
}

OperatorPencil assemble_dirichlet_1d(const IntervalMesh& mesh, const WeightSpec& w) {
  return assemble_drift_1d(mesh, w, BoundaryCondition::dirichlet);
}

OperatorPencil assemble_thin_2d(const MappedGrid& grid) {
  const std::size_t nx = grid.nx();
  const std::size_t nt = grid.nt();
  const auto& xs = grid.x();
  const auto& ts = grid.t();
  const double eps = grid.spec().epsilon;
  const WeightSpec& w = grid.spec().weight;
  if (xs.size() != nx + 1 || ts.size() != nt + 1 || grid.tags().size() != grid.node_count()) {
    throw GeometryError("inconsistent mapped grid");
  }

  OperatorPencil p;
  p.kind = ProblemKind::thin_2d;
  p.bc = BoundaryCondition::neumann;
  p.description = "thin 2d, " + w.describe() + ", eps = " + std::to_string(eps) +
                  ", nx = " + std::to_string(nx) + ", nt = " + std::to_string(nt);
  p.dof_to_node.resize(grid.node_count());
  for (std::size_t i = 0; i < p.dof_to_node.size(); ++i) p.dof_to_node[i] = i;
  p.row_sums.assign(p.dof_count(), 0.0);

  Triplets kt;
  Triplets mt;
  kt.reserve(16 * nx * nt);
  mt.reserve(16 * nx * nt);

  const auto& g = quadrature::gauss2();
  for (std::size_t i = 0; i < nx; ++i) {
    const double hx = xs[i + 1] - xs[i];
    // Weight data depends on x only; evaluate once per column of cells.
    std::array<double, 2> xq{}, fq{}, rq{};
    for (std::size_t a = 0; a < 2; ++a) {
      xq[a] = xs[i] + g.points[a] * hx;
      fq[a] = positive_weight(w, xq[a]);
      rq[a] = w.log_derivative(xq[a]);
    }
    for (std::size_t j = 0; j < nt; ++j) {
      const double ht = ts[j + 1] - ts[j];
      const std::array<std::size_t, 4> nodes{
          grid.node_index(i, j), grid.node_index(i + 1, j),
          grid.node_index(i, j + 1), grid.node_index(i + 1, j + 1)};
      double ke[4][4] = {};
      double me[4][4] = {};
      for (std::size_t a = 0; a < 2; ++a) {
        const double xi = g.points[a];
        const double thick = eps * fq[a];
        for (std::size_t b = 0; b < 2; ++b) {
          const double eta = g.points[b];
          const double t = ts[j] + eta * ht;
          const double shape[4] = {(1 - xi) * (1 - eta), xi * (1 - eta),
                                   (1 - xi) * eta, xi * eta};
          const double dx[4] = {-(1 - eta) / hx, (1 - eta) / hx, -eta / hx, eta / hx};
          const double dt[4] = {-(1 - xi) / ht, -xi / ht, (1 - xi) / ht, xi / ht};
          double gx[4], gy[4];
          for (int n = 0; n < 4; ++n) {
            gx[n] = dx[n] - t * rq[a] * dt[n];
            gy[n] = dt[n] / thick;
          }
          const double jw = g.weights[a] * g.weights[b] * hx * ht * thick;
          for (int r = 0; r < 4; ++r) {
            for (int c = r; c < 4; ++c) {
              ke[r][c] += jw * (gx[r] * gx[c] + gy[r] * gy[c]);
              me[r][c] += jw * shape[r] * shape[c];
            }
          }
        }
      }
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          const int lo = std::min(r, c);
          const int hi = std::max(r, c);
          const auto row = static_cast<Eigen::Index>(nodes[r]);
          const auto col = static_cast<Eigen::Index>(nodes[c]);
          kt.emplace_back(row, col, ke[lo][hi]);
          mt.emplace_back(row, col, me[lo][hi]);
        }
      }
    }
  }

  p.stiffness = from_triplets(p.dof_count(), kt);
  p.mass = from_triplets(p.dof_count(), mt);
  check_pencil_invariants(p);
  return p;
}

void check_pencil_invariants(const OperatorPencil& p) {
  auto symmetric = [](const SparseMatrix& a) {
    const SparseMatrix at = a.transpose();
    if (at.nonZeros() != a.nonZeros()) return false;
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
      SparseMatrix::InnerIterator ia(a, r);
      SparseMatrix::InnerIterator ib(at, r);
      for (; ia && ib; ++ia, ++ib) {
        if (ia.col() != ib.col() || ia.value() != ib.value()) return false;
      }
      if (ia || ib) return false;
    }
    return true;
  };
  const auto n = static_cast<Eigen::Index>(p.dof_count());
  if (p.stiffness.rows() != n || p.stiffness.cols() != n || p.mass.rows() != n ||
      p.mass.cols() != n) {
    throw NumericError("pencil dimensions do not match the dof count");
  }
  if (!symmetric(p.stiffness)) throw NumericError("stiffness matrix is not symmetric");
  if (!symmetric(p.mass)) throw NumericError("mass matrix is not symmetric");
  if (p.bc == BoundaryCondition::neumann) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const double kernel = (p.stiffness * ones).cwiseAbs().maxCoeff();
    if (kernel > 1e-12 * norm_inf(p.stiffness)) {
      std::ostringstream msg;
      msg << "Neumann stiffness does not annihilate constants: |K 1| = " << kernel;
      throw NumericError(msg.str());
    }
  }
}

}  // namespace driftspec

#include "driftspec/geometry.hpp"

#include <cmath>
#include <sstream>

#include "driftspec/error.hpp"
#include "driftspec/quadrature.hpp"

namespace driftspec {

IntervalDomain::IntervalDomain(double a, double b) : a_(a), b_(b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "interval [" << a << ", " << b << "] requires finite a < b";
    throw GeometryError(msg.str());
  }
}

IntervalMesh build_interval_mesh(const IntervalDomain& domain, std::size_t n) {
  if (n == 0) throw GeometryError("interval mesh needs at least one element");
  IntervalMesh mesh{domain, std::vector<double>(n + 1)};
  const double h = domain.diameter() / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    mesh.nodes[i] = domain.a() + h * static_cast<double>(i);
  }
  mesh.nodes.back() = domain.b();
  return mesh;
}

MappedGrid::MappedGrid(ThinDomainSpec spec, std::size_t nx, std::size_t nt)
    : spec_(std::move(spec)), nx_(nx), nt_(nt) {
  if (nx_ < 2 || nt_ < 2) {
    throw GeometryError("mapped grid needs nx >= 2 and nt >= 2");
  }
  if (!(spec_.epsilon > 0.0) || !std::isfinite(spec_.epsilon)) {
    throw GeometryError("thin domain needs epsilon > 0");
  }

  x_ = build_interval_mesh(spec_.base, nx_).nodes;
  t_.resize(nt_ + 1);
  for (std::size_t j = 0; j <= nt_; ++j) {
    t_[j] = static_cast<double>(j) / static_cast<double>(nt_);
  }
  t_.back() = 1.0;

  const auto& g = quadrature::gauss2();
  for (std::size_t i = 0; i < nx_; ++i) {
    const double hx = x_[i + 1] - x_[i];
    for (double p : g.points) {
      const double xq = x_[i] + p * hx;
      const double fq = spec_.weight.f(xq);
      if (!(fq > 0.0) || !std::isfinite(fq)) {
        std::ostringstream msg;
        msg << "height function not positive at x = " << xq << " (f = " << fq << ")";
        throw GeometryError(msg.str());
      }
    }
  }

  // Nodal heights may vanish at the ends (degenerate profiles); only the
  // quadrature points above are required to be strictly positive.
  height_.resize(nx_ + 1);
  for (std::size_t i = 0; i <= nx_; ++i) {
    const double fi = spec_.weight.f(x_[i]);
    if (fi < 0.0 || !std::isfinite(fi)) {
      std::ostringstream msg;
      msg << "height function negative at node x = " << x_[i];
      throw GeometryError(msg.str());
    }
    height_[i] = spec_.epsilon * fi;
  }

  tags_.assign(node_count(), BoundaryTag::interior);
  for (std::size_t i = 0; i <= nx_; ++i) {
    for (std::size_t j = 0; j <= nt_; ++j) {
      BoundaryTag tag = BoundaryTag::interior;
      if (i == 0 || i == nx_) {
        tag = BoundaryTag::lateral;
      } else if (j == 0) {
        tag = BoundaryTag::bottom;
      } else if (j == nt_) {
        tag = BoundaryTag::top;
      }
      tags_[node_index(i, j)] = tag;
    }
  }
}

double MappedGrid::cell_area(std::size_t i, std::size_t j) const {
  const auto& g = quadrature::gauss2();
  const double hx = x_[i + 1] - x_[i];
  const double ht = t_[j + 1] - t_[j];
  double area = 0.0;
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    const double xq = x_[i] + g.points[q] * hx;
    area += g.weights[q] * spec_.epsilon * spec_.weight.f(xq);
  }
  return area * hx * ht;
}

double MappedGrid::physical_area() const {
  double total = 0.0;
  for (std::size_t i = 0; i < nx_; ++i) {
    for (std::size_t j = 0; j < nt_; ++j) total += cell_area(i, j);
  }
  return total;
}

MappedGrid build_mapped_grid(const ThinDomainSpec& spec, std::size_t nx, std::size_t nt) {
  return MappedGrid(spec, nx, nt);
}

}  // namespace driftspec

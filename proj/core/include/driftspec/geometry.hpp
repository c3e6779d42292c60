#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "driftspec/weight.hpp"

namespace driftspec {

/// Base interval [a, b] with diameter d = b - a.
class IntervalDomain {
 public:
  IntervalDomain(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double diameter() const { return b_ - a_; }

 private:
  double a_;
  double b_;
};

struct IntervalMesh {
  IntervalDomain domain;
  std::vector<double> nodes;  // strictly increasing, nodes.front() == a, nodes.back() == b

  std::size_t element_count() const { return nodes.size() - 1; }
};

/// Uniform mesh with n elements. Throws GeometryError for n == 0.
IntervalMesh build_interval_mesh(const IntervalDomain& domain, std::size_t n);

/// The thin domain 0 <= y <= eps f(x) over the base interval.
struct ThinDomainSpec {
  IntervalDomain base;
  WeightSpec weight;
  double epsilon;
};

/// Boundary parts of the thin domain: bottom y = 0, top y = eps f(x), and the
/// lateral sides x = a, x = b. Corners belong to `lateral`.
enum class BoundaryTag : std::uint8_t { interior, bottom, top, lateral };

/// Tensor reference grid on [a, b] x [0, 1] mapped to the thin domain by
/// (x, t) -> (x, eps f(x) t). Nodes are ordered x-major: index i * (nt + 1) + j.
class MappedGrid {
 public:
  MappedGrid(ThinDomainSpec spec, std::size_t nx, std::size_t nt);

  const ThinDomainSpec& spec() const { return spec_; }
  std::size_t nx() const { return nx_; }
  std::size_t nt() const { return nt_; }
  std::size_t node_count() const { return (nx_ + 1) * (nt_ + 1); }
  std::size_t node_index(std::size_t i, std::size_t j) const { return i * (nt_ + 1) + j; }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& t() const { return t_; }
  /// eps f(x_i), the local thickness above base node i.
  double height(std::size_t i) const { return height_[i]; }
  /// Physical y coordinate of node (i, j).
  double physical_y(std::size_t i, std::size_t j) const { return height_[i] * t_[j]; }

  BoundaryTag tag(std::size_t node) const { return tags_[node]; }
  const std::vector<BoundaryTag>& tags() const { return tags_; }

  /// Physical area of cell (i, j), integrated with 2-point Gauss in x.
  double cell_area(std::size_t i, std::size_t j) const;
  /// Total physical area, sum of cell areas.
  double physical_area() const;

 private:
  ThinDomainSpec spec_;
  std::size_t nx_;
  std::size_t nt_;
  std::vector<double> x_;
  std::vector<double> t_;
  std::vector<double> height_;
  std::vector<BoundaryTag> tags_;
};

/// Builds the mapped grid. Requires nx >= 2, nt >= 2, eps > 0 and f > 0 at
/// the Gauss points of every base element; otherwise throws GeometryError.
MappedGrid build_mapped_grid(const ThinDomainSpec& spec, std::size_t nx, std::size_t nt);

}  // namespace driftspec

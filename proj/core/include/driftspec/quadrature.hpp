#pragma once

#include <array>
#include <cmath>

namespace driftspec::quadrature {

/// Gauss-Legendre rule on [0, 1]: abscissae and weights (weights sum to 1).
template <std::size_t N>
struct GaussRule {
  std::array<double, N> points;
  std::array<double, N> weights;
};

inline const GaussRule<2>& gauss2() {
  static const GaussRule<2> rule{
      {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)},
      {0.5, 0.5}};
  return rule;
}

inline const GaussRule<3>& gauss3() {
  static const GaussRule<3> rule{
      {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)},
      {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
  return rule;
}

}  // namespace driftspec::quadrature

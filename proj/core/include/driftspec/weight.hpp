#pragma once

#include <span>
#include <string>
#include <vector>

#include "driftspec/expr.hpp"

namespace driftspec {

/// How the weight was specified.
enum class WeightMode {
  phi_given,       ///< exponent phi given, f = exp(-phi)
  f_given,         ///< density f given directly
  squared_samples  ///< f = g^2 with g piecewise linear through samples
};

/// Weight density f = e^{-phi} on the base interval, with exact log-derivative.
///
/// Used both as the drift measure e^{-phi} dx and as the height profile of the
/// thin domain 0 <= y <= eps f(x). A positive constant factor can be attached
/// with `scaled`; it changes f but not f'/f.
class WeightSpec {
 public:
  /// phi == 0, i.e. f == 1.
  WeightSpec();

  static WeightSpec from_phi(Expr phi);
  static WeightSpec from_f(Expr f);
  static WeightSpec from_phi_text(std::string_view text);
  static WeightSpec from_f_text(std::string_view text);

  /// f(x) = g(x)^2 where g interpolates (nodes[i], values[i]) linearly.
  /// Nodes must be strictly increasing; evaluation outside is an error.
  static WeightSpec squared_samples(std::vector<double> nodes,
                                    std::vector<double> values);

  /// The weight f^2 (phi doubled). Not available for sampled weights.
  WeightSpec squared() const;

  /// Same weight multiplied by c > 0.
  WeightSpec scaled(double c) const;

  WeightMode mode() const { return mode_; }
  double scale() const { return scale_; }

  /// Density f(x).
  double f(double x) const;
  /// f'(x)/f(x) == -phi'(x).
  double log_derivative(double x) const;
  /// phi(x) == -log f(x).
  double phi(double x) const;

  /// Expression of phi (phi-given) or f (f-given); empty for sampled weights.
  std::string describe() const;

 private:
  double sample(double x, double* slope) const;

  WeightMode mode_ = WeightMode::phi_given;
  Expr primary_;     // phi or f
  Expr derivative_;  // phi' or f'
  std::vector<double> nodes_;
  std::vector<double> values_;
  double scale_ = 1.0;
};

}  // namespace driftspec

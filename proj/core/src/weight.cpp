#include "driftspec/weight.hpp"

#include <algorithm>
#include <cmath>

#include "driftspec/error.hpp"

namespace driftspec {

WeightSpec::WeightSpec() : primary_(Expr::constant(0.0)), derivative_(Expr::constant(0.0)) {}

WeightSpec WeightSpec::from_phi(Expr phi) {
  WeightSpec w;
  w.mode_ = WeightMode::phi_given;
  w.derivative_ = diff_expr(phi);
  w.primary_ = std::move(phi);
  return w;
}

WeightSpec WeightSpec::from_f(Expr f) {
  WeightSpec w;
  w.mode_ = WeightMode::f_given;
  w.derivative_ = diff_expr(f);
  w.primary_ = std::move(f);
  return w;
}

WeightSpec WeightSpec::from_phi_text(std::string_view text) {
  return from_phi(parse_expr(text));
}

WeightSpec WeightSpec::from_f_text(std::string_view text) {
  return from_f(parse_expr(text));
}

WeightSpec WeightSpec::squared_samples(std::vector<double> nodes,
                                       std::vector<double> values) {
  if (nodes.size() < 2 || nodes.size() != values.size()) {
    throw GeometryError("squared_samples: need >= 2 nodes with one value each");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw GeometryError("squared_samples: nodes must be strictly increasing");
    }
  }
  WeightSpec w;
  w.mode_ = WeightMode::squared_samples;
  w.nodes_ = std::move(nodes);
  w.values_ = std::move(values);
  return w;
}

WeightSpec WeightSpec::squared() const {
  WeightSpec w;
  switch (mode_) {
    case WeightMode::phi_given:
      w = from_phi(Expr::binary(NodeKind::mul, Expr::constant(2.0), primary_));
      break;
    case WeightMode::f_given:
      w = from_f(Expr::power(primary_, 2.0));
      break;
    case WeightMode::squared_samples:
      throw GeometryError("squared() is not defined for sampled weights");
  }
  w.scale_ = scale_ * scale_;
  return w;
}

WeightSpec WeightSpec::scaled(double c) const {
  if (!(c > 0.0)) throw GeometryError("weight scale must be positive");
  WeightSpec w = *this;
  w.scale_ *= c;
  return w;
}

double WeightSpec::sample(double x, double* slope) const {
  const double lo = nodes_.front();
  const double hi = nodes_.back();
  if (x < lo || x > hi) {
    throw GeometryError("sampled weight evaluated outside [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  i = std::clamp<std::size_t>(i, 1, nodes_.size() - 1) - 1;
  const double h = nodes_[i + 1] - nodes_[i];
  const double s = (values_[i + 1] - values_[i]) / h;
  if (slope != nullptr) *slope = s;
  return values_[i] + s * (x - nodes_[i]);
}

double WeightSpec::f(double x) const {
  switch (mode_) {
    case WeightMode::phi_given:
      return scale_ * std::exp(-eval_expr(primary_, x));
    case WeightMode::f_given:
      return scale_ * eval_expr(primary_, x);
    case WeightMode::squared_samples: {
      const double g = sample(x, nullptr);
      return scale_ * g * g;
    }
  }
  return 0.0;
}

double WeightSpec::log_derivative(double x) const {
  switch (mode_) {
    case WeightMode::phi_given:
      return -eval_expr(derivative_, x);
    case WeightMode::f_given: {
      const double fx = eval_expr(primary_, x);
      if (fx == 0.0) {
        throw DomainError("log-derivative of a vanishing weight",
                          to_string(primary_));
      }
      return eval_expr(derivative_, x) / fx;
    }
    case WeightMode::squared_samples: {
      double slope = 0.0;
      const double g = sample(x, &slope);
      if (g == 0.0) {
        throw DomainError("log-derivative of a vanishing weight", "sampled g^2");
      }
      return 2.0 * slope / g;
    }
  }
  return 0.0;
}

double WeightSpec::phi(double x) const {
  if (mode_ == WeightMode::phi_given) {
    return eval_expr(primary_, x) - std::log(scale_);
  }
  const double fx = f(x);
  if (!(fx > 0.0)) {
    throw DomainError("phi = -log f undefined for f <= 0", describe());
  }
  return -std::log(fx);
}

std::string WeightSpec::describe() const {
  std::string s;
  switch (mode_) {
    case WeightMode::phi_given:
      s = "phi = " + to_string(primary_);
      break;
    case WeightMode::f_given:
      s = "f = " + to_string(primary_);
      break;
    case WeightMode::squared_samples:
      s = "f = g^2, g sampled at " + std::to_string(nodes_.size()) + " nodes";
      break;
  }
  if (scale_ != 1.0) s += " (scaled by " + std::to_string(scale_) + ")";
  return s;
}

}  // namespace driftspec

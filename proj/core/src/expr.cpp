#include "driftspec/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <utility>

#include "driftspec/error.hpp"

namespace driftspec {

struct Expr::Node {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  UnaryFn fn = UnaryFn::neg;
  std::vector<Expr> children;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::variable;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::pi;
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind op, Expr lhs, Expr rhs) {
  if (op != NodeKind::add && op != NodeKind::sub && op != NodeKind::mul &&
      op != NodeKind::div) {
    throw Error("Expr::binary: not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->kind = op;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, double exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::pow;
  n->value = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryFn fn, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::unary;
  n->fn = fn;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
UnaryFn Expr::function() const { return node_->fn; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

bool Expr::is_constant() const {
  if (kind() == NodeKind::variable) return false;
  for (const auto& c : children()) {
    if (!c.is_constant()) return false;
  }
  return true;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::constant:
      return a.value() == b.value();
    case NodeKind::pow:
      if (a.value() != b.value()) return false;
      break;
    case NodeKind::unary:
      if (a.function() != b.function()) return false;
      break;
    default:
      break;
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!(ca[i] == cb[i])) return false;
  }
  return true;
}

namespace {

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon();

constexpr std::array<std::pair<std::string_view, UnaryFn>, 7> kFunctions{{
    {"sin", UnaryFn::sin},
    {"cos", UnaryFn::cos},
    {"tan", UnaryFn::tan},
    {"exp", UnaryFn::exp},
    {"log", UnaryFn::log},
    {"sqrt", UnaryFn::sqrt},
    {"abs", UnaryFn::abs},
}};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    if (text_.empty()) throw ParseError("empty expression", 0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (static_cast<unsigned char>(text_[i]) > 127) {
        throw ParseError("non-ASCII character", i);
      }
    }
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) {
        throw ParseError(std::string("expected '") + c + "' but input ended",
                         pos_);
      }
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(NodeKind::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = Expr::binary(NodeKind::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(NodeKind::mul, std::move(lhs), factor());
      } else if (accept('/')) {
        lhs = Expr::binary(NodeKind::div, std::move(lhs), factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr base = atom();
    if (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      Expr exponent = peek() == '-' ? (++pos_, Expr::unary(UnaryFn::neg, atom()))
                                    : atom();
      if (!exponent.is_constant()) {
        throw ParseError("non-constant exponent", at);
      }
      double p = 0.0;
      try {
        p = eval_expr(exponent, 0.0);
      } catch (const DomainError&) {
        throw ParseError("undefined exponent", at);
      }
      return Expr::power(std::move(base), p);
    }
    return base;
  }

  Expr atom() {
    const char c = peek();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (c == '-') {
      ++pos_;
      return Expr::unary(UnaryFn::neg, factor());
    }
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return Expr::variable();
      if (name == "pi") return Expr::pi();
      for (const auto& [fname, fn] : kFunctions) {
        if (name == fname) {
          expect('(');
          Expr arg = expr();
          expect(')');
          return Expr::unary(fn, std::move(arg));
        }
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ParseError("malformed number", start);
    }
    return Expr::constant(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expr& e, std::string& out) {
  const auto& c = e.children();
  switch (e.kind()) {
    case NodeKind::constant:
      if (std::signbit(e.value())) {
        out += "(-" + format_number(-e.value()) + ")";
      } else {
        out += format_number(e.value());
      }
      return;
    case NodeKind::variable:
      out += 'x';
      return;
    case NodeKind::pi:
      out += "pi";
      return;
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::mul:
    case NodeKind::div: {
      static constexpr char ops[] = {'+', '-', '*', '/'};
      out += '(';
      print(c[0], out);
      out += ' ';
      out += ops[static_cast<int>(e.kind()) - static_cast<int>(NodeKind::add)];
      out += ' ';
      print(c[1], out);
      out += ')';
      return;
    }
    case NodeKind::pow:
      out += '(';
      print(c[0], out);
      out += '^';
      if (std::signbit(e.value())) {
        out += "(-" + format_number(-e.value()) + ")";
      } else {
        out += format_number(e.value());
      }
      out += ')';
      return;
    case NodeKind::unary:
      if (e.function() == UnaryFn::neg) {
        out += "(-";
        print(c[0], out);
        out += ')';
      } else {
        out += function_name(e.function());
        out += '(';
        print(c[0], out);
        out += ')';
      }
      return;
  }
}

[[noreturn]] void domain_error(const char* what, const Expr& e) {
  throw DomainError(what, to_string(e));
}

double eval(const Expr& e, double x) {
  const auto& c = e.children();
  switch (e.kind()) {
    case NodeKind::constant:
      return e.value();
    case NodeKind::variable:
      return x;
    case NodeKind::pi:
      return std::numbers::pi;
    case NodeKind::add:
      return eval(c[0], x) + eval(c[1], x);
    case NodeKind::sub:
      return eval(c[0], x) - eval(c[1], x);
    case NodeKind::mul:
      return eval(c[0], x) * eval(c[1], x);
    case NodeKind::div: {
      const double num = eval(c[0], x);
      const double den = eval(c[1], x);
      if (den == 0.0) domain_error("division by zero", e);
      return num / den;
    }
    case NodeKind::pow: {
      const double base = eval(c[0], x);
      const double p = e.value();
      if (base < 0.0 && p != std::floor(p)) {
        domain_error("non-integer power of a negative number", e);
      }
      if (base == 0.0 && p < 0.0) domain_error("division by zero", e);
      return std::pow(base, p);
    }
    case NodeKind::unary: {
      const double u = eval(c[0], x);
      switch (e.function()) {
        case UnaryFn::sin:
          return std::sin(u);
        case UnaryFn::cos:
          return std::cos(u);
        case UnaryFn::tan:
          // cos never returns exactly 0 at a double near pi/2 + k pi.
          if (std::abs(std::cos(u)) <= 4 * kUnitRoundoff * std::max(1.0, std::abs(u))) {
            domain_error("tan at a pole", e);
          }
          return std::tan(u);
        case UnaryFn::exp:
          return std::exp(u);
        case UnaryFn::log:
          if (!(u > 0.0)) domain_error("log of a non-positive number", e);
          return std::log(u);
        case UnaryFn::sqrt:
          if (u < 0.0) domain_error("sqrt of a negative number", e);
          return std::sqrt(u);
        case UnaryFn::abs:
          return std::abs(u);
        case UnaryFn::neg:
          return -u;
      }
    }
  }
  domain_error("malformed expression", e);
}

// Builders used by differentiation: fold literal-only subtrees and drop
// multiplicative/additive identities.

bool is_literal(const Expr& e, double v) {
  return e.kind() == NodeKind::constant && e.value() == v;
}

bool is_literal(const Expr& e) { return e.kind() == NodeKind::constant; }

Expr neg(Expr a) {
  if (is_literal(a)) return Expr::constant(-a.value());
  if (a.kind() == NodeKind::unary && a.function() == UnaryFn::neg) {
    return a.children()[0];
  }
  return Expr::unary(UnaryFn::neg, std::move(a));
}

Expr add(Expr a, Expr b) {
  if (is_literal(a) && is_literal(b)) return Expr::constant(a.value() + b.value());
  if (is_literal(a, 0.0)) return b;
  if (is_literal(b, 0.0)) return a;
  return Expr::binary(NodeKind::add, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
  if (is_literal(a) && is_literal(b)) return Expr::constant(a.value() - b.value());
  if (is_literal(b, 0.0)) return a;
  if (is_literal(a, 0.0)) return neg(std::move(b));
  return Expr::binary(NodeKind::sub, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
  if (is_literal(a) && is_literal(b)) return Expr::constant(a.value() * b.value());
  if (is_literal(a, 0.0) || is_literal(b, 0.0)) return Expr::constant(0.0);
  if (is_literal(a, 1.0)) return b;
  if (is_literal(b, 1.0)) return a;
  if (is_literal(a, -1.0)) return neg(std::move(b));
  if (is_literal(b, -1.0)) return neg(std::move(a));
  return Expr::binary(NodeKind::mul, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
  if (is_literal(a) && is_literal(b) && b.value() != 0.0) {
    return Expr::constant(a.value() / b.value());
  }
  if (is_literal(a, 0.0)) return Expr::constant(0.0);
  if (is_literal(b, 1.0)) return a;
  return Expr::binary(NodeKind::div, std::move(a), std::move(b));
}

Expr pow(Expr base, double p) {
  if (p == 0.0) return Expr::constant(1.0);
  if (p == 1.0) return base;
  if (is_literal(base)) return Expr::constant(std::pow(base.value(), p));
  return Expr::power(std::move(base), p);
}

Expr fn(UnaryFn f, Expr a) { return Expr::unary(f, std::move(a)); }

Expr diff(const Expr& e) {
  const auto& c = e.children();
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::pi:
      return Expr::constant(0.0);
    case NodeKind::variable:
      return Expr::constant(1.0);
    case NodeKind::add:
      return add(diff(c[0]), diff(c[1]));
    case NodeKind::sub:
      return sub(diff(c[0]), diff(c[1]));
    case NodeKind::mul:
      return add(mul(diff(c[0]), c[1]), mul(c[0], diff(c[1])));
    case NodeKind::div: {
      Expr du = diff(c[0]);
      Expr dv = diff(c[1]);
      if (is_literal(dv, 0.0)) return div(std::move(du), c[1]);
      return div(sub(mul(du, c[1]), mul(c[0], dv)), pow(c[1], 2.0));
    }
    case NodeKind::pow: {
      const double p = e.value();
      return mul(mul(Expr::constant(p), pow(c[0], p - 1.0)), diff(c[0]));
    }
    case NodeKind::unary: {
      const Expr& u = c[0];
      Expr du = diff(u);
      if (is_literal(du, 0.0)) return Expr::constant(0.0);
      switch (e.function()) {
        case UnaryFn::sin:
          return mul(fn(UnaryFn::cos, u), du);
        case UnaryFn::cos:
          return mul(neg(fn(UnaryFn::sin, u)), du);
        case UnaryFn::tan:
          return div(du, pow(fn(UnaryFn::cos, u), 2.0));
        case UnaryFn::exp:
          return mul(e, du);
        case UnaryFn::log:
          return div(du, u);
        case UnaryFn::sqrt:
          return div(du, mul(Expr::constant(2.0), e));
        case UnaryFn::abs:
          // u/|u| is undefined at u = 0, which is where |u| is not smooth.
          return mul(div(u, e), du);
        case UnaryFn::neg:
          return neg(du);
      }
    }
  }
  throw Error("diff_expr: malformed expression");
}

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

double eval_expr(const Expr& e, double x) { return eval(e, x); }

Expr diff_expr(const Expr& e) { return diff(e); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::string_view function_name(UnaryFn f) {
  for (const auto& [name, id] : kFunctions) {
    if (id == f) return name;
  }
  return "neg";
}

}  // namespace driftspec

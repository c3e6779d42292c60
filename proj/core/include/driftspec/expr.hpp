#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace driftspec {

enum class NodeKind { constant, variable, pi, add, sub, mul, div, pow, unary };

enum class UnaryFn { sin, cos, tan, exp, log, sqrt, abs, neg };

/// Immutable expression tree in the single variable `x`.
///
/// Nodes are shared, so copies are cheap and trees may be evaluated from any
/// number of threads. `pow` nodes carry a constant exponent; every other
/// binary node has exactly two children and `unary` nodes have one.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable();
  static Expr pi();
  static Expr binary(NodeKind op, Expr lhs, Expr rhs);
  static Expr power(Expr base, double exponent);
  static Expr unary(UnaryFn fn, Expr arg);

  NodeKind kind() const;
  /// Literal value for `constant`, exponent for `pow`.
  double value() const;
  UnaryFn function() const;
  const std::vector<Expr>& children() const;

  /// True when the tree does not reference `x`.
  bool is_constant() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Recursive-descent parser for the weight grammar:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' exponent)?
///   atom   := number | 'x' | 'pi' | func '(' expr ')' | '(' expr ')' | '-' factor
///
/// The exponent must be a constant (a number, optionally signed, or a
/// parenthesised constant expression). Throws ParseError with a byte offset.
Expr parse_expr(std::string_view text);

/// Evaluates `e` at `x`. Throws DomainError naming the offending subtree.
double eval_expr(const Expr& e, double x);

/// Symbolic d/dx. Literal-only subtrees are folded and trivial 0/1 factors
/// dropped; no other simplification is attempted.
Expr diff_expr(const Expr& e);

/// Fully parenthesised text that parse_expr maps back to the same tree.
std::string to_string(const Expr& e);

std::string_view function_name(UnaryFn fn);

}  // namespace driftspec

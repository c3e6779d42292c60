#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "driftspec/error.hpp"
#include "driftspec/expr.hpp"

using namespace driftspec;

namespace {

double eval_text(const std::string& s, double x) { return eval_expr(parse_expr(s), x); }

std::size_t parse_error_offset(const std::string& s) {
  try {
    parse_expr(s);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "no ParseError for '" << s << "'";
  return 0;
}

/// Random expression text over the grammar, depth-limited.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  std::string make(int depth) {
    const int choice = depth <= 0 ? pick(0, 2) : pick(0, 11);
    switch (choice) {
      case 0:
        return "x";
      case 1:
        return number();
      case 2:
        return "pi";
      case 3:
        return "(" + make(depth - 1) + " + " + make(depth - 1) + ")";
      case 4:
        return "(" + make(depth - 1) + " - " + make(depth - 1) + ")";
      case 5:
      case 6:
        return "(" + make(depth - 1) + " * " + make(depth - 1) + ")";
      case 7:
        return "(" + make(depth - 1) + " / (" + make(depth - 1) + " + 3))";
      case 8: {
        static const char* exps[] = {"2", "3", "0.5", "-1", "1.5"};
        return "(" + make(depth - 1) + ")^" + exps[pick(0, 4)];
      }
      case 9:
        return "-" + make(depth - 1);
      default: {
        static const char* fns[] = {"sin", "cos", "exp", "log", "sqrt", "abs", "tan"};
        return std::string(fns[pick(0, 6)]) + "(" + make(depth - 1) + ")";
      }
    }
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::string number() {
    static const char* nums[] = {"0.5", "2", "1.25", "3", "0.1", "7"};
    return nums[pick(0, 5)];
  }
  std::mt19937_64 rng_;
};

}  // namespace

TEST(Expr, ParsesAndEvaluatesBasics) {
  EXPECT_DOUBLE_EQ(eval_text("x", 2.5), 2.5);
  EXPECT_DOUBLE_EQ(eval_text("1 + 2 * 3", 0.0), 7.0);
  EXPECT_DOUBLE_EQ(eval_text("(1 + 2) * 3", 0.0), 9.0);
  EXPECT_DOUBLE_EQ(eval_text("8 / 4 / 2", 0.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_text("10 - 4 - 3", 0.0), 3.0);
  EXPECT_DOUBLE_EQ(eval_text("pi", 0.0), std::numbers::pi);
  EXPECT_DOUBLE_EQ(eval_text("x^2", 3.0), 9.0);
  EXPECT_DOUBLE_EQ(eval_text("2e-1 * x", 5.0), 1.0);
  EXPECT_NEAR(eval_text("sin(pi*x)^2", 0.25), 0.5, 1e-15);
  EXPECT_NEAR(eval_text("exp(log(x))", 1.7), 1.7, 1e-15);
  EXPECT_DOUBLE_EQ(eval_text("abs(x - 2)", 0.5), 1.5);
}

TEST(Expr, UnaryMinusBindsBelowPower) {
  EXPECT_DOUBLE_EQ(eval_text("-x^2", 3.0), -9.0);
  EXPECT_DOUBLE_EQ(eval_text("2^-1", 0.0), 0.5);
  EXPECT_DOUBLE_EQ(eval_text("x^(1/2)", 4.0), 2.0);
  EXPECT_DOUBLE_EQ(eval_text("--x", 4.0), 4.0);
  EXPECT_DOUBLE_EQ(eval_text("3 * -x", 2.0), -6.0);
}

TEST(Expr, ParseErrorsReportOffsets) {
  EXPECT_EQ(parse_error_offset("x +"), 3u);
  EXPECT_EQ(parse_error_offset("foo(x)"), 0u);
  EXPECT_EQ(parse_error_offset("x ^ x"), 4u);
  EXPECT_EQ(parse_error_offset("(x"), 2u);
  EXPECT_EQ(parse_error_offset("x)"), 1u);
  EXPECT_EQ(parse_error_offset(""), 0u);
  EXPECT_EQ(parse_error_offset("1..2"), 2u);
  EXPECT_THROW(parse_expr("x^(1/0)"), ParseError);
}

TEST(Expr, DomainErrorsNameTheSubexpression) {
  try {
    eval_text("1 + log(x - 1)", 0.5);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(e.subexpression().find("log"), std::string::npos);
  }
  EXPECT_THROW(eval_text("1 / x", 0.0), DomainError);
  EXPECT_THROW(eval_text("sqrt(x)", -1.0), DomainError);
  EXPECT_THROW(eval_text("x^0.5", -1.0), DomainError);
  EXPECT_THROW(eval_text("x^-1", 0.0), DomainError);
  EXPECT_THROW(eval_text("0^-1", 1.0), DomainError);
  EXPECT_THROW(eval_text("tan(x)", std::numbers::pi / 2), DomainError);
  EXPECT_DOUBLE_EQ(eval_text("x^3", -2.0), -8.0);
}

TEST(Expr, DerivativeMatchesKnownForms) {
  const double x = 0.7;
  EXPECT_DOUBLE_EQ(eval_expr(diff_expr(parse_expr("x")), x), 1.0);
  EXPECT_DOUBLE_EQ(eval_expr(diff_expr(parse_expr("3")), x), 0.0);
  EXPECT_NEAR(eval_expr(diff_expr(parse_expr("sin(pi*x)")), x),
              std::numbers::pi * std::cos(std::numbers::pi * x), 1e-14);
  EXPECT_NEAR(eval_expr(diff_expr(parse_expr("x^3")), x), 3 * x * x, 1e-14);
  EXPECT_NEAR(eval_expr(diff_expr(parse_expr("log(x)")), x), 1 / x, 1e-14);
  EXPECT_NEAR(eval_expr(diff_expr(parse_expr("abs(x - 1)")), x), -1.0, 1e-15);
  EXPECT_NEAR(eval_expr(diff_expr(parse_expr("x / (1 + x)")), x), 1 / ((1 + x) * (1 + x)),
              1e-14);
  // Literal folding: the derivative of x^2 has no "1 *" or "+ 0" residue.
  EXPECT_EQ(to_string(diff_expr(parse_expr("x^2"))), to_string(parse_expr("2 * x")));
}

TEST(Expr, RandomDerivativesAgreeWithFiniteDifferences) {
  ExprGen gen(20240611);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> point(0.2, 2.0);
  int checked_exprs = 0;
  for (int attempt = 0; attempt < 2000 && checked_exprs < 100; ++attempt) {
    const std::string text = gen.make(4);
    const Expr e = parse_expr(text);
    const Expr de = diff_expr(e);
    bool checked = false;
    for (int p = 0; p < 5; ++p) {
      const double x = point(rng);
      double d = 0.0, fd1 = 0.0, fd2 = 0.0;
      try {
        d = eval_expr(de, x);
        const double h = 1e-4 * std::max(1.0, std::abs(x));
        fd1 = (eval_expr(e, x + h) - eval_expr(e, x - h)) / (2 * h);
        fd2 = (eval_expr(e, x + h / 2) - eval_expr(e, x - h / 2)) / h;
      } catch (const DomainError&) {
        continue;
      }
      if (!std::isfinite(d) || !std::isfinite(fd1) || std::abs(d) > 1e6) continue;
      const double scale = std::max(1.0, std::abs(d));
      // Skip points where the difference quotient itself is unresolved
      // (near kinks or poles).
      if (std::abs(fd1 - fd2) > 1e-5 * scale) continue;
      EXPECT_NEAR(d, fd2, 1e-5 * scale) << text << " at x = " << x;
      checked = true;
    }
    checked_exprs += checked ? 1 : 0;
  }
  EXPECT_EQ(checked_exprs, 100);
}

TEST(Expr, TextRoundTripsToTheSameTree) {
  ExprGen gen(99);
  for (int i = 0; i < 200; ++i) {
    const Expr e = parse_expr(gen.make(4));
    const std::string s = to_string(e);
    const Expr back = parse_expr(s);
    EXPECT_TRUE(back == e) << s;
    EXPECT_EQ(to_string(back), s);
  }
}

TEST(Expr, EvaluationIsPure) {
  const Expr e = parse_expr("exp(-x) * sin(3*x) + x^2");
  const std::string before = to_string(e);
  const double a = eval_expr(e, 0.3);
  const double b = eval_expr(e, 0.3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_string(e), before);
}

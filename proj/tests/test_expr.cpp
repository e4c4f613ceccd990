#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tn/expr.hpp"

using namespace tn;

namespace {

Jet3 jet(const std::string& src, std::vector<std::string> vars, const Vec& x) {
  return eval_jet3(Expression::parse(src, std::move(vars)), x);
}

// Random well-conditioned expression generator over x1..x3: products and
// compositions of smooth functions whose domains are positive near the
// sampled points.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> var(1, 3);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  const std::string v = "x" + std::to_string(var(rng));
  if (depth == 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f*%s", coef(rng), v.c_str());
    return buf;
  }
  const std::string a = random_expr(rng, depth - 1);
  const std::string b = random_expr(rng, depth - 1);
  switch (pick(rng)) {
    case 0: return "(" + a + ") + (" + b + ")";
    case 1: return "(" + a + ") * (" + b + ")";
    case 2: return "sin(" + a + ")";
    case 3: return "cos(" + a + ") - " + b;
    case 4: return "exp(0.3*(" + a + "))";
    case 5: return "log(2 + (" + a + ")^2)";
    case 6: return "sqrt(3 + sin(" + a + "))";
    case 7: return "(" + a + ")^3 - " + b;
    case 8: return "(" + a + ") / (2 + cos(" + b + "))";
    default: return "(1.5 + sin(" + a + "))^0.7 * " + b;
  }
}

}  // namespace

TEST(ExprParse, SumOfSquares) {
  auto e = Expression::parse("x1^2 + x2^2", {"x1", "x2"});
  const auto& root = e.nodes()[static_cast<std::size_t>(e.root())];
  EXPECT_EQ(root.op, Op::Add);
  EXPECT_EQ(e.nodes()[root.lhs].op, Op::Pow);
  EXPECT_EQ(e.nodes()[root.rhs].op, Op::Pow);
  EXPECT_DOUBLE_EQ(e(Vec::Constant(2, 3.0)), 18.0);
}

TEST(ExprParse, PowerOfSine) {
  auto e = Expression::parse("sin(th)^2", {"th", "ph"});
  const auto& root = e.nodes()[static_cast<std::size_t>(e.root())];
  ASSERT_EQ(root.op, Op::Pow);
  EXPECT_EQ(e.nodes()[root.lhs].op, Op::Sin);
}

TEST(ExprParse, SyntaxErrorOffset) {
  try {
    Expression::parse("x1 +* x2", {"x1", "x2"});
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.offset(), 4u);
  }
}

TEST(ExprParse, UndeclaredIdentifierNamed) {
  try {
    Expression::parse("x1 + y", {"x1"});
    FAIL() << "expected UndeclaredIdentifier";
  } catch (const UndeclaredIdentifier& err) {
    EXPECT_EQ(err.name(), "y");
  }
}

TEST(ExprParse, RejectsBadInput) {
  EXPECT_THROW(Expression::parse("", {"x"}), ParseError);
  EXPECT_THROW(Expression::parse("(x", {"x"}), ParseError);
  EXPECT_THROW(Expression::parse("x)", {"x"}), ParseError);
  EXPECT_THROW(Expression::parse("sin x", {"x"}), ParseError);
  EXPECT_THROW(Expression::parse("x", {"x", "x"}), std::invalid_argument);
}

TEST(ExprParse, Precedence) {
  Vec x(1);
  x << 2.0;
  EXPECT_DOUBLE_EQ(Expression::parse("-x^2", {"x"})(x), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2^3^2", {"x"})(x), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("x^-1", {"x"})(x), 0.5);
  EXPECT_DOUBLE_EQ(Expression::parse("1 - x - 1", {"x"})(x), -2.0);
  EXPECT_DOUBLE_EQ(Expression::parse("8 / x / 2", {"x"})(x), 2.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1.5e1 * x", {"x"})(x), 30.0);
}

TEST(ExprPrint, RoundTrip) {
  const std::vector<std::string> vars = {"x1", "x2", "x3"};
  const std::vector<std::string> cases = {"x1^2 + x2^2", "-(x1 + x2)^2", "(x1 - x2) - x3", "x1 - (x2 - x3)",
                                          "x1 / (x2 * x3)", "(x1^x2)^x3", "x1^x2^x3", "-x1^-2",
                                          "sqrt(abs(x1)) * exp(-x2)", "tan(x1) / log(x2)", "0.1 + 1e-7*x3",
                                          "(-x1)^2", "--x1"};
  for (const auto& src : cases) {
    auto e = Expression::parse(src, vars);
    auto again = Expression::parse(e.to_string(), vars);
    EXPECT_TRUE(e == again) << src << " -> " << e.to_string();
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto e = Expression::parse(random_expr(rng, 3), vars);
    EXPECT_TRUE(e == Expression::parse(e.to_string(), vars)) << e.to_string();
  }
}

TEST(ExprJet, Cube) {
  Vec x(1);
  x << 2.0;
  auto j = jet("x1^3", {"x1"}, x);
  EXPECT_DOUBLE_EQ(j.value, 8.0);
  EXPECT_DOUBLE_EQ(j.grad[0], 12.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), 12.0);
  EXPECT_DOUBLE_EQ(j.third(0, 0, 0), 6.0);
}

TEST(ExprJet, Bilinear) {
  Vec x(2);
  x << 3.0, 5.0;
  auto j = jet("x1*x2", {"x1", "x2"}, x);
  EXPECT_DOUBLE_EQ(j.value, 15.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(j.hess(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), 0.0);
  EXPECT_EQ(max_abs(j.third), 0.0);
}

TEST(ExprJet, SineThirdDerivativeMatchesFd) {
  Vec x(1);
  x << 0.7;
  auto e = Expression::parse("sin(x1)", {"x1"});
  auto j = eval_jet3(e, x);
  EXPECT_NEAR(j.third(0, 0, 0), -std::cos(0.7), 1e-14);
  const double h = 1e-4;
  Vec xp = x, xm = x;
  xp[0] += h;
  xm[0] -= h;
  const double fd = (eval_jet3(e, xp, 2).hess(0, 0) - eval_jet3(e, xm, 2).hess(0, 0)) / (2 * h);
  EXPECT_NEAR(j.third(0, 0, 0), fd, 1e-6);
}

TEST(ExprJet, SymmetryAndFdOracleOnRandomExpressions) {
  const std::vector<std::string> vars = {"x1", "x2", "x3"};
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(-0.8, 0.8);
  int checked = 0;
  while (checked < 20) {
    auto e = Expression::parse(random_expr(rng, 2), vars);
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = coord(rng);
    Jet3 j;
    try {
      j = eval_jet3(e, x);
    } catch (const DomainError&) {
      continue;
    }
    ++checked;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        EXPECT_EQ(j.hess(a, b), j.hess(b, a));
        for (int c = 0; c < 3; ++c) {
          const double t = j.third(a, b, c);
          EXPECT_EQ(t, j.third(a, c, b));
          EXPECT_EQ(t, j.third(b, a, c));
          EXPECT_EQ(t, j.third(b, c, a));
          EXPECT_EQ(t, j.third(c, a, b));
          EXPECT_EQ(t, j.third(c, b, a));
        }
      }
    // Each order against a fourth-order central difference of the one below.
    const double h = 1e-3;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    for (int c = 0; c < 3; ++c) {
      auto shifted = [&](double s) {
        Vec y = x;
        y[c] += s;
        return eval_jet3(e, y);
      };
      Jet3 p1 = shifted(h), m1 = shifted(-h), p2 = shifted(2 * h), m2 = shifted(-2 * h);
      auto d = [&](double fp1, double fm1, double fp2, double fm2) {
        return (8 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h);
      };
      EXPECT_LT(rel(j.grad[c], d(p1.value, m1.value, p2.value, m2.value)), 1e-5) << e.to_string();
      for (int a = 0; a < 3; ++a) {
        EXPECT_LT(rel(j.hess(a, c), d(p1.grad[a], m1.grad[a], p2.grad[a], m2.grad[a])), 1e-5) << e.to_string();
        for (int b = 0; b < 3; ++b)
          EXPECT_LT(rel(j.third(a, b, c), d(p1.hess(a, b), m1.hess(a, b), p2.hess(a, b), m2.hess(a, b))), 1e-5)
              << e.to_string();
      }
    }
  }
}

TEST(ExprJet, PolynomialIsExact) {
  Vec x(2);
  x << 1.5, -0.5;
  auto j = jet("x1^3 - 2*x1*x2^2 + x2", {"x1", "x2"}, x);
  EXPECT_DOUBLE_EQ(j.grad[0], 3 * 2.25 - 2 * 0.25);
  EXPECT_DOUBLE_EQ(j.grad[1], -4 * 1.5 * -0.5 + 1);
  EXPECT_DOUBLE_EQ(j.hess(1, 1), -4 * 1.5);
  EXPECT_DOUBLE_EQ(j.third(0, 0, 0), 6.0);
  EXPECT_DOUBLE_EQ(j.third(0, 1, 1), -4.0);
  EXPECT_DOUBLE_EQ(j.third(1, 1, 1), 0.0);
}

TEST(ExprDomain, ErrorsNameTheNode) {
  Vec x(1);
  x << -1.0;
  try {
    eval_jet3(Expression::parse("1 + log(x1)", {"x1"}), x);
    FAIL() << "expected DomainError";
  } catch (const DomainError& err) {
    EXPECT_EQ(err.node(), "log(x1)");
  }
  EXPECT_THROW(Expression::parse("sqrt(x1)", {"x1"})(x), DomainError);
  EXPECT_THROW(Expression::parse("x1^0.5", {"x1"})(x), DomainError);
  EXPECT_NO_THROW(Expression::parse("x1^3", {"x1"})(x));
  Vec zero = Vec::Zero(1);
  EXPECT_THROW(Expression::parse("abs(x1)", {"x1"})(zero), DomainError);
  EXPECT_THROW(Expression::parse("1/x1", {"x1"})(zero), DomainError);
}

TEST(ExprJet, GradientAtNestedDuals) {
  auto e = Expression::parse("x1^2*x2", {"x1", "x2"});
  std::vector<D1> x = {seed1(2.0, 1.0), seed1(3.0, 0.0)};
  auto g = gradient_at<D1>(e, x);
  EXPECT_DOUBLE_EQ(g[0].v, 12.0);  // 2 x1 x2
  EXPECT_DOUBLE_EQ(g[0].d, 6.0);   // d/dx1 of 2 x1 x2
  EXPECT_DOUBLE_EQ(g[1].v, 4.0);
  EXPECT_DOUBLE_EQ(g[1].d, 4.0);
}

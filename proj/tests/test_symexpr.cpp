#include <gtest/gtest.h>

#include <cmath>

#include "pndp/symexpr.hpp"
#include "support/random_expr.hpp"

namespace pndp {
namespace {

const Expr x = sym("x");
const Expr y = sym("y");
const Expr r = sym("r");
const Expr M = sym("M");
const Expr theta = sym("theta");

double central_difference(const Expr& e, const std::string& s, Binding at, double h) {
  const double x0 = at.get(s);
  at.set(s, x0 + h);
  const double fp = evaluate(e, at);
  at.set(s, x0 - h);
  const double fm = evaluate(e, at);
  return (fp - fm) / (2 * h);
}

TEST(Rational, LowestTermsAndParsing) {
  EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
  EXPECT_EQ(*Rational::parse("2.5"), Rational(5, 2));
  EXPECT_EQ(*Rational::parse("-1/2"), Rational(-1, 2));
  EXPECT_EQ(*Rational::parse("1e-3"), Rational(1, 1000));
  EXPECT_FALSE(Rational::parse("1/0"));
  EXPECT_FALSE(Rational::parse("abc"));
  EXPECT_THROW(Rational(1, 0), DomainError);
  EXPECT_EQ(*Rational::from_double(0.375), Rational(3, 8));
  EXPECT_FALSE(checked_mul(Rational(INT64_MAX / 2), Rational(4)));
}

TEST(Differentiate, PowerRule) {
  EXPECT_EQ(differentiate(square(x), "x"), Expr(2) * x);
}

TEST(Differentiate, ChainRule) {
  EXPECT_EQ(differentiate(square(sin(theta)), "theta"), Expr(2) * sin(theta) * cos(theta));
}

TEST(Differentiate, RedshiftFactorMatchesFiniteDifference) {
  // e^{2 Phi} with Phi = (1/2) ln(2M/r - 1), at r = M/4
  const Expr phi = rational(1, 2) * ln(Expr(2) * M / r - Expr(1));
  const Expr redshift = exp(Expr(2) * phi);
  const Expr d = differentiate(redshift, "r");
  const Binding at{{"M", 1.0}, {"r", 0.25}};
  const double fd = central_difference(redshift, "r", at, 1e-6);
  EXPECT_NEAR(evaluate(d, at), fd, 1e-6 * (1 + std::fabs(fd)));
  EXPECT_NEAR(evaluate(d, at), -32.0, 1e-9);  // d/dr (2M/r - 1) = -2M/r^2
}

TEST(Differentiate, IndependentExpressionIsZero) {
  EXPECT_TRUE(differentiate(exp(y) * sin(y), "x").is_zero());
  EXPECT_TRUE(differentiate(Expr(Rational(7, 3)), "x").is_zero());
}

TEST(Differentiate, ElementaryFunctionsAgainstFiniteDifferences) {
  const std::vector<Expr> cases = {
      exp(x * y), ln(x + y), sqrt(x * x + y), abs(x - y), pow(x, y), pow(Expr(2), x),
      cos(x) / (Expr(1) + square(sin(y))), pow(x + Expr(1), rational(-3, 2)),
  };
  const Binding at{{"x", 0.7}, {"y", 1.3}};
  for (const auto& e : cases) {
    for (const std::string s : {"x", "y"}) {
      const double fd = central_difference(e, s, at, 1e-6);
      EXPECT_NEAR(evaluate(differentiate(e, s), at), fd, 1e-6 * (1 + std::fabs(fd))) << to_prefix(e) << " d" << s;
    }
  }
}

TEST(Evaluate, Basics) {
  EXPECT_DOUBLE_EQ(evaluate(x + y, {{"x", 1.0}, {"y", 2.0}}), 3.0);
  EXPECT_THROW((void)evaluate(x + y, {{"x", 1.0}}), UnboundSymbol);
}

TEST(Evaluate, EmbeddingSlopeRatio) {
  const Expr xi = sqrt(square(r) - Expr(1));
  const Expr dxi = differentiate(xi, "r");
  const Expr ratio = square(dxi) / (Expr(1) + square(dxi));
  EXPECT_NEAR(evaluate(ratio, {{"r", 2.0}}), 4.0 / 7.0, 1e-15);
}

TEST(Evaluate, DomainErrors) {
  const Expr e = ln(Expr(2) * M / r - Expr(1));
  EXPECT_THROW((void)evaluate(e, {{"M", 1.0}, {"r", 3.0}}), DomainError);
  EXPECT_THROW((void)evaluate(Expr(1) / x, {{"x", 0.0}}), DomainError);
  EXPECT_THROW((void)evaluate(sqrt(x), {{"x", -1.0}}), DomainError);
  EXPECT_THROW((void)evaluate(pow(x, rational(1, 3)), {{"x", -8.0}}), DomainError);
  EXPECT_DOUBLE_EQ(evaluate(pow(x, Expr(3)), {{"x", -2.0}}), -8.0);
}

TEST(Simplify, AdditiveIdentity) {
  EXPECT_EQ(simplify(parse_prefix("(add x 0)")), x);
  EXPECT_EQ(simplify(parse_prefix("(mul x 0 (exp y))")), Expr(0));
  EXPECT_EQ(simplify(parse_prefix("(pow x 0)")), Expr(1));
}

TEST(Simplify, CollectsLikeTermsAndPowers) {
  EXPECT_EQ(simplify(parse_prefix("(add x x (neg x))")), x);
  EXPECT_EQ(simplify(parse_prefix("(mul x x)")), square(x));
  EXPECT_EQ(simplify(parse_prefix("(div x x)")), Expr(1));
  EXPECT_EQ(simplify(parse_prefix("(pow (sqrt x) 2)")), x);
  EXPECT_EQ(simplify(parse_prefix("(exp (mul 2 (mul 1/2 (ln y))))")), y);
}

TEST(Simplify, TrigIdentityIsEquivalentEitherWay) {
  const Expr s = simplify(square(sin(theta)) + square(cos(theta)));
  EXPECT_TRUE(equivalent(s, Expr(1), Domain{{"theta", {-3.0, 3.0}}}, 100, 1e-12));
}

TEST(Simplify, FlammEmbeddingForms) {
  const Expr stated = Expr(4) * M / sqrt(Expr(2) * M / (r - Expr(2) * M));
  const Expr flamm = sqrt(Expr(8) * M * (r - Expr(2) * M));
  const Domain domain{{"M", {0.5, 1.0}}, {"r", {2.05, 6.0}}};
  EXPECT_TRUE(equivalent(simplify(stated), flamm, domain, 200, 1e-12));
}

TEST(Simplify, DoesNotMergeEvenPowersIntoRoots) {
  // (x^2)^(1/2) is |x|, so the rewrite to x would be wrong for negative x
  const Expr e = parse_prefix("(pow (pow x 2) 1/2)");
  EXPECT_TRUE(equivalent(simplify(e), abs(x), Domain{{"x", {-2.0, 2.0}}}));
}

TEST(Equivalent, Examples) {
  const Domain wide{{"x", {-5.0, 5.0}}};
  EXPECT_TRUE(equivalent(square(x + Expr(1)), square(x) + Expr(2) * x + Expr(1), wide, 100, 1e-9));
  EXPECT_FALSE(equivalent(square(x), pow(x, Expr(3)), Domain{{"x", {2.0, 3.0}}}, 100, 1e-9));
}

TEST(Equivalent, FlareOutIdentity) {
  const Expr xi = sqrt(square(r) - Expr(1));
  const Expr d1 = differentiate(xi, "r");
  const Expr d2 = differentiate(d1, "r");
  const Expr b = r * square(d1) / (Expr(1) + square(d1));
  const Expr lhs = differentiate(b, "r") - b / r;
  const Expr rhs = Expr(2) * r * d1 * d2 / square(Expr(1) + square(d1));
  EXPECT_TRUE(equivalent(lhs, rhs, Domain{{"r", {1.5, 5.0}}}, 100, 1e-9));
}

TEST(Equivalent, DomainHandling) {
  EXPECT_THROW((void)equivalent(ln(x), ln(x), Domain{{"x", {-2.0, -1.0}}}), NoValidSamples);
  // sqrt(x)^2 is undefined for x < 0 while x is not
  EXPECT_FALSE(equivalent(Expr::raw(Kind::Pow, {sqrt(x), Expr(2)}), x, Domain{{"x", {-1.0, 1.0}}}));
  EXPECT_THROW((void)equivalent(x, y, Domain{{"x", {0.0, 1.0}}}), UnboundSymbol);
  EXPECT_THROW((void)equivalent(x, x, Domain{{"x", {0.0, 1.0}}}, 10, 0.0), InvalidArgument);
}

TEST(Prefix, ParsesAndReportsErrors) {
  EXPECT_EQ(parse_prefix("(pow (sin theta) 2)"), Expr::raw(Kind::Pow, {sin(theta), Expr(2)}));
  EXPECT_EQ(to_prefix(parse_prefix("(add y x -1/2)")), "(add -1/2 x y)");
  EXPECT_THROW((void)parse_prefix("(pow x)"), ParseError);
  EXPECT_THROW((void)parse_prefix("(frob x)"), ParseError);
  EXPECT_THROW((void)parse_prefix("(add x y"), ParseError);
  EXPECT_THROW((void)parse_prefix("x y"), ParseError);
  EXPECT_THROW((void)parse_prefix("1x"), ParseError);
}

// Properties over random trees -------------------------------------------------

TEST(SymexprProperties, SimplifyPreservesValues) {
  testing::RandomExprGenerator gen(20240601, {"x", "y"});
  const Interval range{0.3, 2.5};
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const Expr e = gen.generate(6);
    const Expr s = simplify(e);
    for (int k = 0; k < 10; ++k) {
      const Binding b = gen.binding(range);
      double original = 0.0;
      try {
        original = evaluate(e, b);
      } catch (const DomainError&) {
        continue;
      }
      double simplified = 0.0;
      ASSERT_NO_THROW(simplified = evaluate(s, b)) << to_prefix(e) << "\n -> " << to_prefix(s);
      ASSERT_LE(relative_gap(original, simplified), 1e-12) << to_prefix(e) << "\n -> " << to_prefix(s);
      ++compared;
    }
  }
  EXPECT_GT(compared, 3000);
}

TEST(SymexprProperties, SimplifyIsIdempotent) {
  testing::RandomExprGenerator gen(7, {"x", "y"});
  for (int i = 0; i < 500; ++i) {
    const Expr s = simplify(gen.generate(6));
    ASSERT_EQ(simplify(s), s) << to_prefix(s);
  }
}

TEST(SymexprProperties, PrefixRoundTripIsLossless) {
  testing::RandomExprGenerator gen(11, {"x", "y", "theta"});
  for (int i = 0; i < 300; ++i) {
    const Expr e = gen.generate(5);
    ASSERT_EQ(parse_prefix(to_prefix(e)), e) << to_prefix(e);
    const Expr s = simplify(e);
    ASSERT_EQ(parse_prefix(to_prefix(s)), s) << to_prefix(s);
  }
}

TEST(SymexprProperties, DifferentiationIsLinear) {
  testing::RandomExprGenerator gen(99, {"x", "y"});
  const Domain domain{{"x", {0.4, 2.0}}, {"y", {0.4, 2.0}}};
  const Expr a = rational(-5, 3);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Expr e1 = gen.generate(4);
    const Expr e2 = gen.generate(4);
    const Expr lhs = differentiate(a * e1 + e2, "x");
    const Expr rhs = a * differentiate(e1, "x") + differentiate(e2, "x");
    try {
      EXPECT_TRUE(equivalent(lhs, rhs, domain, 10, 1e-9)) << to_prefix(e1) << " / " << to_prefix(e2);
      ++checked;
    } catch (const NoValidSamples&) {
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(SymexprProperties, EquivalenceIsSymmetric) {
  testing::RandomExprGenerator gen(5, {"x"});
  const Domain domain{{"x", {0.2, 3.0}}};
  for (int i = 0; i < 200; ++i) {
    const Expr e1 = gen.generate(4);
    const Expr e2 = i % 2 ? simplify(e1) : gen.generate(4);
    bool forward = false;
    bool backward = false;
    bool forward_threw = false;
    bool backward_threw = false;
    try {
      forward = equivalent(e1, e2, domain, 20, 1e-9, i);
    } catch (const NoValidSamples&) {
      forward_threw = true;
    }
    try {
      backward = equivalent(e2, e1, domain, 20, 1e-9, i);
    } catch (const NoValidSamples&) {
      backward_threw = true;
    }
    ASSERT_EQ(forward_threw, backward_threw);
    ASSERT_EQ(forward, backward);
  }
}

}  // namespace
}  // namespace pndp

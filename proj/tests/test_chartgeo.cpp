#include <gtest/gtest.h>

#include <cmath>

#include "pndp/curvature.hpp"
#include "pndp/models.hpp"
#include "support/numeric_curvature.hpp"

namespace pndp {
namespace {

const Expr theta = sym("theta");
const Expr r = sym("r");
const Expr x = sym("x");
const Expr y = sym("y");

bool close(double a, double b, double tol) { return relative_gap(a, b) <= tol; }

void expect_matches_oracle(const Metric& g, std::size_t points) {
  const Geometry geo(g);
  const std::size_t n = g.dim();
  SampleRng rng(7);
  const Domain domain = g.chart().domain();
  for (std::size_t p = 0; p < points; ++p) {
    const Binding at = domain.draw(rng);
    const testing::NumericCurvature fd(g, at);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_TRUE(close(evaluate(geo.christoffel()(k, i, j), at), fd.christoffel(k, i, j), 1e-5));
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) EXPECT_TRUE(close(evaluate(geo.ricci()(i, j), at), fd.ricci()(i, j), 1e-5));
    }
    EXPECT_TRUE(close(evaluate(geo.scalar(), at), fd.scalar(), 1e-5));
  }
}

TEST(Chart, RejectsBadCoordinates) {
  EXPECT_THROW(Chart({{"x", {0, 1}}, {"x", {0, 1}}}), InvalidChart);
  EXPECT_THROW(Chart({{"x", {1, 1}}}), InvalidChart);
  EXPECT_THROW(Chart({{"2x", {0, 1}}}), InvalidChart);
  Chart a({{"x", {0, 1}}});
  EXPECT_THROW(Chart::concat({&a, &a}), SymbolCollision);
}

TEST(Metric, ValidatesComponents) {
  Chart c({{"x", {1, 2}}, {"y", {1, 2}}});
  ExprMatrix asym(2, 2);
  asym(0, 0) = 1;
  asym(1, 1) = 1;
  asym(0, 1) = x / Expr(10);
  EXPECT_THROW(Metric(c, asym), AsymmetricMetric);

  ExprMatrix degenerate(2, 2);
  degenerate(0, 0) = 1;
  degenerate(0, 1) = 1;
  degenerate(1, 0) = 1;
  degenerate(1, 1) = 1;
  EXPECT_THROW(Metric(c, degenerate), DegenerateMetric);

  EXPECT_THROW(Metric::diagonal(c, {Expr(1), sym("q")}), UnboundSymbol);
  EXPECT_THROW(Metric::diagonal(c, {1, 1}, 3), InvalidArgument);
}

TEST(Metric, SignatureAndVirtualDim) {
  const Metric g = models::ricci_flat_pndp6();
  EXPECT_EQ(g.geometric_dim(), 6);
  EXPECT_EQ(g.virtual_dim(), 2);
  EXPECT_EQ(g.negative_directions(), 2);
  EXPECT_EQ(models::unit_sphere().negative_directions(), 0);
}

TEST(Metric, InverseOfCoupledBlock) {
  Chart c({{"x", {1, 2}}, {"y", {1, 2}}, {"z", {1, 2}}});
  ExprMatrix m(3, 3);
  m(0, 0) = square(x) + Expr(2);
  m(0, 1) = m(1, 0) = x * y;
  m(1, 1) = Expr(3) + y;
  m(2, 2) = exp(sym("z"));
  const Metric g(c, m);
  const ExprMatrix inv = inverse_metric(g);
  const Binding at{{"x", 1.3}, {"y", 1.7}, {"z", 1.1}};
  const Eigen::MatrixXd prod = inv.evaluate(at) * evaluate(g, at);
  EXPECT_TRUE(prod.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));
  EXPECT_TRUE(inv(0, 2).is_zero());
  EXPECT_NEAR(evaluate(determinant(g), at), evaluate(g, at).determinant(), 1e-12);
}

TEST(Christoffel, EuclideanVanishes) {
  const Geometry geo(models::euclidean3());
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) EXPECT_TRUE(geo.christoffel()(k, i, j).is_zero());
    }
  }
}

TEST(Christoffel, UnitSphere) {
  const Christoffel g = christoffel(models::unit_sphere());
  const Domain d = models::unit_sphere().chart().domain();
  EXPECT_TRUE(equivalent(g(0, 1, 1), neg(sin(theta) * cos(theta)), d));
  EXPECT_TRUE(equivalent(g(1, 0, 1), cos(theta) / sin(theta), d));
  EXPECT_TRUE(equivalent(g(1, 1, 0), cos(theta) / sin(theta), d));
  EXPECT_TRUE(g(0, 0, 0).is_zero());
  EXPECT_TRUE(g(0, 0, 1).is_zero());
  EXPECT_TRUE(g(1, 0, 0).is_zero());
  EXPECT_TRUE(g(1, 1, 1).is_zero());
}

TEST(Christoffel, PolarPlane) {
  const Christoffel g = christoffel(models::polar_plane());
  EXPECT_EQ(g(0, 1, 1), neg(r));
  EXPECT_EQ(g(1, 0, 1), reciprocal(r));
  EXPECT_TRUE(g(0, 0, 0).is_zero());
}

TEST(Christoffel, DegenerateMetricRejected) {
  EXPECT_THROW(Metric::diagonal(Chart({{"x", {1, 2}}}), {Expr(0)}), DegenerateMetric);
}

TEST(Ricci, EuclideanAndPolarVanish) {
  EXPECT_TRUE(ricci(models::euclidean3()).is_structurally_zero());
  const Geometry polar(models::polar_plane());
  EXPECT_TRUE(polar.ricci().is_structurally_zero());
  EXPECT_TRUE(polar.scalar().is_zero());
}

TEST(Ricci, UnitSphereIsEinstein) {
  const Metric g = models::unit_sphere();
  const Geometry geo(g);
  const Domain d = g.chart().domain();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_TRUE(equivalent(geo.ricci()(i, j), g(i, j), d));
  }
  EXPECT_TRUE(equivalent(geo.scalar(), Expr(2), d));
}

TEST(Ricci, HyperbolicPlane) {
  const Metric g = models::hyperbolic_plane();
  const Geometry geo(g);
  const Domain d = g.chart().domain();
  EXPECT_TRUE(equivalent(geo.ricci()(0, 0), neg(g(0, 0)), d));
  EXPECT_TRUE(equivalent(geo.ricci()(1, 1), neg(g(1, 1)), d));
  EXPECT_TRUE(equivalent(geo.scalar(), Expr(-2), d));
}

TEST(Ricci, RicciFlatPndpMetric) {
  const Geometry geo(models::ricci_flat_pndp6());
  EXPECT_TRUE(geo.ricci().is_structurally_zero());
  EXPECT_TRUE(geo.scalar().is_zero());
}

TEST(Ricci, MatchesFiniteDifferenceOracle) {
  expect_matches_oracle(models::euclidean3(), 20);
  expect_matches_oracle(models::polar_plane(), 20);
  expect_matches_oracle(models::unit_sphere(), 20);
  expect_matches_oracle(models::hyperbolic_plane(), 20);
  expect_matches_oracle(models::ricci_flat_pndp6(), 20);
}

TEST(Ricci, NonDiagonalMetricMatchesOracle) {
  Chart c({{"x", {0.5, 1.5}}, {"y", {0.5, 1.5}}});
  ExprMatrix m(2, 2);
  m(0, 0) = Expr(2) + square(y);
  m(0, 1) = m(1, 0) = x * y / Expr(3);
  m(1, 1) = exp(x);
  expect_matches_oracle(Metric(c, m), 20);
}

TEST(Riemann, SymmetriesAndBianchi) {
  Chart c({{"x", {0.5, 1.5}}, {"y", {0.5, 1.5}}, {"z", {0.5, 1.5}}});
  ExprMatrix m(3, 3);
  m(0, 0) = Expr(1) + square(y);
  m(1, 1) = exp(x) + sym("z");
  m(2, 2) = Expr(2) + x * y;
  m(0, 2) = m(2, 0) = y / Expr(4);
  const Metric g(c, m);
  const Geometry geo(g);
  const Riemann R = geo.riemann();
  SampleRng rng(3);
  for (int p = 0; p < 5; ++p) {
    const Binding at = c.domain().draw(rng);
    for (std::size_t l = 0; l < 3; ++l) {
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          for (std::size_t k = 0; k < 3; ++k) {
            const double cyc = evaluate(R(l, i, j, k), at) + evaluate(R(l, j, k, i), at) + evaluate(R(l, k, i, j), at);
            EXPECT_NEAR(cyc, 0.0, 1e-9);
            EXPECT_NEAR(evaluate(R(l, i, j, k), at), -evaluate(R(l, j, i, k), at), 1e-9);
          }
        }
      }
    }
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(evaluate(geo.ricci()(j, k), at), evaluate(geo.ricci()(k, j), at), 1e-9);
        double contracted = 0.0;
        for (std::size_t i = 0; i < 3; ++i) contracted += evaluate(R(i, i, j, k), at);
        EXPECT_NEAR(contracted, evaluate(geo.ricci()(j, k), at), 1e-9);
      }
    }
  }
}

TEST(Ricci, ProductIsBlockDiagonal) {
  const Metric sphere = models::unit_sphere();
  const Metric hyp = models::hyperbolic_plane();
  const Chart c = Chart::concat({&sphere.chart(), &hyp.chart()});
  ExprMatrix m(4, 4);
  m(0, 0) = sphere(0, 0);
  m(1, 1) = sphere(1, 1);
  m(2, 2) = hyp(0, 0);
  m(3, 3) = hyp(1, 1);
  const Geometry product(Metric(c, m));
  const ExprMatrix rs = ricci(sphere);
  const ExprMatrix rh = ricci(hyp);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Expr& got = product.ricci()(i, j);
      if (i < 2 && j < 2) {
        EXPECT_EQ(got, rs(i, j));
      } else if (i >= 2 && j >= 2) {
        EXPECT_EQ(got, rh(i - 2, j - 2));
      } else {
        EXPECT_TRUE(got.is_zero());
      }
    }
  }
}

TEST(Hessian, ConstantAndFlat) {
  EXPECT_TRUE(hessian(models::unit_sphere(), Expr(5)).is_structurally_zero());
  const Metric plane = models::flat({"x", "y"});
  const ExprMatrix h = hessian(plane, square(x) + square(y));
  EXPECT_EQ(h(0, 0), Expr(2));
  EXPECT_EQ(h(1, 1), Expr(2));
  EXPECT_TRUE(h(0, 1).is_zero());
  EXPECT_EQ(laplacian(plane, square(x) + square(y)), Expr(4));
}

TEST(Hessian, SphereCosine) {
  const Metric g = models::unit_sphere();
  const Domain d = g.chart().domain();
  const ExprMatrix h = hessian(g, cos(theta));
  EXPECT_TRUE(equivalent(h(0, 0), neg(cos(theta)), d));
  EXPECT_TRUE(equivalent(h(1, 1), neg(cos(theta) * square(sin(theta))), d));
  EXPECT_TRUE(h(0, 1).is_zero());
  EXPECT_TRUE(equivalent(laplacian(g, cos(theta)), Expr(-2) * cos(theta), d));
}

TEST(Hessian, RejectsForeignSymbols) {
  EXPECT_THROW(hessian(models::unit_sphere(), sym("q")), InvalidArgument);
}

TEST(Gradient, EuclideanLinear) {
  const Metric g = models::euclidean3();
  EXPECT_EQ(gradient_norm_sq(g, x), Expr(1));
  EXPECT_TRUE(laplacian(g, x).is_zero());
  EXPECT_EQ(laplacian(g, square(x)), Expr(2));
}

TEST(Laplacian, IsTraceOfHessian) {
  const Metric g = models::hyperbolic_plane();
  const Geometry geo(g);
  const Expr f = x * square(y) + sin(x);
  EXPECT_EQ(geo.laplacian(f), geo.trace(geo.hessian(f)));
  // hyperbolic Laplacian y^2 (f_xx + f_yy)
  EXPECT_TRUE(equivalent(geo.laplacian(f), square(y) * (Expr(2) * x - sin(x)), g.chart().domain()));
}

}  // namespace
}  // namespace pndp

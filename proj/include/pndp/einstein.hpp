#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pndp/curvature.hpp"
#include "pndp/warped.hpp"

namespace pndp {

struct CheckOptions {
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  double tol = 1e-8;
};

/// One scalar residual  base + lambda * lambda_coeff + mu * mu_coeff.
/// It is normalized by 1 + |lambda * lambda_coeff| + |mu * mu_coeff|.
struct ResidualTerm {
  Expr base = 0;
  Expr lambda_coeff = 0;
  Expr mu_coeff = 0;
};

struct EquationResult {
  std::string name;
  std::string statement;
  std::size_t points = 0;
  std::size_t skipped = 0;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double min_abs = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct LambdaEstimate {
  std::optional<double> lambda;  ///< empty when the metric is not Einstein
  double spread = 0.0;           ///< max - min of the sampled Ric_ij / g_ij ratios
  std::size_t points = 0;
  std::string reason;

  [[nodiscard]] bool einstein() const { return lambda.has_value(); }
};

struct EinsteinReport {
  std::string system;
  std::string regime;
  std::optional<double> lambda;
  double mu = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  std::vector<EquationResult> equations;

  [[nodiscard]] bool pass() const {
    return lambda.has_value() && !equations.empty() &&
           std::all_of(equations.begin(), equations.end(), [](const EquationResult& e) { return e.pass; });
  }

  [[nodiscard]] const EquationResult* find(std::string_view name) const {
    for (const auto& e : equations) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

namespace detail {

inline std::vector<Binding> sample_points(const Domain& domain, std::size_t samples, std::uint64_t seed) {
  std::vector<Binding> out;
  SampleRng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) out.push_back(domain.draw(rng));
  return out;
}

inline EquationResult evaluate_residual(std::string name, std::string statement, const std::vector<ResidualTerm>& terms,
                                        double lambda, double mu, const std::vector<Binding>& points, double tol) {
  EquationResult r;
  r.name = std::move(name);
  r.statement = std::move(statement);
  r.tolerance = tol;
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    double worst = 0.0;
    try {
      for (const auto& t : terms) {
        const double lc = t.lambda_coeff.is_zero() ? 0.0 : lambda * evaluate(t.lambda_coeff, p);
        const double mc = t.mu_coeff.is_zero() ? 0.0 : mu * evaluate(t.mu_coeff, p);
        const double v = evaluate(t.base, p) + lc + mc;
        worst = std::max(worst, std::fabs(v) / (1.0 + std::fabs(lc) + std::fabs(mc)));
      }
    } catch (const DomainError&) {
      ++r.skipped;
      continue;
    }
    ++r.points;
    sum += worst;
    r.max_abs = std::max(r.max_abs, worst);
    lo = std::min(lo, worst);
  }
  if (r.points > 0) {
    r.mean_abs = sum / static_cast<double>(r.points);
    r.min_abs = lo;
  }
  r.pass = r.points > 0 && r.max_abs <= tol;
  return r;
}

/// Components T_ij - lambda g_ij of a symmetric tensor equation (upper triangle).
inline std::vector<ResidualTerm> tensor_terms(const ExprMatrix& t, const ExprMatrix* g, Expr g_factor = -1) {
  std::vector<ResidualTerm> out;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = i; j < t.cols(); ++j) {
      ResidualTerm term{t(i, j), 0, 0};
      if (g != nullptr) term.lambda_coeff = simplify(g_factor * (*g)(i, j));
      out.push_back(std::move(term));
    }
  }
  return out;
}

}  // namespace detail

/// Estimates lambda in Ric = lambda g from the ratios Ric_ij / g_ij at
/// sampled chart points. Components with |g_ij| <= 1e-12 must have vanishing
/// Ricci; all ratios must agree within 1e-7.
inline LambdaEstimate infer_lambda(const Geometry& geo, std::size_t samples = 20, std::uint64_t seed = 0) {
  LambdaEstimate out;
  if (geo.ricci().is_structurally_zero()) {
    out.lambda = 0.0;
    out.reason = "Ricci tensor vanishes identically";
    return out;
  }
  const std::size_t n = geo.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : detail::sample_points(geo.metric().chart().domain(), samples, seed)) {
    Eigen::MatrixXd ric;
    Eigen::MatrixXd g;
    try {
      ric = geo.ricci().evaluate(p);
      g = evaluate(geo.metric(), p);
    } catch (const DomainError&) {
      continue;
    }
    ++out.points;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (std::fabs(g(i, j)) > 1e-12) {
          const double ratio = ric(i, j) / g(i, j);
          lo = std::min(lo, ratio);
          hi = std::max(hi, ratio);
          sum += ratio;
          ++count;
        } else if (std::fabs(ric(i, j)) > 1e-7) {
          out.reason = "Ricci has a component where the metric vanishes";
          return out;
        }
      }
    }
  }
  if (count == 0) {
    out.reason = "no valid sample point";
    return out;
  }
  out.spread = hi - lo;
  double mean = sum / static_cast<double>(count);
  if (std::fabs(mean) < 1e-12) mean = 0.0;
  if (out.spread > 1e-7 * (1.0 + std::fabs(mean))) {
    out.reason = "Ric_ij / g_ij ratios disagree";
    return out;
  }
  out.lambda = mean;
  out.reason = "Ric = lambda g at every sampled point";
  return out;
}

inline LambdaEstimate infer_lambda(const Metric& g, std::size_t samples = 20, std::uint64_t seed = 0) {
  return infer_lambda(Geometry(g), samples, seed);
}

/// The general warped Einstein system on B x_f F:
///   Ric_B - (d/f) Hess f = lambda g_B,   Ric_F = mu g_F,   f Lap f + (d-1)|grad f|^2 + lambda f^2 = mu.
inline EinsteinReport check_warped_einstein_system(const WarpedSpec& spec, double lambda, double mu,
                                                   const CheckOptions& opt = {}) {
  validate(spec);
  const int d = spec.d();
  if (d < 2) throw UnsupportedFiberDim("the warped Einstein system needs fiber dimension at least 2");
  const Geometry base(base_metric(spec));
  const Geometry fiber(spec.fiber.metric());
  const Expr f = spec.f();
  const ExprMatrix hess = base.hessian(f);
  ExprMatrix base_eq(base.dim(), base.dim());
  for (std::size_t i = 0; i < base.dim(); ++i) {
    for (std::size_t j = 0; j < base.dim(); ++j) {
      base_eq(i, j) = simplify(base.ricci()(i, j) - Expr(d) * hess(i, j) / f);
    }
  }
  const ExprMatrix& g_base = base.metric().components();
  const ExprMatrix& g_fiber = fiber.metric().components();
  const Expr warp = simplify(f * base.trace(hess) + Expr(d - 1) * base.gradient_norm_sq(f));

  EinsteinReport rep;
  rep.system = "warped-einstein";
  rep.regime = "general";
  rep.lambda = lambda;
  rep.mu = mu;
  rep.seed = opt.seed;
  rep.samples = opt.samples;
  rep.tolerance = opt.tol;
  const auto points = detail::sample_points(spec.base_domain(), opt.samples, opt.seed);
  rep.equations.push_back(detail::evaluate_residual("base_ricci", "Ric - (d/f) Hess f = lambda g",
                                                    detail::tensor_terms(base_eq, &g_base), lambda, mu, points,
                                                    opt.tol));
  std::vector<ResidualTerm> fiber_terms;
  for (std::size_t i = 0; i < fiber.dim(); ++i) {
    for (std::size_t j = i; j < fiber.dim(); ++j) {
      fiber_terms.push_back({fiber.ricci()(i, j), 0, simplify(neg(g_fiber(i, j)))});
    }
  }
  rep.equations.push_back(
      detail::evaluate_residual("fiber_ricci", "Ric_F = mu g_F", fiber_terms, lambda, mu, points, opt.tol));
  rep.equations.push_back(detail::evaluate_residual("warp_scalar", "f Lap f + (d-1) |grad f|^2 + lambda f^2 = mu",
                                                    {{warp, square(f), Expr(-1)}}, lambda, mu, points, opt.tol));
  return rep;
}

/// Outcome of checking that the contracted base equation and the contracted
/// warp equation together imply the gradient identity
///   |grad f|^2 + [(lambda (d - n) + R_B) / (d (d - 1))] f^2 = mu / (d - 1).
struct ContractedIdentityReport {
  std::size_t samples = 0;
  std::size_t d_equals_n = 0;
  double max_residual = 0.0;
  double max_coefficient_gap = 0.0;  ///< d = n coefficient versus R_B / (d (d - 1))
  double flat_gradient = 0.0;        ///< |grad f|^2 forced by mu = lambda = R_B = 0
  bool pass = false;
};

inline ContractedIdentityReport check_contracted_identity(std::size_t samples = 200, std::uint64_t seed = 0,
                                                          double tol = 1e-10) {
  const Expr RB = sym("R_B");
  const Expr f = sym("f");
  const Expr lap = sym("Lap_f");
  const Expr grad = sym("grad_sq");
  const Expr lam = sym("lambda");
  const Expr mu = sym("mu");
  const Expr n = sym("n");
  const Expr d = sym("d");
  // contracted base equation  R_B f^2 - f Lap f d = n f^2 lambda, solved for Lap f
  const Expr eq2 = RB * square(f) - f * lap * d - n * square(f) * lam;
  const Expr lap_solved = (RB - n * lam) * f / d;
  // contracted warp equation  f Lap f d + d (d-1) |grad f|^2 + lambda f^2 d = mu d, solved for mu
  const Expr eq3 = f * lap * d + d * (d - Expr(1)) * grad + lam * square(f) * d - mu * d;
  const Expr mu_solved = substitute(f * lap + (d - Expr(1)) * grad + lam * square(f), "Lap_f", lap_solved);
  const Expr coeff = (lam * (d - n) + RB) / (d * (d - Expr(1)));
  const Expr eq4 = grad + coeff * square(f) - mu / (d - Expr(1));
  const Expr implied = substitute(eq4, "mu", mu_solved);

  ContractedIdentityReport out;
  SampleRng rng(seed);
  const Interval wide{-3.0, 3.0};
  for (std::size_t s = 0; s < samples; ++s) {
    const int dv = 2 + static_cast<int>(rng.next() % 5);
    const bool same = s % 4 == 0;
    const int nv = same ? dv : 1 + static_cast<int>(rng.next() % 8);
    Binding b;
    b.set("d", dv);
    b.set("n", nv);
    b.set("R_B", rng.uniform(wide));
    b.set("f", rng.uniform({0.2, 3.0}));
    b.set("grad_sq", rng.uniform({0.0, 3.0}));
    b.set("lambda", rng.uniform(wide));
    b.set("Lap_f", evaluate(lap_solved, b));
    b.set("mu", evaluate(mu_solved, b));
    // both premises hold at this assignment, so the conclusion must too
    const double scale = 1.0 + std::fabs(evaluate(grad, b)) + std::fabs(evaluate(coeff * square(f), b));
    double res = std::fabs(evaluate(eq2, b)) / (1.0 + std::fabs(evaluate(RB * square(f), b)));
    res = std::max(res, std::fabs(evaluate(eq3, b)) / (1.0 + std::fabs(evaluate(mu * d, b))));
    res = std::max(res, std::fabs(evaluate(eq4, b)) / scale);
    res = std::max(res, std::fabs(evaluate(implied, b)) / scale);
    out.max_residual = std::max(out.max_residual, res);
    if (nv == dv) {
      ++out.d_equals_n;
      const double reduced = evaluate(RB / (d * (d - Expr(1))), b);
      out.max_coefficient_gap = std::max(out.max_coefficient_gap, relative_gap(evaluate(coeff, b), reduced));
      Binding flat = b;
      flat.set("mu", 0.0);
      flat.set("lambda", 0.0);
      flat.set("R_B", 0.0);
      const Expr forced = mu / (d - Expr(1)) - coeff * square(f);
      out.flat_gradient = std::max(out.flat_gradient, std::fabs(evaluate(forced, flat)));
    }
    ++out.samples;
  }
  out.pass = out.max_residual < tol && out.max_coefficient_gap < tol && out.flat_gradient < tol && out.d_equals_n > 0;
  return out;
}

/// Einstein system for a PNDP warped product. Picks the regime from n - d:
/// for n - d > 0 the fiber dimension must equal dim B'.
inline EinsteinReport check_pndp_system(const WarpedSpec& spec, double lambda, const CheckOptions& opt = {}) {
  validate(spec);
  const int n = spec.n();
  const int d = spec.d();
  const int np = spec.n_prime();
  const int nt = spec.n_tilde();
  if (n - d > 0 && d != np) {
    throw RegimeMismatch("n - d = " + std::to_string(n - d) + " > 0 requires d = dim B' but d = " +
                         std::to_string(d) + " and dim B' = " + std::to_string(np));
  }
  const WarpData w(spec);
  const Expr& f = w.f;
  const auto points = detail::sample_points(spec.base_domain(), opt.samples, opt.seed);

  EinsteinReport rep;
  rep.system = "pndp";
  rep.regime = n - d > 0 ? "positive" : (n - d == 0 ? "zero" : "negative");
  rep.lambda = lambda;
  rep.mu = 0.0;
  rep.seed = opt.seed;
  rep.samples = opt.samples;
  rep.tolerance = opt.tol;
  auto add_eq = [&](const char* name, const char* statement, const std::vector<ResidualTerm>& terms) {
    rep.equations.push_back(detail::evaluate_residual(name, statement, terms, lambda, 0.0, points, opt.tol));
  };

  // R' f - Lap' f' d = n' f lambda
  std::vector<ResidualTerm> prime_scalar;
  std::vector<ResidualTerm> prime_tensor;
  if (w.prime) {
    prime_scalar.push_back({simplify(w.prime->scalar() * f - Expr(d) * w.lap_prime), simplify(Expr(-np) * f), 0});
    ExprMatrix t(w.prime->dim(), w.prime->dim());
    for (std::size_t i = 0; i < t.rows(); ++i) {
      for (std::size_t j = 0; j < t.cols(); ++j) {
        t(i, j) = simplify(w.prime->ricci()(i, j) - Expr(d) * w.hess_prime(i, j) / f);
      }
    }
    prime_tensor = detail::tensor_terms(t, &w.prime->metric().components());
  }
  add_eq("base_prime_scalar", "R' f - Lap' f' d = n' f lambda", prime_scalar);
  add_eq("base_prime_ricci", "Ric' - (d/f) Hess' f' = lambda g'", prime_tensor);

  std::vector<ResidualTerm> tilde_lap;
  std::vector<ResidualTerm> tilde_hess;
  std::vector<ResidualTerm> tilde_scalar;
  std::vector<ResidualTerm> tilde_einstein;
  if (w.tilde) {
    tilde_lap.push_back({w.lap_tilde, 0, 0});
    tilde_hess = detail::tensor_terms(w.hess_tilde, nullptr);
    tilde_scalar.push_back({w.tilde->scalar(), Expr(-nt), 0});
    tilde_einstein = detail::tensor_terms(w.tilde->ricci(), &w.tilde->metric().components());
  }
  add_eq("tilde_laplacian", "Lap~ f~ = 0", tilde_lap);
  add_eq("tilde_hessian", "Hess~ f~ = 0", tilde_hess);
  add_eq("tilde_scalar", "R~ = lambda n~", tilde_scalar);
  add_eq("tilde_einstein", "Ric~ = lambda g~", tilde_einstein);

  const Geometry fiber(spec.fiber.metric());
  add_eq("fiber_ricci", "Ric_F = 0", detail::tensor_terms(fiber.ricci(), nullptr));

  const Expr warp = simplify(f * w.lap_prime + Expr(d - 1) * w.grad_sq);
  add_eq("warp_scalar", "f Lap' f' + (d-1) |grad f|^2 + lambda f^2 = 0", {{warp, square(f), 0}});
  return rep;
}

/// Lambda for a spec that did not state one: taken from B~ when present,
/// otherwise from the assembled warped metric.
inline LambdaEstimate resolve_lambda(const WarpedSpec& spec, std::size_t samples = 20, std::uint64_t seed = 0) {
  if (spec.lambda) {
    LambdaEstimate e;
    e.lambda = *spec.lambda;
    e.reason = "given";
    return e;
  }
  if (spec.base_tilde) return infer_lambda(*spec.base_tilde, samples, seed);
  return infer_lambda(warped_metric(spec), samples, seed);
}

}  // namespace pndp

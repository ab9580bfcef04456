#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pndp/curvature.hpp"
#include "pndp/metric.hpp"

namespace pndp {

/// Embedding z = xi(r) of a rotationally symmetric slice and its redshift Phi(r).
struct EmbeddingProfile {
  std::string name;
  Expr xi = 0;
  Expr phi = 0;
  std::optional<double> r_throat;
  Interval r_domain{1.0, 5.0};

  [[nodiscard]] Expr xi_prime() const { return simplify(differentiate(xi, "r")); }
  [[nodiscard]] Expr xi_second() const { return simplify(differentiate(xi_prime(), "r")); }
};

inline const Expr& radial() {
  static const Expr r = sym("r");
  return r;
}

/// b(r) = r xi'^2 / (1 + xi'^2)
[[nodiscard]] inline Expr shape_function(const EmbeddingProfile& p) {
  const Expr s = square(p.xi_prime());
  return simplify(radial() * s / (Expr(1) + s));
}

/// rho = xi' xi'' / (r (1 + xi'^2)^2)
[[nodiscard]] inline Expr energy_density(const EmbeddingProfile& p) {
  const Expr d1 = p.xi_prime();
  return simplify(d1 * p.xi_second() / (radial() * square(Expr(1) + square(d1))));
}

/// 1 + xi'^2, the radial component of the reduced metric.
[[nodiscard]] inline Expr embedding_radial_component(const EmbeddingProfile& p) {
  return simplify(Expr(1) + square(p.xi_prime()));
}

/// 1 / (1 - b/r), the Morris-Thorne radial component.
[[nodiscard]] inline Expr morris_thorne_radial_component(const Expr& b) {
  return simplify(reciprocal(Expr(1) - b / radial()));
}

/// b' - b/r
[[nodiscard]] inline Expr flare_b_form(const Expr& b) {
  return simplify(differentiate(b, "r") - b / radial());
}

/// 2 r xi' xi'' / (1 + xi'^2)^2
[[nodiscard]] inline Expr flare_xi_form(const EmbeddingProfile& p) {
  const Expr d1 = p.xi_prime();
  return simplify(Expr(2) * radial() * d1 * p.xi_second() / square(Expr(1) + square(d1)));
}

namespace detail {

inline Chart time_chart_with(std::vector<Coordinate> rest) {
  rest.insert(rest.begin(), Coordinate{"t", {0.0, 1.0}});
  return Chart(std::move(rest));
}

inline std::vector<std::string> fiber_triplet_names(int d) {
  static const char* kNames[] = {"psi", "phi", "sigma", "chi", "eta", "kappa"};
  std::vector<std::string> out;
  for (int i = 0; i < d; ++i) out.push_back(i < 6 ? kNames[i] : "psi" + std::to_string(i + 1));
  return out;
}

}  // namespace detail

/// The lapse -e^{2 Phi} is kept unsimplified in every metric below so that a
/// redshift outside the domain of ln is reported rather than rewritten.

/// -e^{2 Phi(r)} dt^2 + sum dx_i^2 - f^2 sum dpsi_i^2 with r = sqrt(x^2 + y^2).
/// n base coordinates (x, y, z, w, ...) and d fiber coordinates; d defaults to n.
[[nodiscard]] inline Metric pointlike_spacetime(int n, const Expr& phi, std::optional<int> fiber_dim = std::nullopt,
                                                const Expr& f = 1) {
  if (n < 2) throw InvalidArgument("point-like spacetime needs at least two base coordinates");
  const int d = fiber_dim.value_or(n);
  if (d < 1) throw InvalidArgument("fiber dimension must be positive");
  static const char* kBase[] = {"x", "y", "z", "w", "v", "u"};
  if (n > 6) throw InvalidArgument("point-like spacetime supports at most six base coordinates");
  std::vector<Coordinate> coords;
  for (int i = 0; i < n; ++i) coords.push_back({kBase[i], {0.5, 2.0}});
  for (const auto& name : detail::fiber_triplet_names(d)) coords.push_back({name, {-1.0, 1.0}});
  Chart chart = detail::time_chart_with(std::move(coords));
  const Expr rho = sqrt(square(sym("x")) + square(sym("y")));
  const Expr lapse = neg(exp(Expr(2) * substitute(phi, "r", rho)));
  std::vector<Expr> diag{lapse};
  for (int i = 0; i < n; ++i) diag.emplace_back(1);
  const Expr fiber = simplify(neg(square(f)));
  for (int i = 0; i < d; ++i) diag.push_back(fiber);
  return Metric::diagonal(std::move(chart), diag, 1 + n - d);
}

/// -e^{2 Phi} dt^2 + (1 + xi'^2) dr^2 + r^2 dtheta^2
[[nodiscard]] inline Metric cylindrical_reduction(const EmbeddingProfile& p) {
  Chart chart = detail::time_chart_with({{"r", p.r_domain}, {"theta", {0.0, 6.0}}});
  return Metric::diagonal(std::move(chart),
                          {neg(exp(Expr(2) * p.phi)), embedding_radial_component(p), square(radial())});
}

/// The embedding z = sqrt(r^2 - r0^2), throat at r0.
[[nodiscard]] inline EmbeddingProfile catenoid_profile(const Rational& r0 = Rational(1), double r_max = 5.0) {
  EmbeddingProfile p;
  p.name = "sqrt(r^2 - r0^2)";
  p.xi = sqrt(square(radial()) - square(Expr(r0)));
  p.r_throat = r0.to_double();
  p.r_domain = {r0.to_double(), r_max};
  return p;
}

/// The embedding z = r, which has no throat.
[[nodiscard]] inline EmbeddingProfile cone_profile() {
  EmbeddingProfile p;
  p.name = "cone";
  p.xi = radial();
  p.r_domain = {1.0, 5.0};
  return p;
}

/// xi = 4M / (2M/(r - 2M))^{1/2} and Phi = (1/2) ln(2M/r - 1) as stated, or with
/// `alternative_phi` the asymptotically flat Phi = (1/2) ln(1 - 2M/r).
[[nodiscard]] inline EmbeddingProfile schwarzschild_profile(const Rational& M, bool alternative_phi = false) {
  if (!(M.to_double() > 0.0)) throw InvalidArgument("mass must be positive");
  const Expr m(M);
  const Expr& r = radial();
  EmbeddingProfile p;
  p.name = alternative_phi ? "schwarzschild-alt" : "schwarzschild";
  p.xi = Expr(4) * m / pow(Expr(2) * m / (r - Expr(2) * m), Expr(Rational(1, 2)));
  p.phi = alternative_phi ? rational(1, 2) * ln(Expr(1) - Expr(2) * m / r)
                          : rational(1, 2) * ln(Expr(2) * m / r - Expr(1));
  p.r_throat = 2.0 * M.to_double();
  p.r_domain = {2.0 * M.to_double(), 10.0 * M.to_double()};
  return p;
}

/// sqrt(8 M (r - 2M))
[[nodiscard]] inline Expr flamm_embedding(const Rational& M) {
  const Expr m(M);
  return sqrt(Expr(8) * m * (radial() - Expr(2) * m));
}

/// Whether e^{2 Phi} is defined at sampled radii of the profile domain.
struct RedshiftDomain {
  std::size_t points = 0;
  std::size_t undefined = 0;
  [[nodiscard]] bool defined_everywhere() const { return undefined == 0; }
};

[[nodiscard]] inline RedshiftDomain redshift_domain(const EmbeddingProfile& p, std::size_t samples = 50) {
  RedshiftDomain out;
  const Expr lapse = exp(Expr(2) * p.phi);
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = p.r_domain.at((i + 1.0) / static_cast<double>(samples));
    ++out.points;
    try {
      (void)evaluate(lapse, Binding{{"r", r}});
    } catch (const DomainError&) {
      ++out.undefined;
    }
  }
  return out;
}

struct WormholeReport {
  std::string profile;
  Expr b;
  Expr rho;
  double r0 = 0.0;
  Interval r_range;
  std::size_t samples = 0;

  // throat: b(r)/r -> 1 along r0 (1 + 2^-k), k = 4..20
  std::vector<std::pair<double, double>> throat_sequence;  ///< (r_k, b(r_k)/r_k)
  double throat_gap = 0.0;                                 ///< |b/r - 1| at the last evaluable k
  bool xi_prime_diverges = false;
  bool throat_undefined = false;
  bool throat_pass = false;
  double xi_at_throat = 0.0;
  bool xi_at_throat_pass = false;

  // flare-out for r > r0 in both forms
  std::size_t flare_points = 0;
  std::size_t flare_skipped = 0;
  bool flare_b_pass = false;
  bool flare_xi_pass = false;
  double max_b_form = 0.0;   ///< max of b' - b/r
  double max_xi_form = 0.0;  ///< max of xi' xi''
  double max_identity_gap = 0.0;
  double max_morris_thorne_gap = 0.0;
  bool forms_agree = false;
  bool rho_negative = false;

  [[nodiscard]] bool flare_pass() const { return flare_b_pass && flare_xi_pass && forms_agree; }
  [[nodiscard]] bool pass() const { return throat_pass && flare_pass(); }
};

namespace detail {

inline std::optional<double> try_eval(const Expr& e, double r) {
  try {
    return evaluate(e, Binding{{"r", r}});
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Throat and flare-out conditions for a profile with candidate throat r0.
/// Radii r_i = lo + (hi - lo)(i + 1)/N, so the lower end is excluded.
/// With `strict`, a bounded xi' at r0 together with b(r0) != r0 raises
/// ThroatUndefined instead of being recorded in the report.
[[nodiscard]] inline WormholeReport flare_out_check(const EmbeddingProfile& p, double r0, const Interval& r_range,
                                                    std::size_t samples = 100, bool strict = false) {
  if (samples < 10) throw InvalidArgument("flare-out check needs at least 10 samples");
  if (!(r0 > 0.0)) throw InvalidArgument("throat radius must be positive");
  if (!r_range.valid() || r_range.lo < r0) throw InvalidArgument("flare-out range must lie in (r0, infinity)");
  WormholeReport rep;
  rep.profile = p.name;
  rep.b = shape_function(p);
  rep.rho = energy_density(p);
  rep.r0 = r0;
  rep.r_range = r_range;
  rep.samples = samples;

  const Expr d1 = p.xi_prime();
  const Expr ratio = simplify(rep.b / radial());
  std::optional<double> first_slope;
  std::optional<double> last_slope;
  std::optional<double> last_xi;
  for (int k = 4; k <= 20; ++k) {
    const double r = r0 * (1.0 + std::ldexp(1.0, -k));
    if (auto v = detail::try_eval(ratio, r)) {
      rep.throat_sequence.emplace_back(r, *v);
      rep.throat_gap = std::fabs(*v - 1.0);
    }
    if (auto s = detail::try_eval(d1, r)) {
      if (!first_slope) first_slope = std::fabs(*s);
      last_slope = std::fabs(*s);
    }
    if (auto z = detail::try_eval(p.xi, r)) last_xi = *z;
  }
  rep.xi_prime_diverges = first_slope && last_slope && *last_slope > 16.0 * (1.0 + *first_slope);
  rep.throat_pass = !rep.throat_sequence.empty() && rep.throat_gap < 1e-4;
  rep.throat_undefined = !rep.xi_prime_diverges && !rep.throat_pass;
  if (rep.throat_undefined && strict) {
    throw ThroatUndefined("xi' stays bounded at r0 and b(r0) != r0");
  }
  if (auto z = detail::try_eval(p.xi, r0)) {
    rep.xi_at_throat = *z;
  } else if (last_xi) {
    rep.xi_at_throat = *last_xi;
  } else {
    rep.xi_at_throat = std::nan("");
  }
  rep.xi_at_throat_pass = std::fabs(rep.xi_at_throat) <= 1e-2 * (1.0 + r0);

  const Expr bform = flare_b_form(rep.b);
  const Expr xform = flare_xi_form(p);
  const Expr slope_product = simplify(d1 * p.xi_second());
  const Expr mt_lhs = embedding_radial_component(p);
  const Expr mt_rhs = morris_thorne_radial_component(rep.b);
  rep.max_b_form = -std::numeric_limits<double>::infinity();
  rep.max_xi_form = -std::numeric_limits<double>::infinity();
  bool rho_negative = true;
  bool signs_agree = true;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = r_range.lo + r_range.length() * static_cast<double>(i + 1) / static_cast<double>(samples);
    const auto vb = detail::try_eval(bform, r);
    const auto vx = detail::try_eval(xform, r);
    const auto vp = detail::try_eval(slope_product, r);
    const auto vr = detail::try_eval(rep.rho, r);
    const auto m1 = detail::try_eval(mt_lhs, r);
    const auto m2 = detail::try_eval(mt_rhs, r);
    if (!vb || !vx || !vp || !vr || !m1 || !m2) {
      ++rep.flare_skipped;
      continue;
    }
    ++rep.flare_points;
    rep.max_b_form = std::max(rep.max_b_form, *vb);
    rep.max_xi_form = std::max(rep.max_xi_form, *vp);
    rep.max_identity_gap = std::max(rep.max_identity_gap, relative_gap(*vb, *vx));
    rep.max_morris_thorne_gap = std::max(rep.max_morris_thorne_gap, relative_gap(*m1, *m2));
    if ((*vb < 0.0) != (*vp < 0.0)) signs_agree = false;
    if (!(*vr < 0.0)) rho_negative = false;
  }
  const bool complete = rep.flare_points == samples;
  rep.flare_b_pass = complete && rep.max_b_form < 0.0;
  rep.flare_xi_pass = complete && rep.max_xi_form < 0.0;
  rep.forms_agree = complete && signs_agree && rep.max_identity_gap <= 1e-9;
  rep.rho_negative = complete && rho_negative;
  return rep;
}

/// -e^{2 Phi} dt^2 + dr^2 / (1 - b/r) + r^2 (dtheta^2 + sin^2 theta dzeta^2) - f^2 (dpsi^2 + dphi^2 + dsigma^2)
struct GrapheneParams {
  Expr b = 0;
  Expr phi = 0;
  Expr f = 1;
  Interval r_range{2.5, 10.0};
  int fiber_dim = 3;
};

[[nodiscard]] inline Metric graphene_wormhole_metric(const GrapheneParams& p) {
  const Expr& r = radial();
  const Expr radial_factor = simplify(Expr(1) - p.b / r);
  for (std::size_t i = 0; i <= 20; ++i) {
    const double rv = p.r_range.at(static_cast<double>(i) / 20.0);
    if (!(evaluate(radial_factor, Binding{{"r", rv}}) > 0.0)) {
      throw DomainError("1 - b/r must stay positive on the radial range");
    }
  }
  std::vector<Coordinate> coords{{"r", p.r_range}, {"theta", {0.3, 2.8}}, {"zeta", {0.0, 6.0}}};
  for (const auto& name : detail::fiber_triplet_names(p.fiber_dim)) coords.push_back({name, {-1.0, 1.0}});
  Chart chart = detail::time_chart_with(std::move(coords));
  std::vector<Expr> diag{neg(exp(Expr(2) * p.phi)), simplify(reciprocal(radial_factor)), square(r),
                         simplify(square(r) * square(sin(sym("theta"))))};
  const Expr fiber = simplify(neg(square(p.f)));
  for (int i = 0; i < p.fiber_dim; ++i) diag.push_back(fiber);
  return Metric::diagonal(std::move(chart), diag, 1 + 3 - p.fiber_dim);
}

/// Two-column (r, xi(r)) text table with a '#' header; undefined points are omitted.
[[nodiscard]] inline std::string embedding_table(const EmbeddingProfile& p, std::size_t points = 50) {
  std::string out = "# profile: " + p.name + "\n# r\txi(r)\n";
  char buf[96];
  for (std::size_t i = 0; i < points; ++i) {
    const double r = p.r_domain.at(static_cast<double>(i + 1) / static_cast<double>(points));
    if (auto z = detail::try_eval(p.xi, r)) {
      std::snprintf(buf, sizeof buf, "%.10g\t%.10g\n", r, *z);
      out += buf;
    }
  }
  return out;
}

}  // namespace pndp

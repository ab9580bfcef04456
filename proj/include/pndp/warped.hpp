#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pndp/curvature.hpp"
#include "pndp/metric.hpp"

namespace pndp {

/// Flat R^d with an obstruction bundle of rank `obstruction_rank` on top.
/// Only the underlying R^d carries geometry; the rank enters the virtual
/// dimension d - rank.
struct DerivedFiber {
  int underlying_dim = 0;
  int obstruction_rank = 0;
  Chart chart;
  int sign = -1;  ///< fiber metric is sign * delta

  [[nodiscard]] int virtual_dim() const { return underlying_dim - obstruction_rank; }
  [[nodiscard]] bool is_pndp() const { return obstruction_rank == 2 * underlying_dim; }

  /// <v, w> = sign * sum v^i w^i
  [[nodiscard]] double inner(const std::vector<double>& v, const std::vector<double>& w) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size() && i < w.size(); ++i) s += v[i] * w[i];
    return sign * s;
  }

  [[nodiscard]] Metric metric() const {
    return Metric::diagonal(chart, std::vector<Expr>(chart.size(), Expr(sign)), virtual_dim());
  }
};

inline std::vector<std::string> default_fiber_names(int d) {
  std::vector<std::string> out;
  for (int i = 1; i <= d; ++i) out.push_back("psi" + std::to_string(i));
  return out;
}

inline DerivedFiber derived_fiber(int d, int rank_e, std::vector<std::string> names = {}, int sign = -1) {
  if (d < 1) throw InvalidArgument("fiber dimension must be positive");
  if (rank_e <= d) {
    throw RankTooSmall("obstruction rank " + std::to_string(rank_e) + " must exceed the fiber dimension " +
                       std::to_string(d));
  }
  if (sign != 1 && sign != -1) throw InvalidArgument("fiber sign must be +1 or -1");
  if (names.empty()) names = default_fiber_names(d);
  if (static_cast<int>(names.size()) != d) throw InvalidArgument("fiber needs exactly d coordinate names");
  std::vector<Coordinate> coords;
  for (auto& n : names) coords.push_back({std::move(n), {-1.0, 1.0}});
  return DerivedFiber{d, rank_e, Chart(std::move(coords)), sign};
}

/// Block-diagonal metric on the concatenated chart.
inline Metric product_metric(const std::vector<Metric>& factors) {
  if (factors.empty()) throw InvalidArgument("product needs at least one factor");
  std::vector<const Chart*> charts;
  int vdim = 0;
  std::size_t n = 0;
  for (const auto& f : factors) {
    charts.push_back(&f.chart());
    vdim += f.virtual_dim();
    n += f.dim();
  }
  Chart chart = Chart::concat(charts);
  ExprMatrix g(n, n);
  std::size_t off = 0;
  for (const auto& f : factors) {
    for (std::size_t i = 0; i < f.dim(); ++i) {
      for (std::size_t j = 0; j < f.dim(); ++j) g(off + i, off + j) = f(i, j);
    }
    off += f.dim();
  }
  return Metric(std::move(chart), std::move(g), vdim);
}

/// Base B = B' x B~, derived fiber F and warping function f = f' + f~.
struct WarpedSpec {
  std::optional<Metric> base_prime;
  std::optional<Metric> base_tilde;
  DerivedFiber fiber;
  Expr f_prime = 1;
  Expr f_tilde = 0;
  std::optional<double> lambda;
  std::string tilde_label = "B~";  ///< how the B~ factor is named in projection targets

  [[nodiscard]] int n_prime() const { return base_prime ? base_prime->geometric_dim() : 0; }
  [[nodiscard]] int n_tilde() const { return base_tilde ? base_tilde->geometric_dim() : 0; }
  [[nodiscard]] int n() const { return n_prime() + n_tilde(); }
  [[nodiscard]] int d() const { return fiber.underlying_dim; }
  [[nodiscard]] int m() const { return fiber.virtual_dim(); }
  [[nodiscard]] Expr f() const { return simplify(f_prime + f_tilde); }

  [[nodiscard]] std::vector<Metric> base_factors() const {
    std::vector<Metric> out;
    if (base_prime) out.push_back(*base_prime);
    if (base_tilde) out.push_back(*base_tilde);
    return out;
  }

  [[nodiscard]] Domain base_domain() const {
    Domain d;
    if (base_prime) d.merge(base_prime->chart().domain());
    if (base_tilde) d.merge(base_tilde->chart().domain());
    return d;
  }
};

namespace detail {

inline void check_warp_symbols(const Expr& f, const std::optional<Metric>& factor, const char* which) {
  for (const auto& s : free_symbols(f)) {
    if (!factor || !factor->chart().contains(s)) {
      throw ForeignWarpSymbol(std::string(which) + " uses symbol '" + s + "' outside its own factor chart");
    }
  }
}

}  // namespace detail

/// Checks disjoint charts, the f = f' + f~ split and f > 0 at sampled base points.
inline void validate(const WarpedSpec& spec, std::size_t samples = 16, std::uint64_t seed = 0) {
  if (!spec.base_prime && !spec.base_tilde) throw InvalidArgument("warped product needs a base factor");
  std::vector<const Chart*> charts;
  if (spec.base_prime) charts.push_back(&spec.base_prime->chart());
  if (spec.base_tilde) charts.push_back(&spec.base_tilde->chart());
  charts.push_back(&spec.fiber.chart);
  (void)Chart::concat(charts);
  detail::check_warp_symbols(spec.f_prime, spec.base_prime, "f'");
  detail::check_warp_symbols(spec.f_tilde, spec.base_tilde, "f~");
  const Expr f = spec.f();
  const Domain domain = spec.base_domain();
  std::vector<Binding> points{domain.midpoint()};
  SampleRng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) points.push_back(domain.draw(rng));
  for (const auto& p : points) {
    double v = 0.0;
    try {
      v = evaluate(f, p);
    } catch (const DomainError&) {
      throw NonPositiveWarp("warping function is undefined at a sampled base point");
    }
    if (!(v > 0.0)) throw NonPositiveWarp("warping function is not positive at a sampled base point");
  }
}

inline Metric base_metric(const WarpedSpec& spec) { return product_metric(spec.base_factors()); }

/// g_B' + g_B~ + f^2 * sign * delta on [B' coords, B~ coords, fiber coords].
inline Metric warped_metric(const WarpedSpec& spec) {
  validate(spec);
  const std::vector<Metric> factors = spec.base_factors();
  std::vector<const Chart*> charts;
  for (const auto& f : factors) charts.push_back(&f.chart());
  charts.push_back(&spec.fiber.chart);
  Chart chart = Chart::concat(charts);
  const std::size_t n = static_cast<std::size_t>(spec.n());
  const std::size_t total = chart.size();
  ExprMatrix g(total, total);
  std::size_t off = 0;
  for (const auto& f : factors) {
    for (std::size_t i = 0; i < f.dim(); ++i) {
      for (std::size_t j = 0; j < f.dim(); ++j) g(off + i, off + j) = f(i, j);
    }
    off += f.dim();
  }
  const Expr fiber_entry = simplify(Expr(spec.fiber.sign) * square(spec.f()));
  for (std::size_t k = n; k < total; ++k) g(k, k) = fiber_entry;
  return Metric(std::move(chart), std::move(g), spec.n() + spec.m());
}

/// The five Ricci blocks of the warped product, built from factor data only.
///   (B',B')  Ric' - (d/f) Hess' f'
///   (B~,B~)  Ric~
///   (F,F)    Ric_F - f^2 g_F f*,   f* = Lap' f' / f + (d-1) |grad f|^2 / f^2
///   (B',B~) and (B,F) vanish.
/// These hold when Hess~ f~ = 0; `tilde_hessian_vanishes` records whether that
/// was observed structurally.
struct BlockRicci {
  ExprMatrix prime;
  ExprMatrix tilde;
  ExprMatrix fiber;
  ExprMatrix prime_tilde;
  ExprMatrix base_fiber;
  Expr f_star;
  bool tilde_hessian_vanishes = true;

  [[nodiscard]] ExprMatrix assemble() const {
    const std::size_t np = prime.rows();
    const std::size_t nt = tilde.rows();
    const std::size_t d = fiber.rows();
    const std::size_t total = np + nt + d;
    ExprMatrix out(total, total);
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t j = 0; j < np; ++j) out(i, j) = prime(i, j);
    }
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j < nt; ++j) out(np + i, np + j) = tilde(i, j);
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) out(np + nt + i, np + nt + j) = fiber(i, j);
    }
    return out;
  }
};

/// Scalar ingredients of the block formulas, shared with the Einstein checks.
struct WarpData {
  std::optional<Geometry> prime;
  std::optional<Geometry> tilde;
  Expr f;
  ExprMatrix hess_prime;   ///< Hess' f'
  ExprMatrix hess_tilde;   ///< Hess~ f~
  Expr lap_prime = 0;      ///< Lap' f'
  Expr lap_tilde = 0;      ///< Lap~ f~
  Expr grad_sq = 0;        ///< |grad' f'|^2 + |grad~ f~|^2

  explicit WarpData(const WarpedSpec& spec) : f(spec.f()) {
    if (spec.base_prime) {
      prime.emplace(*spec.base_prime);
      hess_prime = prime->hessian(spec.f_prime);
      lap_prime = prime->trace(hess_prime);
    }
    if (spec.base_tilde) {
      tilde.emplace(*spec.base_tilde);
      hess_tilde = tilde->hessian(spec.f_tilde);
      lap_tilde = tilde->trace(hess_tilde);
    }
    std::vector<Expr> g;
    if (prime) g.push_back(prime->gradient_norm_sq(spec.f_prime));
    if (tilde) g.push_back(tilde->gradient_norm_sq(spec.f_tilde));
    grad_sq = simplify(add(std::move(g)));
  }
};

inline BlockRicci block_ricci(const WarpedSpec& spec) {
  validate(spec);
  const int d = spec.d();
  if (d < 2) throw UnsupportedFiberDim("block Ricci needs fiber dimension at least 2");
  const WarpData w(spec);
  BlockRicci out;
  const std::size_t np = static_cast<std::size_t>(spec.n_prime());
  const std::size_t nt = static_cast<std::size_t>(spec.n_tilde());
  const std::size_t nd = static_cast<std::size_t>(d);
  out.prime = ExprMatrix(np, np);
  if (w.prime) {
    const Expr coeff = simplify(Expr(d) / w.f);
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t j = 0; j < np; ++j) {
        out.prime(i, j) = simplify(w.prime->ricci()(i, j) - coeff * w.hess_prime(i, j));
      }
    }
  }
  out.tilde = w.tilde ? w.tilde->ricci() : ExprMatrix(0, 0);
  out.tilde_hessian_vanishes = !w.tilde || w.hess_tilde.is_structurally_zero();
  out.f_star = simplify(w.lap_prime / w.f + Expr(d - 1) * w.grad_sq / square(w.f));
  out.fiber = ExprMatrix(nd, nd);
  // the fiber is flat, so its own Ricci contributes nothing
  const Expr diag = simplify(neg(square(w.f) * Expr(spec.fiber.sign) * out.f_star));
  for (std::size_t k = 0; k < nd; ++k) out.fiber(k, k) = diag;
  out.prime_tilde = ExprMatrix(np, nt);
  out.base_fiber = ExprMatrix(np + nt, nd);
  return out;
}

/// Sampled comparison of block_ricci against the Ricci tensor of the
/// assembled warped metric.
struct BlockComparison {
  std::size_t valid_points = 0;
  double max_gap_prime = 0.0;
  double max_gap_tilde = 0.0;
  double max_gap_fiber = 0.0;
  double max_gap_fiber_flipped = 0.0;  ///< same, against the negated fiber block
  double max_abs_mixed = 0.0;
  bool tilde_hessian_vanishes = true;

  [[nodiscard]] double max_gap() const { return std::max({max_gap_prime, max_gap_tilde, max_gap_fiber}); }
  [[nodiscard]] bool agrees(double tol, double mixed_tol) const {
    return valid_points > 0 && max_gap() <= tol && max_abs_mixed <= mixed_tol;
  }
  /// The fiber block matches only after a sign flip.
  [[nodiscard]] bool fiber_sign_discrepancy(double tol) const {
    return max_gap_fiber > tol && max_gap_fiber_flipped <= tol;
  }
};

inline BlockComparison compare_block_ricci(const WarpedSpec& spec, std::size_t samples = 50,
                                           std::uint64_t seed = 0) {
  const BlockRicci blocks = block_ricci(spec);
  const ExprMatrix formula = blocks.assemble();
  const Geometry direct(warped_metric(spec));
  const std::size_t np = static_cast<std::size_t>(spec.n_prime());
  const std::size_t nb = static_cast<std::size_t>(spec.n());
  const std::size_t total = direct.dim();
  BlockComparison out;
  out.tilde_hessian_vanishes = blocks.tilde_hessian_vanishes;
  const Domain domain = direct.metric().chart().domain();
  SampleRng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Binding at = domain.draw(rng);
    Eigen::MatrixXd ric;
    Eigen::MatrixXd ref;
    try {
      ric = direct.ricci().evaluate(at);
      ref = formula.evaluate(at);
    } catch (const DomainError&) {
      continue;
    }
    ++out.valid_points;
    for (std::size_t i = 0; i < total; ++i) {
      for (std::size_t j = 0; j < total; ++j) {
        const auto block = [&](std::size_t k) { return k < np ? 0 : (k < nb ? 1 : 2); };
        const int bi = block(i);
        const int bj = block(j);
        if (bi != bj) {
          out.max_abs_mixed = std::max(out.max_abs_mixed, std::fabs(ric(i, j)));
          continue;
        }
        const double gap = relative_gap(ric(i, j), ref(i, j));
        if (bi == 0) out.max_gap_prime = std::max(out.max_gap_prime, gap);
        if (bi == 1) out.max_gap_tilde = std::max(out.max_gap_tilde, gap);
        if (bi == 2) {
          out.max_gap_fiber = std::max(out.max_gap_fiber, gap);
          out.max_gap_fiber_flipped = std::max(out.max_gap_fiber_flipped, relative_gap(ric(i, j), -ref(i, j)));
        }
      }
    }
  }
  return out;
}

}  // namespace pndp

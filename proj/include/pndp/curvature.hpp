#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pndp/metric.hpp"

namespace pndp {

/// Christoffel symbols of the second kind, indexed (k, i, j) for Γ^k_ij.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(std::size_t n) : n_(n), data_(n * n * n, Expr(0)) {}
  [[nodiscard]] std::size_t dim() const { return n_; }
  Expr& operator()(std::size_t k, std::size_t i, std::size_t j) { return data_[(k * n_ + i) * n_ + j]; }
  const Expr& operator()(std::size_t k, std::size_t i, std::size_t j) const { return data_[(k * n_ + i) * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<Expr> data_;
};

/// Riemann tensor R^l_ijk, indexed (l, i, j, k).
class Riemann {
 public:
  Riemann() = default;
  explicit Riemann(std::size_t n) : n_(n), data_(n * n * n * n, Expr(0)) {}
  [[nodiscard]] std::size_t dim() const { return n_; }
  Expr& operator()(std::size_t l, std::size_t i, std::size_t j, std::size_t k) {
    return data_[((l * n_ + i) * n_ + j) * n_ + k];
  }
  const Expr& operator()(std::size_t l, std::size_t i, std::size_t j, std::size_t k) const {
    return data_[((l * n_ + i) * n_ + j) * n_ + k];
  }

 private:
  std::size_t n_ = 0;
  std::vector<Expr> data_;
};

struct CurvatureBundle {
  Christoffel christoffel;
  Riemann riemann;
  ExprMatrix ricci;
  Expr scalar;
};

/// Levi-Civita connection and curvature of one metric.
///
/// The inverse metric, Christoffel symbols and Ricci tensor are built in the
/// constructor; the full Riemann tensor is only assembled on request.
/// Conventions:
///   Γ^k_ij   = 1/2 g^{kl} (∂_i g_jl + ∂_j g_il - ∂_l g_ij)
///   R^l_ijk  = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik
///   Ric_jk   = R^i_ijk,   R = g^{jk} Ric_jk
/// so the unit sphere has Ric = g.
class Geometry {
 public:
  explicit Geometry(Metric metric) : g_(std::move(metric)) {
    const std::size_t n = g_.dim();
    names_ = g_.chart().names();
    inverse_ = inverse_metric(g_);
    build_christoffel(n);
    build_ricci(n);
  }

  [[nodiscard]] const Metric& metric() const { return g_; }
  [[nodiscard]] std::size_t dim() const { return g_.dim(); }
  [[nodiscard]] const ExprMatrix& inverse() const { return inverse_; }
  [[nodiscard]] const Christoffel& christoffel() const { return gamma_; }
  [[nodiscard]] const ExprMatrix& ricci() const { return ricci_; }
  [[nodiscard]] const Expr& scalar() const { return scalar_; }

  [[nodiscard]] Riemann riemann() const {
    const std::size_t n = dim();
    Riemann out(n);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < n; ++k) {
            std::vector<Expr> terms{differentiate(gamma_(l, j, k), names_[i]),
                                    neg(differentiate(gamma_(l, i, k), names_[j]))};
            for (std::size_t m = 0; m < n; ++m) {
              terms.push_back(gamma_(l, i, m) * gamma_(m, j, k));
              terms.push_back(neg(gamma_(l, j, m) * gamma_(m, i, k)));
            }
            out(l, i, j, k) = simplify(add(std::move(terms)));
          }
        }
      }
    }
    return out;
  }

  [[nodiscard]] CurvatureBundle bundle() const { return {gamma_, riemann(), ricci_, scalar_}; }

  /// Covariant Hessian (∇²f)_ij = ∂_i ∂_j f - Γ^k_ij ∂_k f.
  [[nodiscard]] ExprMatrix hessian(const Expr& f) const {
    check_function(f);
    const std::size_t n = dim();
    std::vector<Expr> df(n);
    for (std::size_t k = 0; k < n; ++k) df[k] = simplify(differentiate(f, names_[k]));
    ExprMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::vector<Expr> terms{differentiate(df[j], names_[i])};
        for (std::size_t k = 0; k < n; ++k) terms.push_back(neg(gamma_(k, i, j) * df[k]));
        h(i, j) = simplify(add(std::move(terms)));
        h(j, i) = h(i, j);
      }
    }
    return h;
  }

  /// |∇f|² = g^{ij} ∂_i f ∂_j f.
  [[nodiscard]] Expr gradient_norm_sq(const Expr& f) const {
    check_function(f);
    const std::size_t n = dim();
    std::vector<Expr> df(n);
    for (std::size_t k = 0; k < n; ++k) df[k] = simplify(differentiate(f, names_[k]));
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) terms.push_back(inverse_(i, j) * df[i] * df[j]);
    }
    return simplify(add(std::move(terms)));
  }

  /// Δf = g^{ij} (∇²f)_ij, positive on x² in flat space.
  [[nodiscard]] Expr laplacian(const Expr& f) const { return trace(hessian(f)); }

  /// g^{ij} T_ij for a covariant 2-tensor.
  [[nodiscard]] Expr trace(const ExprMatrix& t) const {
    const std::size_t n = dim();
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) terms.push_back(inverse_(i, j) * t(i, j));
    }
    return simplify(add(std::move(terms)));
  }

 private:
  void check_function(const Expr& f) const {
    for (const auto& s : free_symbols(f)) {
      if (!g_.chart().contains(s)) {
        throw InvalidArgument("function uses symbol '" + s + "' that is not a chart coordinate");
      }
    }
  }

  void build_christoffel(std::size_t n) {
    // dg[l][i][j] = ∂_l g_ij
    std::vector<Expr> dg(n * n * n, Expr(0));
    auto d = [&](std::size_t l, std::size_t i, std::size_t j) -> Expr& { return dg[(l * n + i) * n + j]; };
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d(l, i, j) = simplify(differentiate(g_(i, j), names_[l]));
      }
    }
    gamma_ = Christoffel(n);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          std::vector<Expr> terms;
          for (std::size_t l = 0; l < n; ++l) {
            if (inverse_(k, l).is_zero()) continue;
            Expr lowered = add({d(i, j, l), d(j, i, l), neg(d(l, i, j))});
            if (lowered.is_zero()) continue;
            terms.push_back(mul({rational(1, 2), inverse_(k, l), lowered}));
          }
          gamma_(k, i, j) = simplify(add(std::move(terms)));
          gamma_(k, j, i) = gamma_(k, i, j);
        }
      }
    }
  }

  void build_ricci(std::size_t n) {
    // contracted[k] = Γ^i_ik
    std::vector<Expr> contracted(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n; ++i) terms.push_back(gamma_(i, i, k));
      contracted[k] = simplify(add(std::move(terms)));
    }
    ricci_ = ExprMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < n; ++i) terms.push_back(differentiate(gamma_(i, j, k), names_[i]));
        terms.push_back(neg(differentiate(contracted[k], names_[j])));
        for (std::size_t m = 0; m < n; ++m) {
          terms.push_back(contracted[m] * gamma_(m, j, k));
          for (std::size_t i = 0; i < n; ++i) terms.push_back(neg(gamma_(i, j, m) * gamma_(m, i, k)));
        }
        ricci_(j, k) = simplify(add(std::move(terms)));
      }
    }
    scalar_ = trace(ricci_);
  }

  Metric g_;
  std::vector<std::string> names_;
  ExprMatrix inverse_;
  Christoffel gamma_;
  ExprMatrix ricci_;
  Expr scalar_;
};

[[nodiscard]] inline Christoffel christoffel(const Metric& g) { return Geometry(g).christoffel(); }
[[nodiscard]] inline Riemann riemann(const Metric& g) { return Geometry(g).riemann(); }
[[nodiscard]] inline ExprMatrix ricci(const Metric& g) { return Geometry(g).ricci(); }
[[nodiscard]] inline Expr scalar_curvature(const Metric& g) { return Geometry(g).scalar(); }
[[nodiscard]] inline CurvatureBundle curvature(const Metric& g) { return Geometry(g).bundle(); }
[[nodiscard]] inline ExprMatrix hessian(const Metric& g, const Expr& f) { return Geometry(g).hessian(f); }
[[nodiscard]] inline Expr gradient_norm_sq(const Metric& g, const Expr& f) { return Geometry(g).gradient_norm_sq(f); }
[[nodiscard]] inline Expr laplacian(const Metric& g, const Expr& f) { return Geometry(g).laplacian(f); }

}  // namespace pndp

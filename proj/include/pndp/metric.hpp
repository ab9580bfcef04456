#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pndp/error.hpp"
#include "pndp/symexpr.hpp"

namespace pndp {

/// Largest chart handled. Inverses are taken block by block, so the
/// exponential adjugate cost only applies to coupled blocks (kMaxCoupledBlock).
inline constexpr std::size_t kMaxChartDim = 12;
inline constexpr std::size_t kMaxCoupledBlock = 8;

struct Coordinate {
  std::string name;
  Interval range;
};

/// Ordered coordinate names with the interval each one is sampled from.
class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
    std::set<std::string> seen;
    for (const auto& c : coords_) {
      if (!detail::valid_symbol_name(c.name)) throw InvalidChart("invalid coordinate name '" + c.name + "'");
      if (!seen.insert(c.name).second) throw InvalidChart("duplicate coordinate '" + c.name + "'");
      if (!c.range.valid()) throw InvalidChart("coordinate '" + c.name + "' needs a finite interval of positive length");
    }
  }

  [[nodiscard]] std::size_t size() const { return coords_.size(); }
  [[nodiscard]] bool empty() const { return coords_.empty(); }
  [[nodiscard]] const std::vector<Coordinate>& coordinates() const { return coords_; }
  [[nodiscard]] const Coordinate& operator[](std::size_t i) const { return coords_[i]; }
  [[nodiscard]] const std::string& name(std::size_t i) const { return coords_[i].name; }

  [[nodiscard]] std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) out.push_back(c.name);
    return out;
  }

  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i].name == name) return i;
    }
    return std::nullopt;
  }

  [[nodiscard]] bool contains(std::string_view name) const { return index_of(name).has_value(); }

  [[nodiscard]] Domain domain() const {
    Domain d;
    for (const auto& c : coords_) d.set(c.name, c.range);
    return d;
  }

  /// Concatenation; throws SymbolCollision when the charts share a name.
  [[nodiscard]] static Chart concat(const std::vector<const Chart*>& parts) {
    std::vector<Coordinate> all;
    std::set<std::string> seen;
    for (const auto* p : parts) {
      for (const auto& c : p->coords_) {
        if (!seen.insert(c.name).second) throw SymbolCollision("coordinate '" + c.name + "' appears in two factors");
        all.push_back(c);
      }
    }
    return Chart(std::move(all));
  }

 private:
  std::vector<Coordinate> coords_;
};

/// Dense row-major matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Expr(0)) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  Expr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] bool is_structurally_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Expr& e) { return e.is_zero(); });
  }

  [[nodiscard]] Eigen::MatrixXd evaluate(const Binding& b) const {
    Eigen::MatrixXd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = pndp::evaluate((*this)(i, j), b);
    }
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Expr> data_;
};

struct MetricChecks {
  std::size_t samples = 8;
  std::uint64_t seed = 0;
};

/// A (pseudo-)Riemannian metric on a coordinate chart.
///
/// Construction validates symmetry, the chart size limit and numeric
/// nondegeneracy at sampled chart points, and infers the signature at the
/// domain midpoint. `virtual_dim` differs from the geometric dimension only
/// when a derived fiber is part of the metric.
class Metric {
 public:
  Metric(Chart chart, ExprMatrix components, std::optional<int> virtual_dim = std::nullopt,
         MetricChecks checks = {})
      : chart_(std::move(chart)), g_(std::move(components)) {
    const std::size_t n = chart_.size();
    if (n == 0) throw InvalidChart("metric needs at least one coordinate");
    if (n > kMaxChartDim) {
      throw InvalidChart("chart has " + std::to_string(n) + " coordinates; the limit is " +
                         std::to_string(kMaxChartDim));
    }
    if (g_.rows() != n || g_.cols() != n) throw InvalidArgument("metric components must be an n x n matrix");
    virtual_dim_ = virtual_dim.value_or(static_cast<int>(n));
    if (virtual_dim_ > static_cast<int>(n)) throw InvalidArgument("virtual dimension exceeds geometric dimension");
    check_symbols();
    check_symmetry(checks);
    check_nondegenerate_and_sign(checks);
  }

  static Metric diagonal(Chart chart, const std::vector<Expr>& diag, std::optional<int> virtual_dim = std::nullopt) {
    ExprMatrix g(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) g(i, i) = diag[i];
    return Metric(std::move(chart), std::move(g), virtual_dim);
  }

  [[nodiscard]] const Chart& chart() const { return chart_; }
  [[nodiscard]] const ExprMatrix& components() const { return g_; }
  [[nodiscard]] const Expr& operator()(std::size_t i, std::size_t j) const { return g_(i, j); }
  [[nodiscard]] std::size_t dim() const { return chart_.size(); }
  [[nodiscard]] int geometric_dim() const { return static_cast<int>(chart_.size()); }
  [[nodiscard]] int virtual_dim() const { return virtual_dim_; }
  /// Eigenvalue signs at the reference point, ascending.
  [[nodiscard]] const std::vector<int>& signature() const { return signature_; }
  [[nodiscard]] int negative_directions() const {
    return static_cast<int>(std::count(signature_.begin(), signature_.end(), -1));
  }

  [[nodiscard]] Metric with_virtual_dim(int virtual_dim) const {
    Metric copy = *this;
    if (virtual_dim > geometric_dim()) throw InvalidArgument("virtual dimension exceeds geometric dimension");
    copy.virtual_dim_ = virtual_dim;
    return copy;
  }

  [[nodiscard]] bool is_diagonal() const {
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t j = 0; j < dim(); ++j) {
        if (i != j && !g_(i, j).is_zero()) return false;
      }
    }
    return true;
  }

 private:
  void check_symbols() const {
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t j = 0; j < dim(); ++j) {
        for (const auto& s : free_symbols(g_(i, j))) {
          if (!chart_.contains(s)) {
            throw UnboundSymbol("metric component (" + std::to_string(i) + "," + std::to_string(j) +
                                ") uses symbol '" + s + "' that is not a chart coordinate");
          }
        }
      }
    }
  }

  void check_symmetry(const MetricChecks& checks) const {
    const Domain domain = chart_.domain();
    for (std::size_t i = 0; i < dim(); ++i) {
      for (std::size_t j = i + 1; j < dim(); ++j) {
        if (g_(i, j) == g_(j, i)) continue;
        bool same = false;
        try {
          same = equivalent(g_(i, j), g_(j, i), domain, std::max<std::size_t>(checks.samples, 8), 1e-12, checks.seed);
        } catch (const NoValidSamples&) {
        }
        if (!same) {
          throw AsymmetricMetric("metric components (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") and its transpose differ");
        }
      }
    }
  }

  void check_nondegenerate_and_sign(const MetricChecks& checks) {
    const Domain domain = chart_.domain();
    std::vector<Binding> points{domain.midpoint()};
    SampleRng rng(checks.seed);
    for (std::size_t s = 0; s < checks.samples; ++s) points.push_back(domain.draw(rng));
    bool have_reference = false;
    for (const auto& p : points) {
      Eigen::MatrixXd m;
      try {
        m = g_.evaluate(p);
      } catch (const DomainError&) {
        continue;
      }
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
      const auto& ev = eig.eigenvalues();
      const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
      if (ev.cwiseAbs().minCoeff() <= 1e-12 * scale) {
        throw DegenerateMetric("metric is degenerate at a sampled chart point");
      }
      if (!have_reference) {
        signature_.clear();
        for (Eigen::Index k = 0; k < ev.size(); ++k) signature_.push_back(ev(k) < 0 ? -1 : 1);
        have_reference = true;
      }
    }
    if (!have_reference) throw DomainError("metric components are undefined at every sampled chart point");
  }

  Chart chart_;
  ExprMatrix g_;
  int virtual_dim_ = 0;
  std::vector<int> signature_;
};

namespace detail {

/// Determinant of the square submatrix with the given rows and columns by
/// Laplace expansion along rows, memoized on the remaining column set.
class MinorDeterminant {
 public:
  MinorDeterminant(const ExprMatrix& m, std::vector<std::size_t> rows, std::vector<std::size_t> cols)
      : m_(m), rows_(std::move(rows)), cols_(std::move(cols)) {}

  Expr operator()() { return expand(0, (std::uint32_t{1} << cols_.size()) - 1); }

 private:
  Expr expand(std::size_t row, std::uint32_t mask) {
    if (mask == 0) return Expr(1);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    std::vector<Expr> terms;
    int sign = 1;
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (!(mask & (std::uint32_t{1} << c))) continue;
      const Expr& entry = m_(rows_[row], cols_[c]);
      if (!entry.is_zero()) {
        Expr sub = expand(row + 1, mask & ~(std::uint32_t{1} << c));
        if (!sub.is_zero()) terms.push_back(mul({Expr(sign), entry, sub}));
      }
      sign = -sign;
    }
    Expr det = simplify(add(std::move(terms)));
    memo_.emplace(mask, det);
    return det;
  }

  const ExprMatrix& m_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::map<std::uint32_t, Expr> memo_;
};

/// Groups indices into blocks coupled by structurally nonzero entries.
inline std::vector<std::vector<std::size_t>> coupled_blocks(const ExprMatrix& g) {
  const std::size_t n = g.rows();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!g(i, j).is_zero() || !g(j, i).is_zero()) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Symbolic determinant (product of block determinants).
[[nodiscard]] inline Expr determinant(const Metric& g) {
  std::vector<Expr> factors;
  for (const auto& block : detail::coupled_blocks(g.components())) {
    factors.push_back(detail::MinorDeterminant(g.components(), block, block)());
  }
  return simplify(mul(std::move(factors)));
}

/// Symbolic inverse metric g^{ij} via adjugate / determinant, computed
/// independently on each block of mutually coupled coordinates.
[[nodiscard]] inline ExprMatrix inverse_metric(const Metric& g) {
  const std::size_t n = g.dim();
  const ExprMatrix& m = g.components();
  ExprMatrix inv(n, n);
  for (const auto& block : detail::coupled_blocks(m)) {
    if (block.size() > kMaxCoupledBlock) {
      throw InvalidChart("coupled metric block of size " + std::to_string(block.size()) + " exceeds the limit of " +
                         std::to_string(kMaxCoupledBlock));
    }
    const Expr det = detail::MinorDeterminant(m, block, block)();
    if (det.is_zero()) throw DegenerateMetric("metric determinant is identically zero");
    if (block.size() == 1) {
      inv(block[0], block[0]) = simplify(reciprocal(det));
      continue;
    }
    const Expr inv_det = reciprocal(det);
    for (std::size_t a = 0; a < block.size(); ++a) {
      for (std::size_t b = 0; b < block.size(); ++b) {
        // (g^{-1})_{ab} = C_{ba} / det with C the cofactor matrix
        std::vector<std::size_t> rows;
        std::vector<std::size_t> cols;
        for (std::size_t k = 0; k < block.size(); ++k) {
          if (k != b) rows.push_back(block[k]);
          if (k != a) cols.push_back(block[k]);
        }
        Expr minor = detail::MinorDeterminant(m, rows, cols)();
        const Expr sign((a + b) % 2 == 0 ? 1 : -1);
        inv(block[a], block[b]) = simplify(mul({sign, minor, inv_det}));
      }
    }
  }
  return inv;
}

/// Numeric metric components at a chart point.
[[nodiscard]] inline Eigen::MatrixXd evaluate(const Metric& g, const Binding& at) { return g.components().evaluate(at); }

}  // namespace pndp

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pndp/calculus.hpp"
#include "pndp/error.hpp"
#include "pndp/expr.hpp"

namespace pndp {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && hi > lo; }
  [[nodiscard]] double mid() const { return 0.5 * (lo + hi); }
  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] double at(double unit) const { return lo + unit * (hi - lo); }
};

/// Deterministic uniform generator. mt19937_64 is fully specified by the
/// standard and the conversion to [0, 1) is done by hand, so draws are
/// identical across platforms and standard libraries.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed = 0) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(const Interval& iv) { return iv.at(unit()); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Per-symbol sampling intervals, kept sorted by symbol name.
class Domain {
 public:
  Domain() = default;
  Domain(std::initializer_list<std::pair<std::string, Interval>> items) {
    for (const auto& [n, iv] : items) set(n, iv);
  }

  void set(const std::string& name, const Interval& iv) {
    if (!iv.valid()) throw InvalidArgument("sampling interval for '" + name + "' must be finite with positive length");
    auto it = std::lower_bound(items_.begin(), items_.end(), name,
                               [](const auto& item, const std::string& n) { return item.first < n; });
    if (it != items_.end() && it->first == name) {
      it->second = iv;
    } else {
      items_.insert(it, {name, iv});
    }
  }

  void merge(const Domain& other) {
    for (const auto& [n, iv] : other.items_) set(n, iv);
  }

  [[nodiscard]] const std::vector<std::pair<std::string, Interval>>& items() const { return items_; }
  [[nodiscard]] bool empty() const { return items_.empty(); }

  [[nodiscard]] Binding draw(SampleRng& rng) const {
    Binding b;
    for (const auto& [n, iv] : items_) b.set(n, rng.uniform(iv));
    return b;
  }

  [[nodiscard]] Binding midpoint() const {
    Binding b;
    for (const auto& [n, iv] : items_) b.set(n, iv.mid());
    return b;
  }

 private:
  std::vector<std::pair<std::string, Interval>> items_;
};

/// |a - b| scaled the way every sampled comparison in the library is:
/// tol * (1 + max(|a|, |b|)) is the acceptance threshold, so this returns
/// |a - b| / (1 + max(|a|, |b|)).
[[nodiscard]] inline double relative_gap(double a, double b) {
  return std::fabs(a - b) / (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

struct SampledComparison {
  std::size_t valid_points = 0;
  std::size_t skipped_points = 0;
  std::size_t one_sided_domain_failures = 0;
  double max_gap = 0.0;  ///< max of relative_gap over valid points
};

/// Evaluates both expressions at `samples` random points of `domain`.
/// Points where both sides raise DomainError are skipped; points where only
/// one side does are counted as one-sided failures.
[[nodiscard]] inline SampledComparison compare_sampled(const Expr& e1, const Expr& e2, const Domain& domain,
                                                       std::size_t samples, std::uint64_t seed = 0) {
  if (samples < 1) throw InvalidArgument("compare_sampled needs at least one sample");
  SampledComparison out;
  SampleRng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Binding b = domain.draw(rng);
    std::optional<double> v1;
    std::optional<double> v2;
    try {
      v1 = evaluate(e1, b);
    } catch (const DomainError&) {
    }
    try {
      v2 = evaluate(e2, b);
    } catch (const DomainError&) {
    }
    if (!v1 && !v2) {
      ++out.skipped_points;
      continue;
    }
    if (!v1 || !v2) {
      ++out.one_sided_domain_failures;
      continue;
    }
    ++out.valid_points;
    out.max_gap = std::max(out.max_gap, relative_gap(*v1, *v2));
  }
  return out;
}

/// Sampling equivalence test: true iff |e1 - e2| <= tol * (1 + max(|e1|, |e2|))
/// at every valid sample point and no point fails on one side only.
/// Throws NoValidSamples when every drawn point is outside both domains.
[[nodiscard]] inline bool equivalent(const Expr& e1, const Expr& e2, const Domain& domain, std::size_t samples = 100,
                                     double tol = 1e-9, std::uint64_t seed = 0) {
  if (!(tol > 0.0)) throw InvalidArgument("equivalence tolerance must be positive");
  auto cmp = compare_sampled(e1, e2, domain, samples, seed);
  if (cmp.one_sided_domain_failures > 0) return false;
  if (cmp.valid_points == 0) throw NoValidSamples("no sample point lies in the domain of either expression");
  return cmp.max_gap <= tol;
}

}  // namespace pndp

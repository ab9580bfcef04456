#pragma once

#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pndp/expr.hpp"

namespace pndp {

namespace detail {

/// Splits a term into (rational coefficient, remaining factor).
inline std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_constant()) return {term.value(), Expr(1)};
  if (term.kind() != Kind::Mul) return {Rational(1), term};
  Rational coef(1);
  std::vector<Expr> rest;
  for (const auto& f : term.children()) {
    if (f.is_constant()) {
      if (auto p = checked_mul(coef, f.value())) {
        coef = *p;
        continue;
      }
    }
    rest.push_back(f);
  }
  if (rest.empty()) return {coef, Expr(1)};
  if (rest.size() == 1) return {coef, rest.front()};
  return {coef, Expr::raw(Kind::Mul, std::move(rest))};
}

inline bool is_even_integer(const Expr& e) {
  return e.is_constant() && e.value().is_integer() && e.value().num() % 2 == 0;
}

inline bool is_integer_constant(const Expr& e) { return e.is_constant() && e.value().is_integer(); }

class Simplifier {
 public:
  Expr run(const Expr& e) {
    if (e.kind() == Kind::Constant || e.kind() == Kind::Symbol) return e;
    if (auto it = memo_.find(e.identity()); it != memo_.end()) return it->second;
    std::vector<Expr> children;
    children.reserve(e.children().size());
    for (const auto& c : e.children()) children.push_back(run(c));
    Expr out = node(e.kind(), std::move(children));
    memo_.emplace(e.identity(), out);
    return out;
  }

  Expr node(Kind kind, std::vector<Expr> c) {
    switch (kind) {
      case Kind::Add: return sum(std::move(c));
      case Kind::Mul: return product(std::move(c));
      case Kind::Pow: return power(c[0], c[1]);
      case Kind::Neg: return product({Expr(-1), c[0]});
      case Kind::Sqrt: return power(c[0], rational(1, 2));
      case Kind::Exp: {
        const Expr& a = c[0];
        if (a.kind() == Kind::Ln) return a.arg(0);
        auto [coef, rest] = split_coefficient(a);
        if (rest.kind() == Kind::Ln) return power(rest.arg(0), Expr(coef));
        return exp(a);
      }
      case Kind::Ln: {
        const Expr& a = c[0];
        if (a.kind() == Kind::Exp) return a.arg(0);
        return ln(a);
      }
      case Kind::Abs: {
        const Expr& a = c[0];
        if (a.kind() == Kind::Abs || a.kind() == Kind::Exp) return a;
        if (a.kind() == Kind::Pow && is_even_integer(a.arg(1))) return a;
        return abs(a);
      }
      default: return rebuild(kind, std::move(c));
    }
  }

  Expr sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
      if (t.kind() == Kind::Add) {
        flat.insert(flat.end(), t.children().begin(), t.children().end());
      } else {
        flat.push_back(std::move(t));
      }
    }
    std::map<Expr, Rational> groups;
    std::vector<Expr> leftovers;
    for (const auto& t : flat) {
      auto [coef, rest] = split_coefficient(t);
      auto [it, inserted] = groups.emplace(rest, coef);
      if (!inserted) {
        if (auto s = checked_add(it->second, coef)) {
          it->second = *s;
        } else {
          leftovers.push_back(t);
        }
      }
    }
    std::vector<Expr> out;
    for (const auto& [rest, coef] : groups) {
      if (coef.is_zero()) continue;
      if (rest.is_one()) {
        out.emplace_back(coef);
      } else if (coef.is_one()) {
        out.push_back(rest);
      } else {
        out.push_back(mul({Expr(coef), rest}));
      }
    }
    for (auto& l : leftovers) out.push_back(std::move(l));
    return add(std::move(out));
  }

  Expr product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    for (auto& f : factors) {
      if (f.kind() == Kind::Mul) {
        flat.insert(flat.end(), f.children().begin(), f.children().end());
      } else {
        flat.push_back(std::move(f));
      }
    }
    std::vector<Expr> constants;
    std::map<Expr, std::vector<Expr>> exponents;
    for (const auto& f : flat) {
      if (f.is_constant()) {
        constants.push_back(f);
        continue;
      }
      if (f.kind() == Kind::Pow) {
        exponents[f.arg(0)].push_back(f.arg(1));
      } else {
        exponents[f].push_back(Expr(1));
      }
    }
    std::vector<Expr> out = std::move(constants);
    for (auto& [base, exps] : exponents) {
      Expr total = exps.size() == 1 ? exps.front() : sum(std::move(exps));
      out.push_back(power(base, total));
    }
    return mul(std::move(out));
  }

  Expr power(const Expr& base, const Expr& exponent) {
    if (base.kind() == Kind::Pow) {
      const Expr& inner = base.arg(1);
      const bool safe = is_integer_constant(exponent) || (inner.is_constant() && !is_even_integer(inner));
      if (safe) return power(base.arg(0), product({inner, exponent}));
    }
    if (base.kind() == Kind::Mul && is_integer_constant(exponent)) {
      std::vector<Expr> factors;
      factors.reserve(base.children().size());
      for (const auto& f : base.children()) factors.push_back(power(f, exponent));
      return product(std::move(factors));
    }
    if (base.kind() == Kind::Exp) {
      return node(Kind::Exp, {product({base.arg(0), exponent})});
    }
    return pow(base, exponent);
  }

 private:
  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace detail

/// Best-effort normalization: constant folding, like-term collection, power
/// merging, x^0 -> 1 and 0-annihilation. The result is numerically equal to
/// `e` wherever `e` is defined (it may be defined on a larger set). Repeats
/// single passes until a fixed point, so simplify(simplify(e)) == simplify(e).
[[nodiscard]] inline Expr simplify(const Expr& e) {
  Expr current = e;
  for (int pass = 0; pass < 32; ++pass) {
    Expr next = detail::Simplifier().run(current);
    if (next == current) return next;
    current = std::move(next);
  }
  return current;
}

}  // namespace pndp

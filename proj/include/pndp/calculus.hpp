#pragma once

#include <cmath>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pndp/error.hpp"
#include "pndp/expr.hpp"

namespace pndp {

/// Assignment of real values to symbol names.
class Binding {
 public:
  Binding() = default;
  Binding(std::initializer_list<std::pair<const std::string, double>> values) {
    for (const auto& [name, v] : values) set(name, v);
  }

  void set(const std::string& name, double value) {
    if (!std::isfinite(value)) throw InvalidArgument("binding for '" + name + "' is not finite");
    values_[name] = value;
  }

  [[nodiscard]] double get(std::string_view name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw UnboundSymbol("unbound symbol '" + std::string(name) + "'");
    return it->second;
  }

  [[nodiscard]] bool contains(std::string_view name) const { return values_.find(name) != values_.end(); }
  [[nodiscard]] const std::map<std::string, double, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, double, std::less<>> values_;
};

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
  return v;
}

inline double eval_pow(double base, double exponent, bool integral_exponent) {
  if (base == 0.0 && exponent < 0.0) throw DomainError("division by zero");
  if (base < 0.0 && !integral_exponent) throw DomainError("fractional power of a negative number");
  return checked(std::pow(base, exponent), "pow");
}

inline double eval(const Expr& e, const Binding& b) {
  switch (e.kind()) {
    case Kind::Constant: return e.value().to_double();
    case Kind::Symbol: return b.get(e.name());
    case Kind::Add: {
      double s = 0.0;
      for (const auto& c : e.children()) s += eval(c, b);
      return checked(s, "sum");
    }
    case Kind::Mul: {
      double p = 1.0;
      for (const auto& c : e.children()) p *= eval(c, b);
      return checked(p, "product");
    }
    case Kind::Pow: {
      const double base = eval(e.arg(0), b);
      const Expr& ex = e.arg(1);
      if (ex.is_constant()) {
        const auto& r = ex.value();
        if (r.is_integer()) {
          if (base == 0.0 && r.is_negative()) throw DomainError("division by zero");
          return checked(std::pow(base, static_cast<double>(r.num())), "pow");
        }
        if (r.den() == 2 && r.num() == 1) {
          if (base < 0.0) throw DomainError("square root of a negative number");
          return std::sqrt(base);
        }
        return eval_pow(base, r.to_double(), false);
      }
      const double exponent = eval(ex, b);
      return eval_pow(base, exponent, exponent == std::trunc(exponent));
    }
    case Kind::Neg: return -eval(e.arg(0), b);
    case Kind::Exp: return checked(std::exp(eval(e.arg(0), b)), "exp");
    case Kind::Ln: {
      const double v = eval(e.arg(0), b);
      if (v <= 0.0) throw DomainError("logarithm of a non-positive number");
      return std::log(v);
    }
    case Kind::Sin: return std::sin(eval(e.arg(0), b));
    case Kind::Cos: return std::cos(eval(e.arg(0), b));
    case Kind::Sqrt: {
      const double v = eval(e.arg(0), b);
      if (v < 0.0) throw DomainError("square root of a negative number");
      return std::sqrt(v);
    }
    case Kind::Abs: return std::fabs(eval(e.arg(0), b));
  }
  throw InvalidArgument("unknown expression kind");
}

}  // namespace detail

/// Double-precision value of `e` at `b`.
///
/// Throws UnboundSymbol when a free symbol has no value and DomainError when
/// the point lies outside the expression's domain (logarithm of a
/// non-positive number, division by zero, even root of a negative number,
/// or any non-finite intermediate).
[[nodiscard]] inline double evaluate(const Expr& e, const Binding& b) { return detail::eval(e, b); }

namespace detail {

class Differentiator {
 public:
  explicit Differentiator(std::string_view symbol) : symbol_(symbol) {}

  Expr operator()(const Expr& e) {
    if (!depends_on(e, symbol_)) return Expr(0);
    if (auto it = memo_.find(e.identity()); it != memo_.end()) return it->second;
    Expr d = derive(e);
    memo_.emplace(e.identity(), d);
    return d;
  }

 private:
  Expr derive(const Expr& e) {
    switch (e.kind()) {
      case Kind::Constant: return Expr(0);
      case Kind::Symbol: return Expr(e.name() == symbol_ ? 1 : 0);
      case Kind::Add: {
        std::vector<Expr> terms;
        terms.reserve(e.children().size());
        for (const auto& c : e.children()) terms.push_back((*this)(c));
        return add(std::move(terms));
      }
      case Kind::Mul: {
        const auto& cs = e.children();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < cs.size(); ++i) {
          Expr dc = (*this)(cs[i]);
          if (dc.is_zero()) continue;
          std::vector<Expr> factors;
          factors.reserve(cs.size());
          for (std::size_t j = 0; j < cs.size(); ++j) factors.push_back(i == j ? dc : cs[j]);
          terms.push_back(mul(std::move(factors)));
        }
        return add(std::move(terms));
      }
      case Kind::Pow: {
        const Expr& base = e.arg(0);
        const Expr& exponent = e.arg(1);
        const bool base_varies = depends_on(base, symbol_);
        const bool exponent_varies = depends_on(exponent, symbol_);
        if (!exponent_varies) {
          // n * u^(n-1) * u'
          return mul({exponent, pow(base, exponent - Expr(1)), (*this)(base)});
        }
        if (!base_varies) {
          return mul({e, ln(base), (*this)(exponent)});
        }
        return e * ((*this)(exponent) * ln(base) + exponent * (*this)(base) / base);
      }
      case Kind::Neg: return neg((*this)(e.arg(0)));
      case Kind::Exp: return e * (*this)(e.arg(0));
      case Kind::Ln: return (*this)(e.arg(0)) / e.arg(0);
      case Kind::Sin: return cos(e.arg(0)) * (*this)(e.arg(0));
      case Kind::Cos: return neg(sin(e.arg(0))) * (*this)(e.arg(0));
      case Kind::Sqrt: return (*this)(e.arg(0)) / (Expr(2) * e);
      case Kind::Abs: return (*this)(e.arg(0)) * e.arg(0) / e;
    }
    throw InvalidArgument("unknown expression kind");
  }

  std::string symbol_;
  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace detail

/// Partial derivative of `e` with respect to the symbol `s`.
[[nodiscard]] inline Expr differentiate(const Expr& e, std::string_view s) {
  return detail::Differentiator(s)(e);
}

[[nodiscard]] inline Expr differentiate(const Expr& e, const Expr& s) {
  if (!s.is_symbol()) throw InvalidArgument("differentiate: second argument must be a symbol");
  return differentiate(e, s.name());
}

/// Replaces free symbols by expressions, refolding the rebuilt tree.
[[nodiscard]] inline Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  if (e.symbol_mask() == 0) return e;
  if (e.is_symbol()) {
    auto it = replacements.find(e.name());
    return it == replacements.end() ? e : it->second;
  }
  std::vector<Expr> children;
  children.reserve(e.children().size());
  bool changed = false;
  for (const auto& c : e.children()) {
    children.push_back(substitute(c, replacements));
    changed = changed || children.back().identity() != c.identity();
  }
  if (!changed) return e;
  return rebuild(e.kind(), std::move(children));
}

[[nodiscard]] inline Expr substitute(const Expr& e, std::string_view name, const Expr& replacement) {
  return substitute(e, {{std::string(name), replacement}});
}

}  // namespace pndp

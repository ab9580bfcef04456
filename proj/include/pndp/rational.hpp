#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "pndp/error.hpp"

namespace pndp {

/// Exact rational with 64-bit numerator and denominator, always in lowest
/// terms with a positive denominator. Arithmetic that would overflow is
/// reported through the checked_* helpers instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    auto r = normalize(num, den);
    if (!r) throw InvalidArgument("rational out of range");
    *this = *r;
  }

  [[nodiscard]] constexpr std::int64_t num() const { return num_; }
  [[nodiscard]] constexpr std::int64_t den() const { return den_; }
  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
  [[nodiscard]] constexpr bool is_zero() const { return num_ == 0; }
  [[nodiscard]] constexpr bool is_one() const { return num_ == 1 && den_ == 1; }
  [[nodiscard]] constexpr bool is_negative() const { return num_ < 0; }
  [[nodiscard]] double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  [[nodiscard]] std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend constexpr bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  static std::optional<Rational> normalize(__int128 num, __int128 den) {
    if (den == 0) return std::nullopt;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
    constexpr __int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax) return std::nullopt;
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  friend std::optional<Rational> checked_add(const Rational& a, const Rational& b) {
    return normalize(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend std::optional<Rational> checked_mul(const Rational& a, const Rational& b) {
    return normalize(static_cast<__int128>(a.num_) * b.num_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend std::optional<Rational> checked_inverse(const Rational& a) {
    if (a.num_ == 0) return std::nullopt;
    return normalize(a.den_, a.num_);
  }
  /// a^k for integer k; nullopt on overflow or 0^negative.
  friend std::optional<Rational> checked_pow(const Rational& a, std::int64_t k) {
    if (k < 0) {
      auto inv = checked_inverse(a);
      if (!inv) return std::nullopt;
      if (k == INT64_MIN) return std::nullopt;
      return checked_pow(*inv, -k);
    }
    if (k > 126) {
      if (a.num_ == 0 || a == Rational(1)) return a;
      if (a == Rational(-1)) return (k % 2 == 0) ? Rational(1) : a;
      return std::nullopt;
    }
    Rational result(1);
    for (std::int64_t i = 0; i < k; ++i) {
      auto next = checked_mul(result, a);
      if (!next) return std::nullopt;
      result = *next;
    }
    return result;
  }

  /// Exact square root when both numerator and denominator are perfect squares.
  friend std::optional<Rational> exact_sqrt(const Rational& a) {
    if (a.num_ < 0) return std::nullopt;
    auto isqrt = [](std::int64_t v) -> std::optional<std::int64_t> {
      auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
      for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c) {
        if (static_cast<__int128>(c) * c == v) return c;
      }
      return std::nullopt;
    };
    auto n = isqrt(a.num_);
    auto d = isqrt(a.den_);
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
  }

  /// Exact value of a finite double when it is representable as p/2^k in range.
  static std::optional<Rational> from_double(double v) {
    if (!std::isfinite(v)) return std::nullopt;
    if (v == std::trunc(v)) {
      if (std::fabs(v) > 9.0e18) return std::nullopt;
      return Rational(static_cast<std::int64_t>(v));
    }
    int exp = 0;
    double mant = std::frexp(v, &exp);
    // v = mant * 2^exp with 0.5 <= |mant| < 1; scale mantissa to an integer
    auto m = static_cast<__int128>(std::ldexp(mant, 53));
    int shift = exp - 53;
    if (shift >= 0) return std::nullopt;
    if (-shift > 62) {
      // strip trailing zero bits before giving up
      while (shift < 0 && (m % 2 == 0)) {
        m /= 2;
        ++shift;
      }
      if (-shift > 62) return std::nullopt;
    }
    return normalize(m, static_cast<__int128>(1) << (-shift));
  }

  /// Parses "3", "-7", "1/2", "-3/4", "2.5", "1e-3" exactly.
  static std::optional<Rational> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      auto n = parse_integer(text.substr(0, slash));
      auto d = parse_integer(text.substr(slash + 1));
      if (!n || !d || *d == 0) return std::nullopt;
      return normalize(*n, *d);
    }
    bool negative = false;
    std::size_t pos = 0;
    if (text[pos] == '-' || text[pos] == '+') {
      negative = text[pos] == '-';
      ++pos;
    }
    __int128 mantissa = 0;
    int scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
      char c = text[pos];
      if (c >= '0' && c <= '9') {
        seen_digit = true;
        mantissa = mantissa * 10 + (c - '0');
        if (mantissa > static_cast<__int128>(INT64_MAX)) return std::nullopt;
        if (seen_point) --scale;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else if (c == 'e' || c == 'E') {
        auto e = parse_integer(text.substr(pos + 1));
        if (!e || *e > 30 || *e < -30) return std::nullopt;
        scale += static_cast<int>(*e);
        pos = text.size();
        break;
      } else {
        return std::nullopt;
      }
    }
    if (!seen_digit) return std::nullopt;
    __int128 num = negative ? -mantissa : mantissa;
    __int128 den = 1;
    for (; scale > 0; --scale) num *= 10;
    for (; scale < 0; ++scale) den *= 10;
    return normalize(num, den);
  }

 private:
  static std::optional<std::int64_t> parse_integer(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
      negative = text[0] == '-';
      pos = 1;
    }
    if (pos == text.size()) return std::nullopt;
    __int128 v = 0;
    for (; pos < text.size(); ++pos) {
      if (text[pos] < '0' || text[pos] > '9') return std::nullopt;
      v = v * 10 + (text[pos] - '0');
      if (v > static_cast<__int128>(INT64_MAX)) return std::nullopt;
    }
    return static_cast<std::int64_t>(negative ? -v : v);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace pndp

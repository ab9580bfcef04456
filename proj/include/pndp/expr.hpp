#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pndp/error.hpp"
#include "pndp/rational.hpp"

namespace pndp {

enum class Kind : std::uint8_t {
  Constant,
  Symbol,
  Add,
  Mul,
  Pow,
  Neg,
  Exp,
  Ln,
  Sin,
  Cos,
  Sqrt,
  Abs,
};

[[nodiscard]] inline std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::Constant: return "const";
    case Kind::Symbol: return "symbol";
    case Kind::Add: return "add";
    case Kind::Mul: return "mul";
    case Kind::Pow: return "pow";
    case Kind::Neg: return "neg";
    case Kind::Exp: return "exp";
    case Kind::Ln: return "ln";
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Sqrt: return "sqrt";
    case Kind::Abs: return "abs";
  }
  return "?";
}

[[nodiscard]] constexpr bool is_function_kind(Kind kind) {
  return kind == Kind::Neg || kind == Kind::Exp || kind == Kind::Ln || kind == Kind::Sin ||
         kind == Kind::Cos || kind == Kind::Sqrt || kind == Kind::Abs;
}

class Expr;

namespace detail {

struct Node;

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a(std::string_view text, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : text) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace detail

/// Immutable symbolic expression. Copies share the underlying tree.
///
/// Children of sums and products are kept in a canonical order so that
/// structural equality does not depend on construction order. Constructors
/// on this class never fold or rewrite anything; the free functions below
/// (add, mul, pow, ...) apply cheap local folding, and simplify() does the
/// heavier normalization.
class Expr {
 public:
  Expr();
  Expr(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<std::int64_t>(value)) {}  // NOLINT
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  // Doubles are not exact; convert through Rational::from_double explicitly.
  Expr(double) = delete;

  static Expr constant(const Rational& value);
  static Expr symbol(std::string_view name);
  /// Builds a node of the given kind without any folding. Sums and products
  /// need at least two children, powers exactly two, functions exactly one.
  static Expr raw(Kind kind, std::vector<Expr> children);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] const Rational& value() const;
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] const std::vector<Expr>& children() const;
  [[nodiscard]] const Expr& arg(std::size_t i = 0) const { return children()[i]; }

  [[nodiscard]] bool is_constant() const { return kind() == Kind::Constant; }
  [[nodiscard]] bool is_symbol() const { return kind() == Kind::Symbol; }
  [[nodiscard]] bool is_zero() const { return is_constant() && value().is_zero(); }
  [[nodiscard]] bool is_one() const { return is_constant() && value().is_one(); }

  [[nodiscard]] std::uint64_t hash() const;
  /// Bloom mask over the names of free symbols; a clear bit proves absence.
  [[nodiscard]] std::uint64_t symbol_mask() const;
  /// Number of nodes counting shared subtrees once per occurrence (saturating).
  [[nodiscard]] std::uint64_t tree_size() const;
  [[nodiscard]] const void* identity() const { return node_.get(); }

  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {

struct Node {
  Kind kind = Kind::Constant;
  Rational value;
  std::string name;
  std::vector<Expr> children;
  std::uint64_t hash = 0;
  std::uint64_t mask = 0;
  std::uint64_t size = 1;
};

inline std::uint64_t symbol_bit(std::string_view name) {
  return std::uint64_t{1} << (fnv1a(name) % 64);
}

inline bool valid_symbol_name(std::string_view name) {
  if (name.empty()) return false;
  auto head = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

inline std::shared_ptr<const Node> make_constant_node(const Rational& value) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Constant;
  node->value = value;
  node->hash = mix(mix(0x51ed27ULL, static_cast<std::uint64_t>(value.num())),
                   static_cast<std::uint64_t>(value.den()));
  return node;
}

}  // namespace detail

inline Expr::Expr() : Expr(Rational(0)) {}

inline Expr::Expr(std::int64_t value) : Expr(Rational(value)) {}

inline Expr::Expr(const Rational& value) {
  static const auto zero = detail::make_constant_node(Rational(0));
  static const auto one = detail::make_constant_node(Rational(1));
  static const auto minus_one = detail::make_constant_node(Rational(-1));
  if (value.is_zero()) {
    node_ = zero;
  } else if (value.is_one()) {
    node_ = one;
  } else if (value == Rational(-1)) {
    node_ = minus_one;
  } else {
    node_ = detail::make_constant_node(value);
  }
}

inline Expr Expr::constant(const Rational& value) { return Expr(value); }

inline Expr Expr::symbol(std::string_view name) {
  if (!detail::valid_symbol_name(name)) {
    throw InvalidArgument("invalid symbol name '" + std::string(name) + "'");
  }
  auto node = std::make_shared<detail::Node>();
  node->kind = Kind::Symbol;
  node->name = std::string(name);
  node->hash = detail::fnv1a(name, 0x5a17ULL);
  node->mask = detail::symbol_bit(name);
  return Expr(std::shared_ptr<const detail::Node>(std::move(node)));
}

inline Expr Expr::raw(Kind kind, std::vector<Expr> children) {
  switch (kind) {
    case Kind::Constant:
    case Kind::Symbol:
      throw InvalidArgument("raw() cannot build leaves");
    case Kind::Add:
    case Kind::Mul:
      if (children.size() < 2) throw InvalidArgument("sum/product needs at least two terms");
      std::sort(children.begin(), children.end());
      break;
    case Kind::Pow:
      if (children.size() != 2) throw InvalidArgument("pow takes two arguments");
      break;
    default:
      if (children.size() != 1) {
        throw InvalidArgument(std::string(kind_name(kind)) + " takes one argument");
      }
      break;
  }
  auto node = std::make_shared<detail::Node>();
  node->kind = kind;
  std::uint64_t h = detail::mix(0xc0ffeeULL, static_cast<std::uint64_t>(kind));
  std::uint64_t mask = 0;
  std::uint64_t size = 1;
  for (const auto& c : children) {
    h = detail::mix(h, c.hash());
    mask |= c.symbol_mask();
    size = (size + c.tree_size() < size) ? UINT64_MAX : size + c.tree_size();
  }
  node->hash = h;
  node->mask = mask;
  node->size = size;
  node->children = std::move(children);
  return Expr(std::shared_ptr<const detail::Node>(std::move(node)));
}

inline Kind Expr::kind() const { return node_->kind; }
inline const Rational& Expr::value() const { return node_->value; }
inline const std::string& Expr::name() const { return node_->name; }
inline const std::vector<Expr>& Expr::children() const { return node_->children; }
inline std::uint64_t Expr::hash() const { return node_->hash; }
inline std::uint64_t Expr::symbol_mask() const { return node_->mask; }
inline std::uint64_t Expr::tree_size() const { return node_->size; }

inline int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant: {
      auto c = a.value() <=> b.value();
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Symbol:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    default:
      break;
  }
  const auto& ac = a.children();
  const auto& bc = b.children();
  if (ac.size() != bc.size()) return ac.size() < bc.size() ? -1 : 1;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (int c = compare(ac[i], bc[i]); c != 0) return c;
  }
  return 0;
}

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Folding constructors

[[nodiscard]] inline Expr sym(std::string_view name) { return Expr::symbol(name); }

[[nodiscard]] inline Expr add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  Rational constant(0);
  std::vector<Expr> overflowed;
  auto absorb = [&](const Expr& t) {
    if (t.is_constant()) {
      if (auto s = checked_add(constant, t.value())) {
        constant = *s;
      } else {
        overflowed.push_back(t);
      }
    } else {
      flat.push_back(t);
    }
  };
  for (auto& t : terms) {
    if (t.kind() == Kind::Add) {
      for (const auto& c : t.children()) absorb(c);
    } else {
      absorb(t);
    }
  }
  if (!constant.is_zero()) flat.emplace_back(constant);
  for (auto& o : overflowed) flat.push_back(std::move(o));
  if (flat.empty()) return Expr(0);
  if (flat.size() == 1) return flat.front();
  return Expr::raw(Kind::Add, std::move(flat));
}

[[nodiscard]] inline Expr mul(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  Rational constant(1);
  std::vector<Expr> overflowed;
  bool zero = false;
  auto absorb = [&](const Expr& f) {
    if (f.is_constant()) {
      if (f.value().is_zero()) zero = true;
      if (auto p = checked_mul(constant, f.value())) {
        constant = *p;
      } else {
        overflowed.push_back(f);
      }
    } else {
      flat.push_back(f);
    }
  };
  for (auto& f : factors) {
    if (f.kind() == Kind::Mul) {
      for (const auto& c : f.children()) absorb(c);
    } else {
      absorb(f);
    }
  }
  if (zero) return Expr(0);
  if (!constant.is_one()) flat.emplace_back(constant);
  for (auto& o : overflowed) flat.push_back(std::move(o));
  if (flat.empty()) return Expr(1);
  if (flat.size() == 1) return flat.front();
  return Expr::raw(Kind::Mul, std::move(flat));
}

[[nodiscard]] inline Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return Expr(1);
  if (exponent.is_one()) return base;
  if (base.is_one()) return Expr(1);
  if (base.is_constant() && exponent.is_constant()) {
    const auto& b = base.value();
    const auto& e = exponent.value();
    if (b.is_zero() && !e.is_negative()) return Expr(0);
    if (e.is_integer()) {
      if (auto p = checked_pow(b, e.num())) return Expr(*p);
    } else if (e == Rational(1, 2)) {
      if (auto r = exact_sqrt(b)) return Expr(*r);
    } else if (e == Rational(-1, 2) && !b.is_zero()) {
      if (auto r = exact_sqrt(b)) {
        if (auto inv = checked_inverse(*r)) return Expr(*inv);
      }
    }
  }
  return Expr::raw(Kind::Pow, {base, exponent});
}

[[nodiscard]] inline Expr neg(const Expr& e) { return mul({Expr(-1), e}); }
[[nodiscard]] inline Expr sub(const Expr& a, const Expr& b) { return add({a, neg(b)}); }
[[nodiscard]] inline Expr reciprocal(const Expr& e) { return pow(e, Expr(-1)); }
[[nodiscard]] inline Expr div(const Expr& a, const Expr& b) { return mul({a, reciprocal(b)}); }

[[nodiscard]] inline Expr exp(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  return Expr::raw(Kind::Exp, {e});
}
[[nodiscard]] inline Expr ln(const Expr& e) {
  if (e.is_one()) return Expr(0);
  return Expr::raw(Kind::Ln, {e});
}
[[nodiscard]] inline Expr sin(const Expr& e) {
  if (e.is_zero()) return Expr(0);
  return Expr::raw(Kind::Sin, {e});
}
[[nodiscard]] inline Expr cos(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  return Expr::raw(Kind::Cos, {e});
}
[[nodiscard]] inline Expr sqrt(const Expr& e) {
  if (e.is_constant()) {
    if (auto r = exact_sqrt(e.value())) return Expr(*r);
  }
  return Expr::raw(Kind::Sqrt, {e});
}
[[nodiscard]] inline Expr abs(const Expr& e) {
  if (e.is_constant()) return Expr(e.value().is_negative() ? *checked_mul(e.value(), Rational(-1)) : e.value());
  return Expr::raw(Kind::Abs, {e});
}

/// Applies the folding constructor matching `kind` to new children.
[[nodiscard]] inline Expr rebuild(Kind kind, std::vector<Expr> children) {
  switch (kind) {
    case Kind::Add: return add(std::move(children));
    case Kind::Mul: return mul(std::move(children));
    case Kind::Pow: return pow(children[0], children[1]);
    case Kind::Neg: return neg(children[0]);
    case Kind::Exp: return exp(children[0]);
    case Kind::Ln: return ln(children[0]);
    case Kind::Sin: return sin(children[0]);
    case Kind::Cos: return cos(children[0]);
    case Kind::Sqrt: return sqrt(children[0]);
    case Kind::Abs: return abs(children[0]);
    default: throw InvalidArgument("rebuild() called on a leaf kind");
  }
}

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
inline Expr operator-(const Expr& a) { return neg(a); }
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

[[nodiscard]] inline Expr square(const Expr& e) { return pow(e, Expr(2)); }
[[nodiscard]] inline Expr rational(std::int64_t num, std::int64_t den) { return Expr(Rational(num, den)); }

// ---------------------------------------------------------------------------
// Queries

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.symbol_mask() == 0) return;
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& c : e.children()) collect_symbols(c, out);
}

[[nodiscard]] inline std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

[[nodiscard]] inline bool depends_on(const Expr& e, std::string_view name) {
  if ((e.symbol_mask() & detail::symbol_bit(name)) == 0) return false;
  if (e.is_symbol()) return e.name() == name;
  return std::any_of(e.children().begin(), e.children().end(),
                     [&](const Expr& c) { return depends_on(c, name); });
}

// ---------------------------------------------------------------------------
// Prefix text form: `(pow (sin theta) 2)`, constants `3`, `-1/2`.

inline void write_prefix(std::string& out, const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
      out += e.value().str();
      return;
    case Kind::Symbol:
      out += e.name();
      return;
    default:
      break;
  }
  out += '(';
  out += kind_name(e.kind());
  for (const auto& c : e.children()) {
    out += ' ';
    write_prefix(out, c);
  }
  out += ')';
}

[[nodiscard]] inline std::string to_prefix(const Expr& e) {
  std::string out;
  write_prefix(out, e);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_prefix(e); }

namespace detail {

class PrefixParser {
 public:
  explicit PrefixParser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("expression parse error at offset " + std::to_string(pos_) + ": " + why +
                     " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected atom");
    return text_.substr(start, pos_ - start);
  }

  Expr parse_expr() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == ')') fail("unexpected ')'");
    if (text_[pos_] != '(') {
      auto token = atom();
      if (auto r = Rational::parse(token)) return Expr(*r);
      if (!valid_symbol_name(token)) fail("bad atom '" + std::string(token) + "'");
      return Expr::symbol(token);
    }
    ++pos_;
    std::string op(atom());
    std::vector<Expr> args;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail("missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      args.push_back(parse_expr());
    }
    return build(op, std::move(args));
  }

  Expr build(const std::string& op, std::vector<Expr> args) {
    auto expect = [&](std::size_t n) {
      if (args.size() != n) fail("'" + op + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (op == "add" || op == "mul") {
      if (args.size() < 2) fail("'" + op + "' needs at least two arguments");
      return Expr::raw(op == "add" ? Kind::Add : Kind::Mul, std::move(args));
    }
    if (op == "sub") {
      expect(2);
      return Expr::raw(Kind::Add, {args[0], Expr::raw(Kind::Neg, {args[1]})});
    }
    if (op == "div") {
      expect(2);
      return Expr::raw(Kind::Mul, {args[0], Expr::raw(Kind::Pow, {args[1], Expr(-1)})});
    }
    if (op == "pow") {
      expect(2);
      return Expr::raw(Kind::Pow, std::move(args));
    }
    static constexpr std::pair<std::string_view, Kind> kUnary[] = {
        {"neg", Kind::Neg}, {"exp", Kind::Exp},   {"ln", Kind::Ln},   {"sin", Kind::Sin},
        {"cos", Kind::Cos}, {"sqrt", Kind::Sqrt}, {"abs", Kind::Abs},
    };
    for (const auto& [name, kind] : kUnary) {
      if (op == name) {
        expect(1);
        return Expr::raw(kind, std::move(args));
      }
    }
    fail("unknown operator '" + op + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the prefix text form. `sub` and `div` are accepted as input sugar.
[[nodiscard]] inline Expr parse_prefix(std::string_view text) {
  return detail::PrefixParser(text).parse_all();
}

// ---------------------------------------------------------------------------
// Infix rendering for human-readable reports (not parsed back).

namespace detail {

inline int infix_precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::Add: return 1;
    case Kind::Mul:
    case Kind::Neg: return 2;
    case Kind::Pow: return 3;
    case Kind::Constant: return e.value().is_integer() && !e.value().is_negative() ? 5 : 2;
    default: return 5;
  }
}

inline void write_infix(std::string& out, const Expr& e, int parent) {
  const int prec = infix_precedence(e);
  const bool wrap = prec <= parent;
  if (wrap) out += '(';
  switch (e.kind()) {
    case Kind::Constant: out += e.value().str(); break;
    case Kind::Symbol: out += e.name(); break;
    case Kind::Add:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += " + ";
        write_infix(out, e.children()[i], prec);
      }
      break;
    case Kind::Mul:
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += "*";
        write_infix(out, e.children()[i], prec);
      }
      break;
    case Kind::Pow:
      write_infix(out, e.arg(0), prec);
      out += "^";
      write_infix(out, e.arg(1), prec);
      break;
    case Kind::Neg:
      out += "-";
      write_infix(out, e.arg(0), prec);
      break;
    default:
      out += kind_name(e.kind());
      out += '(';
      write_infix(out, e.arg(0), 0);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

}  // namespace detail

[[nodiscard]] inline std::string to_infix(const Expr& e) {
  std::string out;
  detail::write_infix(out, e, 0);
  return out;
}

}  // namespace pndp

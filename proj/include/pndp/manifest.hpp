#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pndp/spacetime.hpp"
#include "pndp/warped.hpp"

namespace pndp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kManifestSchema = "pndp-manifest/1";

/// Check names in the order they are executed.
inline const std::vector<std::string>& check_order() {
  static const std::vector<std::string> order{"blocks", "einstein", "pndp", "spacetime", "wormhole"};
  return order;
}

struct ManifestNote {
  std::string id;
  std::string message;
};

struct WormholeSection {
  EmbeddingProfile profile;
  std::string kind;  ///< catenoid | schwarzschild | cone | custom
  double r0 = 1.0;
  Interval r_range{1.0, 5.0};
  std::size_t samples = 100;
  std::optional<Rational> mass;
  bool alternative_phi = false;
};

struct SpacetimeSection {
  std::string kind;  ///< pointlike | graphene | cylindrical
  Metric metric;
  std::optional<double> lambda;
};

struct Manifest {
  std::string id;
  int version = 1;
  std::string title;
  std::string description;
  std::vector<std::string> checks;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::optional<double> lambda;
  std::map<std::string, Metric> metrics;
  std::optional<std::string> metric_ref;
  std::optional<WarpedSpec> warped;
  std::optional<SpacetimeSection> spacetime;
  std::optional<WormholeSection> wormhole;
  std::vector<ManifestNote> notes;
  Json source;

  [[nodiscard]] bool requests(const std::string& check) const {
    for (const auto& c : checks) {
      if (c == check) return true;
    }
    return false;
  }
};

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string manifest_digest(const Manifest& m) { return "fnv1a64:" + fnv1a64(m.source.dump()); }

namespace detail {

inline std::string describe(const Error& e) {
#define PNDP_DESCRIBE(Name) \
  if (dynamic_cast<const Name*>(&e)) return std::string(#Name ": ") + e.what();
  PNDP_DESCRIBE(RankTooSmall)
  PNDP_DESCRIBE(UnboundSymbol)
  PNDP_DESCRIBE(DomainError)
  PNDP_DESCRIBE(DegenerateMetric)
  PNDP_DESCRIBE(InvalidChart)
  PNDP_DESCRIBE(AsymmetricMetric)
  PNDP_DESCRIBE(SymbolCollision)
  PNDP_DESCRIBE(NonPositiveWarp)
  PNDP_DESCRIBE(ForeignWarpSymbol)
  PNDP_DESCRIBE(InvalidArgument)
#undef PNDP_DESCRIBE
  return e.what();
}

class ManifestReader {
 public:
  explicit ManifestReader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ParseError(origin_ + ": field '" + field + "': " + what);
  }

  [[noreturn]] void invalid(const std::string& field, const std::string& what) const {
    throw ValidationError(origin_ + ": field '" + field + "': " + what);
  }

  const Json& require(const Json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(join(path, key), "missing required field");
    return *it;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  std::string text(const Json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  double number(const Json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  long long integer(const Json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long long>();
  }

  std::size_t count(const Json& v, const std::string& path) const {
    const long long n = integer(v, path);
    if (n < 1) invalid(path, "must be at least 1");
    return static_cast<std::size_t>(n);
  }

  Expr expr(const Json& v, const std::string& path) const {
    if (v.is_number_integer()) return Expr(static_cast<std::int64_t>(v.get<long long>()));
    const std::string s = text(v, path);
    try {
      return parse_prefix(s);
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }

  Rational rational_value(const Json& v, const std::string& path) const {
    const Expr e = expr(v, path);
    if (!e.is_constant()) fail(path, "expected a rational constant");
    return e.value();
  }

  Interval interval(const Json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
    Interval iv{number(v[0], path + "[0]"), number(v[1], path + "[1]")};
    if (!iv.valid()) invalid(path, "interval must be finite with lo < hi");
    return iv;
  }

  Metric metric(const Json& v, const std::string& path) const {
    const Json& coords = require(v, "coordinates", path);
    if (!coords.is_array() || coords.empty()) fail(join(path, "coordinates"), "expected a non-empty array");
    std::vector<Coordinate> chart_coords;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const std::string cp = join(path, "coordinates") + "[" + std::to_string(i) + "]";
      chart_coords.push_back({text(require(coords[i], "name", cp), cp + ".name"),
                              interval(require(coords[i], "interval", cp), cp + ".interval")});
    }
    std::optional<int> vdim;
    if (v.contains("virtual_dim")) vdim = static_cast<int>(integer(v["virtual_dim"], join(path, "virtual_dim")));

    const std::size_t n = chart_coords.size();
    ExprMatrix g(n, n);
    const bool has_diag = v.contains("diagonal");
    const bool has_full = v.contains("components");
    if (has_diag == has_full) fail(path, "exactly one of 'diagonal' or 'components' is required");
    if (has_diag) {
      const Json& diag = v["diagonal"];
      const std::string dp = join(path, "diagonal");
      if (!diag.is_array() || diag.size() != n) fail(dp, "expected " + std::to_string(n) + " entries");
      for (std::size_t i = 0; i < n; ++i) g(i, i) = simplify(expr(diag[i], dp + "[" + std::to_string(i) + "]"));
    } else {
      const Json& rows = v["components"];
      const std::string rp = join(path, "components");
      if (!rows.is_array() || rows.size() != n) fail(rp, "expected " + std::to_string(n) + " rows");
      for (std::size_t i = 0; i < n; ++i) {
        const std::string row_path = rp + "[" + std::to_string(i) + "]";
        if (!rows[i].is_array() || rows[i].size() != n) fail(row_path, "expected " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) g(i, j) = simplify(expr(rows[i][j], row_path + "[" + std::to_string(j) + "]"));
      }
    }
    try {
      return Metric(Chart(std::move(chart_coords)), std::move(g), vdim);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      invalid(path, describe(e));
    }
  }

  std::string origin_;
};

}  // namespace detail

/// Builds a validated manifest from parsed JSON. `origin` prefixes every
/// diagnostic, usually the file path.
inline Manifest manifest_from_json(const Json& doc, const std::string& origin = "manifest") {
  detail::ManifestReader rd(origin);
  using R = detail::ManifestReader;
  if (!doc.is_object()) rd.fail("<root>", "expected an object");
  Manifest m;
  m.source = doc;

  const std::string schema = rd.text(rd.require(doc, "schema", ""), "schema");
  if (schema != kManifestSchema) rd.invalid("schema", "unsupported schema '" + schema + "'");
  m.id = rd.text(rd.require(doc, "id", ""), "id");
  if (m.id.empty()) rd.invalid("id", "must not be empty");
  if (doc.contains("version")) m.version = static_cast<int>(rd.integer(doc["version"], "version"));
  if (doc.contains("title")) m.title = rd.text(doc["title"], "title");
  if (doc.contains("description")) m.description = rd.text(doc["description"], "description");
  if (doc.contains("samples")) m.samples = rd.count(doc["samples"], "samples");
  if (doc.contains("seed")) {
    const long long s = rd.integer(doc["seed"], "seed");
    if (s < 0) rd.invalid("seed", "must be non-negative");
    m.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("tolerance")) {
    m.tolerance = rd.number(doc["tolerance"], "tolerance");
    if (!(m.tolerance > 0.0)) rd.invalid("tolerance", "must be positive");
  }
  if (doc.contains("lambda") && !doc["lambda"].is_null()) m.lambda = rd.number(doc["lambda"], "lambda");

  if (doc.contains("notes")) {
    const Json& notes = doc["notes"];
    if (!notes.is_array()) rd.fail("notes", "expected an array");
    for (std::size_t i = 0; i < notes.size(); ++i) {
      const std::string p = "notes[" + std::to_string(i) + "]";
      m.notes.push_back({rd.text(rd.require(notes[i], "id", p), p + ".id"),
                         rd.text(rd.require(notes[i], "message", p), p + ".message")});
    }
  }

  if (doc.contains("metrics")) {
    const Json& metrics = doc["metrics"];
    if (!metrics.is_object()) rd.fail("metrics", "expected an object");
    for (const auto& [name, body] : metrics.items()) m.metrics.emplace(name, rd.metric(body, "metrics." + name));
  }
  auto lookup = [&](const std::string& name, const std::string& path) -> const Metric& {
    auto it = m.metrics.find(name);
    if (it == m.metrics.end()) rd.invalid(path, "unknown metric '" + name + "'");
    return it->second;
  };

  if (doc.contains("metric")) {
    m.metric_ref = rd.text(doc["metric"], "metric");
    (void)lookup(*m.metric_ref, "metric");
  }

  if (doc.contains("warped")) {
    const Json& w = doc["warped"];
    auto factor = [&](const char* key) -> std::optional<Metric> {
      if (!w.contains(key) || w[key].is_null()) return std::nullopt;
      const std::string p = R::join("warped", key);
      const Json& list = w[key];
      if (!list.is_array() || list.empty()) rd.fail(p, "expected a non-empty array of metric names");
      std::vector<Metric> parts;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string ip = p + "[" + std::to_string(i) + "]";
        parts.push_back(lookup(rd.text(list[i], ip), ip));
      }
      if (parts.size() == 1) return parts.front();
      try {
        return product_metric(parts);
      } catch (const Error& e) {
        rd.invalid(p, detail::describe(e));
      }
    };
    WarpedSpec spec;
    spec.base_prime = factor("base_prime");
    spec.base_tilde = factor("base_tilde");
    if (w.contains("tilde_label")) spec.tilde_label = rd.text(w["tilde_label"], "warped.tilde_label");
    const Json& fib = rd.require(w, "fiber", "warped");
    const int d = static_cast<int>(rd.integer(rd.require(fib, "d", "warped.fiber"), "warped.fiber.d"));
    const int rank = static_cast<int>(rd.integer(rd.require(fib, "rank", "warped.fiber"), "warped.fiber.rank"));
    int sign = -1;
    if (fib.contains("sign")) {
      sign = static_cast<int>(rd.integer(fib["sign"], "warped.fiber.sign"));
      if (sign != 1 && sign != -1) rd.invalid("warped.fiber.sign", "must be 1 or -1");
    }
    std::vector<std::string> names;
    if (fib.contains("coordinates")) {
      const Json& list = fib["coordinates"];
      if (!list.is_array()) rd.fail("warped.fiber.coordinates", "expected an array of names");
      for (std::size_t i = 0; i < list.size(); ++i) {
        names.push_back(rd.text(list[i], "warped.fiber.coordinates[" + std::to_string(i) + "]"));
      }
    }
    if (w.contains("f_prime")) spec.f_prime = simplify(rd.expr(w["f_prime"], "warped.f_prime"));
    if (w.contains("f_tilde")) spec.f_tilde = simplify(rd.expr(w["f_tilde"], "warped.f_tilde"));
    spec.lambda = m.lambda;
    try {
      spec.fiber = derived_fiber(d, rank, std::move(names), sign);
      validate(spec);
    } catch (const Error& e) {
      rd.invalid("warped", detail::describe(e));
    }
    m.warped = std::move(spec);
  }

  if (doc.contains("wormhole")) {
    const Json& w = doc["wormhole"];
    WormholeSection ws;
    ws.kind = rd.text(rd.require(w, "profile", "wormhole"), "wormhole.profile");
    if (w.contains("r0")) ws.r0 = rd.number(w["r0"], "wormhole.r0");
    if (w.contains("samples")) ws.samples = rd.count(w["samples"], "wormhole.samples");
    if (ws.kind == "catenoid") {
      const Rational r0 = w.contains("r0") ? rd.rational_value(w["r0"], "wormhole.r0") : Rational(1);
      ws.r0 = r0.to_double();
      ws.profile = catenoid_profile(r0, 5.0 * ws.r0);
    } else if (ws.kind == "schwarzschild") {
      ws.mass = rd.rational_value(rd.require(w, "M", "wormhole"), "wormhole.M");
      if (!(ws.mass->to_double() > 0.0)) rd.invalid("wormhole.M", "mass must be positive");
      if (w.contains("alternative_phi")) {
        if (!w["alternative_phi"].is_boolean()) rd.fail("wormhole.alternative_phi", "expected a boolean");
        ws.alternative_phi = w["alternative_phi"].get<bool>();
      }
      ws.profile = schwarzschild_profile(*ws.mass, ws.alternative_phi);
      ws.r0 = 2.0 * ws.mass->to_double();
    } else if (ws.kind == "cone") {
      ws.profile = cone_profile();
    } else if (ws.kind == "custom") {
      ws.profile.name = w.contains("name") ? rd.text(w["name"], "wormhole.name") : std::string("custom");
      ws.profile.xi = rd.expr(rd.require(w, "xi", "wormhole"), "wormhole.xi");
      if (w.contains("phi")) ws.profile.phi = rd.expr(w["phi"], "wormhole.phi");
      ws.profile.r_domain = rd.interval(rd.require(w, "r_domain", "wormhole"), "wormhole.r_domain");
      for (const char* key : {"xi", "phi"}) {
        const Expr& e = std::string(key) == "xi" ? ws.profile.xi : ws.profile.phi;
        for (const auto& s : free_symbols(e)) {
          if (s != "r") rd.invalid(std::string("wormhole.") + key, "unbound symbol '" + s + "' (only r is allowed)");
        }
      }
    } else {
      rd.invalid("wormhole.profile", "unknown profile '" + ws.kind + "'");
    }
    ws.r_range = w.contains("r_range") ? rd.interval(w["r_range"], "wormhole.r_range")
                                       : Interval{ws.r0, ws.profile.r_domain.hi};
    if (ws.r_range.lo < ws.r0) rd.invalid("wormhole.r_range", "must start at or after the throat radius r0");
    m.wormhole = std::move(ws);
  }

  if (doc.contains("spacetime")) {
    const Json& s = doc["spacetime"];
    const std::string kind = rd.text(rd.require(s, "kind", "spacetime"), "spacetime.kind");
    std::optional<double> lam;
    if (s.contains("lambda")) lam = rd.number(s["lambda"], "spacetime.lambda");
    auto only_r = [&](const Expr& e, const std::string& path, std::initializer_list<const char*> allowed) {
      for (const auto& sym : free_symbols(e)) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || sym == a;
        if (!ok) rd.invalid(path, "unbound symbol '" + sym + "'");
      }
    };
    try {
      if (kind == "pointlike") {
        const int n = static_cast<int>(rd.integer(rd.require(s, "n", "spacetime"), "spacetime.n"));
        const Expr phi = s.contains("phi") ? rd.expr(s["phi"], "spacetime.phi") : Expr(0);
        only_r(phi, "spacetime.phi", {"r"});
        std::optional<int> fd;
        if (s.contains("fiber_dim")) fd = static_cast<int>(rd.integer(s["fiber_dim"], "spacetime.fiber_dim"));
        const Expr f = s.contains("f") ? rd.expr(s["f"], "spacetime.f") : Expr(1);
        m.spacetime = SpacetimeSection{kind, pointlike_spacetime(n, phi, fd, f), lam};
      } else if (kind == "graphene") {
        GrapheneParams gp;
        if (s.contains("b")) gp.b = rd.expr(s["b"], "spacetime.b");
        if (s.contains("phi")) gp.phi = rd.expr(s["phi"], "spacetime.phi");
        if (s.contains("f")) gp.f = rd.expr(s["f"], "spacetime.f");
        only_r(gp.b, "spacetime.b", {"r"});
        only_r(gp.phi, "spacetime.phi", {"r"});
        if (s.contains("r_range")) gp.r_range = rd.interval(s["r_range"], "spacetime.r_range");
        if (s.contains("fiber_dim")) gp.fiber_dim = static_cast<int>(rd.integer(s["fiber_dim"], "spacetime.fiber_dim"));
        m.spacetime = SpacetimeSection{kind, graphene_wormhole_metric(gp), lam};
      } else if (kind == "cylindrical") {
        if (!m.wormhole) rd.invalid("spacetime.kind", "cylindrical reduction needs a wormhole section");
        m.spacetime = SpacetimeSection{kind, cylindrical_reduction(m.wormhole->profile), lam};
      } else {
        rd.invalid("spacetime.kind", "unknown spacetime '" + kind + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      rd.invalid("spacetime", detail::describe(e));
    }
  }

  const Json& checks = rd.require(doc, "checks", "");
  if (!checks.is_array() || checks.empty()) rd.fail("checks", "expected a non-empty array");
  std::vector<std::string> requested;
  for (std::size_t i = 0; i < checks.size(); ++i) requested.push_back(rd.text(checks[i], "checks[" + std::to_string(i) + "]"));
  auto available = [&](const std::string& c) {
    if (c == "blocks" || c == "pndp") return m.warped.has_value();
    if (c == "einstein") return m.warped.has_value() || m.metric_ref.has_value();
    if (c == "spacetime") return m.spacetime.has_value();
    if (c == "wormhole") return m.wormhole.has_value();
    return false;
  };
  for (const auto& name : check_order()) {
    bool want = false;
    for (const auto& r : requested) {
      if (r == name) want = true;
      if (r == "all" && available(name)) want = true;
    }
    if (want) m.checks.push_back(name);
  }
  for (const auto& r : requested) {
    bool known = r == "all";
    for (const auto& name : check_order()) known = known || r == name;
    if (!known) rd.invalid("checks", "unknown check '" + r + "'");
    if (r != "all" && !available(r)) rd.invalid("checks", "check '" + r + "' has no section to run on");
  }
  if (m.checks.empty()) rd.invalid("checks", "nothing to run");
  return m;
}

/// Parses manifest text; JSON syntax errors become ParseError with the line
/// and column reported by the parser.
inline Manifest parse_manifest(const std::string& text, const std::string& origin = "manifest") {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  return manifest_from_json(doc, origin);
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path);
}

}  // namespace pndp

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pndp/manifest.hpp"

namespace pndp::catalog {

inline constexpr int kCatalogVersion = 1;

namespace detail {

inline Json coordinate(const std::string& name, double lo, double hi) {
  Json c;
  c["name"] = name;
  c["interval"] = {lo, hi};
  return c;
}

inline Json diagonal_metric(const std::vector<std::string>& names, const std::vector<std::string>& diag, double lo,
                            double hi) {
  Json m;
  Json coords = Json::array();
  for (const auto& n : names) coords.push_back(coordinate(n, lo, hi));
  m["coordinates"] = std::move(coords);
  m["diagonal"] = diag;
  return m;
}

inline Json flat(const std::vector<std::string>& names, double lo = -2.0, double hi = 2.0) {
  return diagonal_metric(names, std::vector<std::string>(names.size(), "1"), lo, hi);
}

inline Json header(const std::string& id, const std::string& title, std::vector<std::string> checks) {
  Json m;
  m["schema"] = kManifestSchema;
  m["id"] = id;
  m["version"] = kCatalogVersion;
  m["title"] = title;
  m["checks"] = std::move(checks);
  m["samples"] = 20;
  m["seed"] = 0;
  m["tolerance"] = 1e-8;
  return m;
}

inline Json fiber(int d, int rank, std::vector<std::string> names, int sign = -1) {
  Json f;
  f["d"] = d;
  f["rank"] = rank;
  f["coordinates"] = std::move(names);
  f["sign"] = sign;
  return f;
}

inline Json warped(std::vector<std::string> prime, std::vector<std::string> tilde, Json fib, const std::string& f_prime,
                   const std::string& tilde_label = "B~") {
  Json w;
  w["base_prime"] = std::move(prime);
  w["base_tilde"] = std::move(tilde);
  w["tilde_label"] = tilde_label;
  w["fiber"] = std::move(fib);
  w["f_prime"] = f_prime;
  w["f_tilde"] = "0";
  return w;
}

inline void note(Json& m, const std::string& id, const std::string& message) {
  if (!m.contains("notes")) m["notes"] = Json::array();
  m["notes"].push_back({{"id", id}, {"message", message}});
}

const std::vector<std::string> kWarpChecks{"blocks", "einstein", "pndp"};

inline Json example1(const std::string& id = "example1", std::vector<std::string> checks = kWarpChecks) {
  Json m = header(id, "(4-2)-PNDP on R x R x R x R with flat fiber of rank 4", std::move(checks));
  m["metrics"]["B1"] = flat({"t", "x"});
  m["metrics"]["B2"] = flat({"y", "z"});
  m["warped"] = warped({"B1"}, {"B2"}, fiber(2, 4, {"u", "v"}), "1", "R^2");
  return m;
}

inline Json line_base(Json m) {
  m["metrics"]["B1"] = flat({"y"}, 0.5, 2.0);
  m["metrics"]["B2"] = flat({"x", "z"});
  return m;
}

inline Json example2(const std::string& id, const std::string& h, int sign, std::vector<std::string> checks) {
  Json m = line_base(header(id, "point-like PNDP over R^3 with fiber R^3 of rank 6, warp h(y) = " + h, std::move(checks)));
  m["lambda"] = 0;
  m["warped"] = warped({"B1"}, {"B2"}, fiber(3, 6, {"u", "v", "w"}, sign), h, "R^2");
  return m;
}

inline Json example3(const std::string& id, std::vector<std::string> checks) {
  Json m = line_base(header(id, "PNDP over R^3 with fiber R^4 of rank 8", std::move(checks)));
  m["lambda"] = 0;
  m["warped"] = warped({"B1"}, {"B2"}, fiber(4, 8, {"u", "v", "w", "s"}), "1");
  return m;
}

inline Json example4() {
  Json m = header("example4", "(6-3)-PNDP over six flat lines", kWarpChecks);
  for (int i = 1; i <= 6; ++i) m["metrics"]["B" + std::to_string(i)] = flat({"x" + std::to_string(i)});
  m["warped"] = warped({"B1", "B2", "B3"}, {"B4", "B5", "B6"}, fiber(3, 6, {"u1", "u2", "u3"}), "1", "B4 x B5 x B6");
  note(m, "constant-warp-forced",
       "with flat factors and lambda = 0 the system forces Hess f = 0 and Lap(f^d) = 0, so f is constant; "
       "the stated non-constant f cannot be realized");
  return m;
}

inline Json example5(bool verbatim) {
  Json m = header(verbatim ? "example5_verbatim" : "example5",
                  verbatim ? "(6-4)-PNDP reading of the stated n - d = 6 - 4" : "(8-4)-PNDP over four flat planes",
                  kWarpChecks);
  m["metrics"]["B1"] = flat({"x1", "x2"});
  m["metrics"]["B2"] = flat({"x3", "x4"});
  if (verbatim) {
    m["metrics"]["B3"] = flat({"y1"});
    m["metrics"]["B4"] = flat({"y2"});
  } else {
    m["metrics"]["B3"] = flat({"y1", "y2"});
    m["metrics"]["B4"] = flat({"y3", "y4"});
  }
  m["warped"] = warped({"B1", "B2"}, {"B3", "B4"}, fiber(4, 8, {"u1", "u2", "u3", "u4"}), "1", "B~3 x B~4");
  note(m, "arithmetic-slip",
       verbatim ? "stated n + m = n - d = 6 - 4 = 4, but 6 - 4 = 2; with n = 6 the projection is pi_2"
                : "stated n + m = n - d = 6 - 4 = 4 for an (8-4)-PNDP; with n = 8 the projection is pi_4");
  note(m, "constant-warp-forced", "with flat factors and lambda = 0 the warp must be constant");
  return m;
}

inline Json m_pndp() {
  Json m = header("m_pndp", "dt1^2 + dt2^2 - (dt3^2 + dt4^2) with virtual dimension -2", kWarpChecks);
  m["metrics"]["B1"] = flat({"t1"});
  m["metrics"]["B2"] = flat({"t2"});
  m["warped"] = warped({"B1"}, {"B2"}, fiber(2, 4, {"t3", "t4"}), "1", "R");
  return m;
}

inline Json nonconstant_warp() {
  Json m = header("nonconstant_warp", "line with f = e^x over a hyperbolic plane of curvature -3", kWarpChecks);
  m["metrics"]["B1"] = flat({"x"}, -1.0, 1.0);
  Json h;
  h["coordinates"] = {coordinate("p", -1.0, 1.0), coordinate("q", 0.5, 2.0)};
  h["diagonal"] = {"(div 1 (mul 3 (pow q 2)))", "(div 1 (mul 3 (pow q 2)))"};
  m["metrics"]["H"] = std::move(h);
  m["warped"] = warped({"B1"}, {"H"}, fiber(3, 6, {"u", "v", "w"}), "(exp x)", "H^2");
  return m;
}

inline Json sphere_warp() {
  Json m = header("sphere_warp", "line with f = e^x over the unit 2-sphere", {"blocks"});
  m["metrics"]["B1"] = flat({"x"}, -1.0, 1.0);
  Json s;
  s["coordinates"] = {coordinate("theta", 0.3, 2.8), coordinate("phi", 0.0, 6.0)};
  s["diagonal"] = {"1", "(pow (sin theta) 2)"};
  m["metrics"]["S2"] = std::move(s);
  m["warped"] = warped({"B1"}, {"S2"}, fiber(2, 4, {"u", "v"}), "(exp x)", "S^2");
  return m;
}

inline Json standalone(const std::string& id, const std::string& title, Json metric, double lambda) {
  Json m = header(id, title, {"einstein"});
  m["lambda"] = lambda;
  m["metrics"][id] = std::move(metric);
  m["metric"] = id;
  return m;
}

inline Json euclidean3() { return standalone("euclidean3", "Euclidean R^3", flat({"x", "y", "z"}), 0.0); }

inline Json polar_plane() {
  Json g;
  g["coordinates"] = {coordinate("r", 0.5, 3.0), coordinate("theta", 0.0, 6.0)};
  g["diagonal"] = {"1", "(pow r 2)"};
  return standalone("polar_plane", "flat plane in polar coordinates", std::move(g), 0.0);
}

inline Json unit_sphere() {
  Json g;
  g["coordinates"] = {coordinate("theta", 0.3, 2.8), coordinate("phi", 0.0, 6.0)};
  g["diagonal"] = {"1", "(pow (sin theta) 2)"};
  return standalone("unit_sphere", "unit 2-sphere", std::move(g), 1.0);
}

inline Json hyperbolic_plane() {
  Json g;
  g["coordinates"] = {coordinate("x", -1.0, 1.0), coordinate("y", 0.5, 2.0)};
  g["diagonal"] = {"(pow y -2)", "(pow y -2)"};
  return standalone("hyperbolic_plane", "upper half-plane of curvature -1", std::move(g), -1.0);
}

inline Json pointlike_spacetime() {
  Json m = header("pointlike_spacetime", "-dt^2 + dx^2 + dy^2 + dz^2 + dw^2 - (dpsi^2 + dphi^2 + dsigma^2)",
                  {"spacetime"});
  m["spacetime"] = {{"kind", "pointlike"}, {"n", 4}, {"phi", "0"}, {"fiber_dim", 3}, {"lambda", 0}};
  note(m, "lapse-square", "the stated lapse term -e^(2 Phi) dt is read as -e^(2 Phi) dt^2");
  return m;
}

inline Json wormhole(const std::string& id, const std::string& title, Json section) {
  Json m = header(id, title, {"wormhole"});
  m["wormhole"] = std::move(section);
  return m;
}

inline Json schwarzschild(bool alternative) {
  Json m = wormhole(alternative ? "schwarzschild_wormhole_alt" : "schwarzschild_wormhole",
                    alternative ? "Schwarzschild embedding with Phi = (1/2) ln(1 - 2M/r), M = 1"
                                : "Schwarzschild embedding with the stated xi and Phi, M = 1",
                    {{"profile", "schwarzschild"}, {"M", "1"}, {"alternative_phi", alternative}, {"samples", 100}});
  return m;
}

inline Json graphene_wormhole() {
  Json m = header("graphene_wormhole", "Schwarzschild 3+1 block with a flat negative fiber of dimension 3",
                  {"spacetime", "wormhole"});
  m["spacetime"] = {{"kind", "graphene"},
                    {"b", "2"},
                    {"phi", "(mul 1/2 (ln (sub 1 (div 2 r))))"},
                    {"f", "1"},
                    {"r_range", {2.5, 10.0}},
                    {"fiber_dim", 3},
                    {"lambda", 0}};
  m["wormhole"] = {{"profile", "schwarzschild"}, {"M", "1"}, {"alternative_phi", true}, {"samples", 100}};
  note(m, "graphene-lapse",
       "b = 2M with Phi = (1/2) ln(1 - 2M/r) makes the 3+1 block Schwarzschild, so the metric is Ricci-flat");
  return m;
}

struct Entry {
  std::string id;
  std::function<Json()> build;
};

inline const std::vector<Entry>& entries() {
  static const std::vector<Entry> all{
      {"euclidean3", euclidean3},
      {"polar_plane", polar_plane},
      {"unit_sphere", unit_sphere},
      {"hyperbolic_plane", hyperbolic_plane},
      {"example1", [] { return example1(); }},
      {"example2", [] { return example2("example2", "y", -1, kWarpChecks); }},
      {"example2_const", [] { return example2("example2_const", "2", -1, kWarpChecks); }},
      {"example2_verbatim",
       [] {
         Json m = example2("example2_verbatim", "y", 1, kWarpChecks);
         note(m, "fiber-sign", "fiber printed as +h(y)^2 (du^2 + dv^2 + dw^2) instead of -f^2 delta");
         return m;
       }},
      {"example3", [] { return example3("example3", kWarpChecks); }},
      {"example4", example4},
      {"example5", [] { return example5(false); }},
      {"example5_verbatim", [] { return example5(true); }},
      {"example6",
       [] {
         Json m = example1("example6", {"pndp"});
         m["title"] = "projection of example1";
         return m;
       }},
      {"example7",
       [] {
         Json m = example2("example7", "2", -1, {"pndp"});
         m["title"] = "projection of example2 with constant h";
         note(m, "constant-h", "the projection needs a passing check, which holds only for constant h");
         return m;
       }},
      {"example8",
       [] {
         Json m = example3("example8", {"pndp"});
         m["title"] = "projection of example3";
         return m;
       }},
      {"m_pndp", m_pndp},
      {"nonconstant_warp", nonconstant_warp},
      {"sphere_warp", sphere_warp},
      {"pointlike_spacetime", pointlike_spacetime},
      {"graphene_wormhole", graphene_wormhole},
      {"catenoid_wormhole",
       [] {
         return wormhole("catenoid_wormhole", "xi = sqrt(r^2 - 1)", {{"profile", "catenoid"}, {"r0", 1}, {"samples", 100}});
       }},
      {"cone_wormhole",
       [] {
         return wormhole("cone_wormhole", "xi = r", {{"profile", "cone"}, {"r0", 1}, {"r_range", {1.0, 5.0}}, {"samples", 100}});
       }},
      {"schwarzschild_wormhole", [] { return schwarzschild(false); }},
      {"schwarzschild_wormhole_alt", [] { return schwarzschild(true); }},
  };
  return all;
}

}  // namespace detail

inline std::vector<std::string> list() {
  std::vector<std::string> out;
  for (const auto& e : detail::entries()) out.push_back(e.id);
  return out;
}

inline Json manifest_json(const std::string& id) {
  for (const auto& e : detail::entries()) {
    if (e.id == id) return e.build();
  }
  throw UnknownExample("unknown catalog entry '" + id + "'");
}

inline std::string export_text(const std::string& id) { return manifest_json(id).dump(2) + "\n"; }

inline Manifest get(const std::string& id) { return manifest_from_json(manifest_json(id), "catalog:" + id); }

}  // namespace pndp::catalog

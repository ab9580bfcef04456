#pragma once

#include <string>
#include <vector>

#include "pndp/metric.hpp"

namespace pndp::models {

/// Flat metric sum of sign * dx_i^2 over the given coordinates.
inline Metric flat(const std::vector<std::string>& names, int sign = 1, Interval range = {-2.0, 2.0}) {
  std::vector<Coordinate> coords;
  for (const auto& n : names) coords.push_back({n, range});
  return Metric::diagonal(Chart(std::move(coords)), std::vector<Expr>(names.size(), Expr(sign)));
}

inline Metric euclidean3() { return flat({"x", "y", "z"}); }

/// dr^2 + r^2 dtheta^2 on an annulus.
inline Metric polar_plane() {
  const Expr r = sym("r");
  return Metric::diagonal(Chart({{"r", {0.5, 3.0}}, {"theta", {0.0, 6.0}}}), {Expr(1), square(r)});
}

/// a^2 (dtheta^2 + sin^2 theta dphi^2), away from the poles. Einstein with lambda = 1/a^2.
inline Metric round_sphere(const std::string& theta = "theta", const std::string& phi = "phi",
                           const Rational& radius = Rational(1)) {
  const Expr a2 = square(Expr(radius));
  return Metric::diagonal(Chart({{theta, {0.3, 2.8}}, {phi, {0.0, 6.0}}}),
                          {a2, a2 * square(sin(sym(theta)))});
}

inline Metric unit_sphere() { return round_sphere(); }

/// (dx^2 + dy^2) / (k y^2) on the upper half plane. Gaussian curvature -k, so lambda = -k.
inline Metric hyperbolic_plane(const std::string& x = "x", const std::string& y = "y",
                               const Rational& k = Rational(1)) {
  const Expr c = reciprocal(Expr(k) * square(sym(y)));
  return Metric::diagonal(Chart({{x, {-1.0, 1.0}}, {y, {0.5, 2.0}}}), {c, c});
}

/// dt^2 + dx^2 + dy^2 + dz^2 - (du^2 + dv^2) on the six underlying coordinates.
inline Metric ricci_flat_pndp6() {
  std::vector<Coordinate> coords;
  for (const char* n : {"t", "x", "y", "z", "u", "v"}) coords.push_back({n, {-2.0, 2.0}});
  return Metric::diagonal(Chart(std::move(coords)), {1, 1, 1, 1, -1, -1}, 4 - 2);
}

}  // namespace pndp::models

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pndp/einstein.hpp"
#include "pndp/warped.hpp"

namespace pndp {

/// Formal dimension under suspension (+1) and desuspension (-1).
struct SuspensionDim {
  int value = 0;
  friend bool operator==(SuspensionDim, SuspensionDim) = default;
};

[[nodiscard]] inline SuspensionDim suspend(SuspensionDim x, int k) { return {x.value + k}; }

/// dim E* = dim M* - dim F*
[[nodiscard]] inline int inverse_bundle_dim(int total_dim, int fiber_dim) { return total_dim - fiber_dim; }

enum class PndpType { TypeI, TypeII, NegativeVirtual };

inline const char* type_name(PndpType t) {
  switch (t) {
    case PndpType::TypeI: return "TypeI";
    case PndpType::TypeII: return "TypeII";
    default: return "NegativeVirtual";
  }
}

enum class TargetKind { EinsteinFactor, Point, Desuspension };

struct ProjectionTarget {
  TargetKind kind = TargetKind::Point;
  int dim = 0;
  std::string label;
  std::vector<std::string> coordinates;  ///< chart of the B~ factor, when that is the target
};

inline std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct PNDPDescriptor {
  int n = 0;
  int n_prime = 0;
  int n_tilde = 0;
  int d = 0;
  int m = 0;
  double lambda = 0.0;
  int virtual_total = 0;
  PndpType type = PndpType::TypeI;
  ProjectionTarget target;
  std::string metric_ref = "g";

  /// (pi_{n-d}, lambda, (n, m), g)
  [[nodiscard]] std::string quadruple() const {
    return "(pi_" + std::to_string(virtual_total) + ", " + format_real(lambda) + ", (" + std::to_string(n) + ", " +
           std::to_string(m) + "), " + metric_ref + ")";
  }

  /// e.g. "(4-2)-PNDP"
  [[nodiscard]] std::string label() const { return "(" + std::to_string(n) + "-" + std::to_string(d) + ")-PNDP"; }
};

inline ProjectionTarget projection_target(const WarpedSpec& spec) {
  const int v = spec.n() - spec.d();
  ProjectionTarget t;
  if (v > 0) {
    t.kind = TargetKind::EinsteinFactor;
    t.dim = spec.n_tilde();
    t.label = spec.tilde_label;
    if (spec.base_tilde) t.coordinates = spec.base_tilde->chart().names();
  } else if (v == 0) {
    t.kind = TargetKind::Point;
    t.label = "point";
  } else {
    t.kind = TargetKind::Desuspension;
    t.dim = suspend({0}, v).value;
    t.label = "Sigma^" + std::to_string(v) + "(p)";
  }
  return t;
}

/// Fills the descriptor from a spec whose PNDP Einstein check passed.
inline PNDPDescriptor classify(const WarpedSpec& spec, const EinsteinReport& report, std::string metric_ref = "g") {
  if (report.system != "pndp" || !report.pass() || !report.lambda) {
    throw NotValidated("classification needs a passing PNDP Einstein check");
  }
  PNDPDescriptor out;
  out.n = spec.n();
  out.n_prime = spec.n_prime();
  out.n_tilde = spec.n_tilde();
  out.d = spec.d();
  out.m = spec.m();
  out.lambda = *report.lambda;
  out.virtual_total = out.n + out.m;
  out.type = out.virtual_total > 0 ? PndpType::TypeII
                                   : (out.virtual_total == 0 ? PndpType::TypeI : PndpType::NegativeVirtual);
  out.target = projection_target(spec);
  out.metric_ref = std::move(metric_ref);
  if (out.type == PndpType::TypeII && out.n_tilde != out.n - out.d) {
    throw NotValidated("projection factor B~ must have dimension n - d");
  }
  return out;
}

struct ChecklistItem {
  std::string key;
  std::string description;
  bool pass = false;
  std::string note;
};

struct StructureChecklist {
  std::vector<ChecklistItem> items;
  bool special_case = false;  ///< B' Einstein with the same lambda, so B' = B~
  int projection_index = 0;   ///< n - d

  [[nodiscard]] bool pass() const {
    for (const auto& i : items) {
      if (!i.pass) return false;
    }
    return true;
  }

  [[nodiscard]] const ChecklistItem* find(std::string_view key) const {
    for (const auto& i : items) {
      if (i.key == key) return &i;
    }
    return nullptr;
  }
};

/// Itemized check of the PNDP structural requirements. Never throws for a
/// failed item; each failure is recorded in the checklist.
inline StructureChecklist validate_pndp_structure(const WarpedSpec& spec, double lambda, std::size_t samples = 20,
                                                  std::uint64_t seed = 0) {
  StructureChecklist out;
  out.projection_index = spec.n() - spec.d();
  auto same_lambda = [&](const Metric& g, std::string& note) {
    const LambdaEstimate e = infer_lambda(g, samples, seed);
    if (!e.lambda) {
      note = e.reason;
      return false;
    }
    note = "lambda = " + format_real(*e.lambda);
    return std::fabs(*e.lambda - lambda) <= 1e-7 * (1.0 + std::fabs(lambda));
  };

  ChecklistItem a{"tilde_einstein", "B~ is Einstein with the shared lambda", true, "no B~ factor"};
  if (spec.base_tilde) a.pass = same_lambda(*spec.base_tilde, a.note);
  out.items.push_back(a);

  ChecklistItem b{"warp_split", "f = f' + f~ with each part on its own factor", true, ""};
  try {
    detail::check_warp_symbols(spec.f_prime, spec.base_prime, "f'");
    detail::check_warp_symbols(spec.f_tilde, spec.base_tilde, "f~");
  } catch (const ForeignWarpSymbol& e) {
    b.pass = false;
    b.note = e.what();
  }
  out.items.push_back(b);

  ChecklistItem c{"fiber", "fiber metric is -delta and rank(E) = 2d", true, ""};
  if (spec.fiber.sign != -1) {
    c.pass = false;
    c.note = "fiber metric is +delta";
  } else if (!spec.fiber.is_pndp()) {
    c.pass = false;
    c.note = "rank(E) = " + std::to_string(spec.fiber.obstruction_rank) + " gives m = " +
             std::to_string(spec.fiber.virtual_dim()) + " instead of -d";
  }
  out.items.push_back(c);

  ChecklistItem dd{"regime", "n - d > 0 requires dim B' = d", true, ""};
  if (out.projection_index > 0 && spec.n_prime() != spec.d()) {
    dd.pass = false;
    dd.note = "dim B' = " + std::to_string(spec.n_prime()) + ", d = " + std::to_string(spec.d());
  }
  out.items.push_back(dd);

  if (out.projection_index > 0 && spec.base_prime) {
    std::string note;
    out.special_case = same_lambda(*spec.base_prime, note);
  }
  return out;
}

}  // namespace pndp

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pndp/classify.hpp"
#include "pndp/einstein.hpp"
#include "pndp/manifest.hpp"
#include "pndp/spacetime.hpp"

namespace pndp {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tolerance;
};

enum class CheckStatus { Pass, Fail, Error };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "error";
  }
}

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Error;
  std::string summary;
  Json details = Json::object();
};

struct Finding {
  std::string id;
  std::string message;
};

struct RunReport {
  std::string manifest_id;
  std::string manifest_digest;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  std::vector<CheckEntry> checks;
  std::vector<Finding> findings;
  int status = 1;

  std::optional<EinsteinReport> einstein;
  std::optional<EinsteinReport> pndp;
  std::optional<PNDPDescriptor> descriptor;
  std::optional<StructureChecklist> structure;
  std::optional<BlockComparison> blocks;
  std::optional<WormholeReport> wormhole;
  std::optional<LambdaEstimate> lambda;

  [[nodiscard]] const CheckEntry* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  [[nodiscard]] bool has_finding(std::string_view id) const {
    for (const auto& f : findings) {
      if (f.id == id) return true;
    }
    return false;
  }

  [[nodiscard]] Json to_json() const {
    Json out;
    out["manifest_id"] = manifest_id;
    out["manifest_digest"] = manifest_digest;
    out["seed"] = seed;
    out["samples"] = samples;
    out["tolerance"] = tolerance;
    Json cs = Json::array();
    for (const auto& c : checks) {
      Json e;
      e["name"] = c.name;
      e["status"] = status_name(c.status);
      e["summary"] = c.summary;
      e["details"] = c.details;
      cs.push_back(std::move(e));
    }
    out["checks"] = std::move(cs);
    Json fs = Json::array();
    for (const auto& f : findings) fs.push_back({{"id", f.id}, {"message", f.message}});
    out["findings"] = std::move(fs);
    out["status"] = status;
    return out;
  }

  [[nodiscard]] std::string to_json_text() const { return to_json().dump(2) + "\n"; }

  [[nodiscard]] std::string to_text() const {
    std::string out = "manifest " + manifest_id + " (" + manifest_digest + ")\n";
    out += "seed " + std::to_string(seed) + ", samples " + std::to_string(samples) + ", tolerance " +
           format_real(tolerance) + "\n";
    for (const auto& c : checks) out += "[" + std::string(status_name(c.status)) + "] " + c.name + ": " + c.summary + "\n";
    if (!findings.empty()) {
      out += "findings:\n";
      for (const auto& f : findings) out += "  - " + f.id + ": " + f.message + "\n";
    }
    out += "status " + std::to_string(status) + "\n";
    return out;
  }
};

namespace detail {

inline Json real_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline Json lambda_json(const std::optional<double>& v) { return v ? real_json(*v) : Json(nullptr); }

inline Json equation_json(const EquationResult& e) {
  Json j;
  j["name"] = e.name;
  j["statement"] = e.statement;
  j["points"] = e.points;
  j["skipped"] = e.skipped;
  j["max_abs"] = real_json(e.max_abs);
  j["mean_abs"] = real_json(e.mean_abs);
  j["min_abs"] = real_json(e.min_abs);
  j["pass"] = e.pass;
  return j;
}

inline Json einstein_json(const EinsteinReport& r) {
  Json j;
  j["system"] = r.system;
  j["regime"] = r.regime;
  j["lambda"] = lambda_json(r.lambda);
  j["mu"] = r.mu;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["tolerance"] = r.tolerance;
  Json eqs = Json::array();
  for (const auto& e : r.equations) eqs.push_back(equation_json(e));
  j["equations"] = std::move(eqs);
  j["pass"] = r.pass();
  return j;
}

inline Json estimate_json(const LambdaEstimate& e) {
  Json j;
  j["lambda"] = lambda_json(e.lambda);
  j["spread"] = real_json(e.spread);
  j["points"] = e.points;
  j["reason"] = e.reason;
  return j;
}

inline Json descriptor_json(const PNDPDescriptor& d) {
  Json j;
  j["label"] = d.label();
  j["quadruple"] = d.quadruple();
  j["n"] = d.n;
  j["n_prime"] = d.n_prime;
  j["n_tilde"] = d.n_tilde;
  j["d"] = d.d;
  j["m"] = d.m;
  j["lambda"] = real_json(d.lambda);
  j["virtual_total"] = d.virtual_total;
  j["type"] = type_name(d.type);
  Json t;
  t["label"] = d.target.label;
  t["dim"] = d.target.dim;
  t["coordinates"] = d.target.coordinates;
  j["target"] = std::move(t);
  return j;
}

inline Json checklist_json(const StructureChecklist& c) {
  Json j;
  Json items = Json::array();
  for (const auto& i : c.items) {
    items.push_back({{"key", i.key}, {"description", i.description}, {"pass", i.pass}, {"note", i.note}});
  }
  j["items"] = std::move(items);
  j["special_case"] = c.special_case;
  j["projection_index"] = c.projection_index;
  return j;
}

inline Json blocks_json(const BlockComparison& b) {
  Json j;
  j["valid_points"] = b.valid_points;
  j["max_gap_prime"] = real_json(b.max_gap_prime);
  j["max_gap_tilde"] = real_json(b.max_gap_tilde);
  j["max_gap_fiber"] = real_json(b.max_gap_fiber);
  j["max_gap_fiber_flipped"] = real_json(b.max_gap_fiber_flipped);
  j["max_abs_mixed"] = real_json(b.max_abs_mixed);
  j["tilde_hessian_vanishes"] = b.tilde_hessian_vanishes;
  return j;
}

inline Json wormhole_json(const WormholeReport& w) {
  Json j;
  j["profile"] = w.profile;
  j["b"] = to_prefix(w.b);
  j["rho"] = to_prefix(w.rho);
  j["r0"] = w.r0;
  j["r_range"] = {w.r_range.lo, w.r_range.hi};
  j["samples"] = w.samples;
  j["throat_gap"] = real_json(w.throat_gap);
  j["xi_prime_diverges"] = w.xi_prime_diverges;
  j["throat_undefined"] = w.throat_undefined;
  j["throat_pass"] = w.throat_pass;
  j["xi_at_throat"] = real_json(w.xi_at_throat);
  j["flare_points"] = w.flare_points;
  j["flare_skipped"] = w.flare_skipped;
  j["flare_b_pass"] = w.flare_b_pass;
  j["flare_xi_pass"] = w.flare_xi_pass;
  j["max_b_form"] = real_json(w.max_b_form);
  j["max_xi_form"] = real_json(w.max_xi_form);
  j["max_identity_gap"] = real_json(w.max_identity_gap);
  j["max_morris_thorne_gap"] = real_json(w.max_morris_thorne_gap);
  j["forms_agree"] = w.forms_agree;
  j["rho_negative"] = w.rho_negative;
  return j;
}

inline bool same_lambda(double a, double b) { return std::fabs(a - b) <= 1e-6 * (1.0 + std::fabs(b)); }

class Runner {
 public:
  Runner(const Manifest& m, const RunOptions& opt) : m_(m) {
    rep_.manifest_id = m.id;
    rep_.manifest_digest = manifest_digest(m);
    rep_.seed = opt.seed.value_or(m.seed);
    rep_.samples = opt.samples.value_or(m.samples);
    rep_.tolerance = opt.tolerance.value_or(m.tolerance);
    check_opt_ = CheckOptions{rep_.samples, rep_.seed, rep_.tolerance};
  }

  RunReport run() {
    for (const auto& name : m_.checks) {
      CheckEntry entry;
      entry.name = name;
      try {
        if (name == "blocks") {
          blocks(entry);
        } else if (name == "einstein") {
          einstein(entry);
        } else if (name == "pndp") {
          pndp(entry);
        } else if (name == "spacetime") {
          spacetime(entry);
        } else {
          wormhole(entry);
        }
      } catch (const std::exception& e) {
        entry.status = CheckStatus::Error;
        entry.summary = e.what();
        entry.details = Json::object();
        entry.details["error"] = e.what();
        finding("error:" + name, e.what());
      }
      rep_.checks.push_back(std::move(entry));
    }
    for (const auto& n : m_.notes) finding(n.id, n.message);
    bool ok = !rep_.checks.empty();
    for (const auto& c : rep_.checks) ok = ok && c.status == CheckStatus::Pass;
    rep_.status = ok ? 0 : 1;
    return std::move(rep_);
  }

 private:
  void finding(std::string id, std::string message) { rep_.findings.push_back({std::move(id), std::move(message)}); }

  static CheckStatus verdict(bool pass) { return pass ? CheckStatus::Pass : CheckStatus::Fail; }

  double lambda_for(const WarpedSpec& spec) {
    if (!rep_.lambda) rep_.lambda = resolve_lambda(spec, rep_.samples, rep_.seed);
    if (!rep_.lambda->lambda) throw NotValidated("no lambda given and B~ is not Einstein: " + rep_.lambda->reason);
    return *rep_.lambda->lambda;
  }

  void blocks(CheckEntry& entry) {
    const WarpedSpec& spec = *m_.warped;
    const BlockComparison cmp = compare_block_ricci(spec, 50, rep_.seed);
    rep_.blocks = cmp;
    entry.details = blocks_json(cmp);
    const bool pass = cmp.agrees(1e-7, 1e-9);
    entry.status = verdict(pass);
    entry.summary = std::string(pass ? "block Ricci matches" : "block Ricci differs from") +
                    " the direct Ricci at " + std::to_string(cmp.valid_points) + " points (max gap " +
                    format_real(cmp.max_gap()) + ")";
    if (cmp.fiber_sign_discrepancy(1e-7)) {
      finding("block-ricci-fiber-sign", "fiber block matches the direct Ricci only after a sign flip");
    }
    if (!cmp.tilde_hessian_vanishes) {
      finding("tilde-hessian-nonzero", "Hess~ f~ does not vanish, so the B~ block picks up warp terms");
    }
  }

  void einstein(CheckEntry& entry) {
    if (!m_.warped) {
      const Metric& g = m_.metrics.at(*m_.metric_ref);
      const LambdaEstimate est = infer_lambda(g, rep_.samples, rep_.seed);
      entry.details["metric"] = *m_.metric_ref;
      entry.details["estimate"] = estimate_json(est);
      bool pass = est.einstein();
      if (pass && m_.lambda) pass = same_lambda(*est.lambda, *m_.lambda);
      entry.status = verdict(pass);
      entry.summary = est.lambda ? "Einstein with lambda = " + format_real(*est.lambda) : "not Einstein: " + est.reason;
      if (!est.lambda) finding("not-einstein", *m_.metric_ref + ": " + est.reason);
      return;
    }
    const WarpedSpec& spec = *m_.warped;
    const double lambda = lambda_for(spec);
    const LambdaEstimate total = infer_lambda(warped_metric(spec), rep_.samples, rep_.seed);
    entry.details["lambda"] = lambda;
    entry.details["lambda_source"] = rep_.lambda->reason;
    entry.details["warped_metric"] = estimate_json(total);
    bool pass = total.einstein() && same_lambda(*total.lambda, lambda);
    if (spec.d() >= 2) {
      EinsteinReport sys = check_warped_einstein_system(spec, lambda, 0.0, check_opt_);
      entry.details["system"] = einstein_json(sys);
      pass = pass && sys.pass();
      for (const auto& e : sys.equations) {
        if (!e.pass) {
          finding("einstein-residual:" + e.name,
                  e.statement + " fails with residual between " + format_real(e.min_abs) + " and " +
                      format_real(e.max_abs));
        }
      }
      rep_.einstein = std::move(sys);
    }
    entry.status = verdict(pass);
    entry.summary = total.lambda ? "warped metric is Einstein with lambda = " + format_real(*total.lambda)
                                 : "warped metric is not Einstein: " + total.reason;
  }

  void pndp(CheckEntry& entry) {
    const WarpedSpec& spec = *m_.warped;
    const double lambda = lambda_for(spec);
    const StructureChecklist list = validate_pndp_structure(spec, lambda, rep_.samples, rep_.seed);
    entry.details["lambda"] = lambda;
    entry.details["structure"] = checklist_json(list);
    for (const auto& item : list.items) {
      if (!item.pass) finding("structure:" + item.key, item.description + " fails: " + item.note);
    }
    rep_.structure = list;
    EinsteinReport sys = check_pndp_system(spec, lambda, check_opt_);
    entry.details["system"] = einstein_json(sys);
    for (const auto& e : sys.equations) {
      if (!e.pass) {
        finding("pndp-residual:" + e.name, e.statement + " fails with residual between " + format_real(e.min_abs) +
                                               " and " + format_real(e.max_abs));
      }
    }
    const bool pass = list.pass() && sys.pass();
    if (pass) {
      const PNDPDescriptor desc = classify(spec, sys);
      entry.details["classification"] = descriptor_json(desc);
      entry.summary = desc.label() + " " + type_name(desc.type) + " onto " + desc.target.label + " " + desc.quadruple();
      if (list.special_case) entry.summary += ", special case B' = B~";
      rep_.descriptor = desc;
    } else {
      entry.summary = "PNDP verification failed in the " + sys.regime + " regime";
    }
    rep_.pndp = std::move(sys);
    entry.status = verdict(pass);
  }

  void spacetime(CheckEntry& entry) {
    const SpacetimeSection& s = *m_.spacetime;
    const LambdaEstimate est = infer_lambda(s.metric, rep_.samples, rep_.seed);
    entry.details["kind"] = s.kind;
    entry.details["coordinates"] = s.metric.chart().names();
    entry.details["geometric_dim"] = s.metric.geometric_dim();
    entry.details["virtual_dim"] = s.metric.virtual_dim();
    entry.details["estimate"] = estimate_json(est);
    bool pass = est.einstein();
    if (pass && s.lambda) pass = same_lambda(*est.lambda, *s.lambda);
    entry.status = verdict(pass);
    entry.summary = s.kind + " metric of virtual dimension " + std::to_string(s.metric.virtual_dim()) +
                    (est.lambda ? ", Einstein with lambda = " + format_real(*est.lambda) : ", not Einstein");
  }

  void wormhole(CheckEntry& entry) {
    const WormholeSection& w = *m_.wormhole;
    const WormholeReport rep = flare_out_check(w.profile, w.r0, w.r_range, w.samples);
    entry.details = wormhole_json(rep);
    bool pass = rep.pass() && rep.max_morris_thorne_gap <= 1e-9;
    if (rep.throat_undefined) finding("throat-undefined", w.profile.name + ": xi' stays bounded at r0 and b(r0) != r0");
    if (w.mass) {
      const double M = w.mass->to_double();
      Domain dom;
      dom.set("r", {2.0 * M * (1.0 + 1e-9), 10.0 * M});
      const SampledComparison shape = compare_sampled(rep.b, Expr(Rational(2) * *w.mass), dom, w.samples, rep_.seed);
      const SampledComparison flamm = compare_sampled(w.profile.xi, flamm_embedding(*w.mass), dom, w.samples, rep_.seed);
      const RedshiftDomain red = redshift_domain(w.profile, 50);
      const bool shape_ok = shape.valid_points > 0 && shape.one_sided_domain_failures == 0 && shape.max_gap <= 1e-9;
      const bool flamm_ok = flamm.valid_points > 0 && flamm.one_sided_domain_failures == 0 && flamm.max_gap <= 1e-9;
      entry.details["shape_constant_gap"] = real_json(shape.max_gap);
      entry.details["flamm_gap"] = real_json(flamm.max_gap);
      entry.details["redshift_undefined"] = red.undefined;
      entry.details["redshift_points"] = red.points;
      pass = pass && shape_ok && flamm_ok;
      if (shape_ok) finding("shape-function-constant", "b(r) = 2M identically on r in (2M, 10M]");
      if (flamm_ok) finding("flamm-embedding", "xi equals sqrt(8M(r - 2M)) on r in (2M, 10M]");
      if (!red.defined_everywhere()) {
        finding("redshift-domain", "e^(2 Phi) = 2M/r - 1 is negative for r > 2M; Phi is undefined at " +
                                       std::to_string(red.undefined) + " of " + std::to_string(red.points) +
                                       " sampled radii");
      }
      if (w.alternative_phi) finding("redshift-alternative", "Phi = (1/2) ln(1 - 2M/r) used instead of the stated Phi");
    }
    rep_.wormhole = rep;
    entry.status = verdict(pass);
    entry.summary = w.profile.name + ": throat " + (rep.throat_pass ? "ok" : "fails") + ", flare-out " +
                    (rep.flare_pass() ? "ok" : "fails") + " at " + std::to_string(rep.flare_points) + " radii";
  }

  const Manifest& m_;
  RunReport rep_;
  CheckOptions check_opt_;
};

}  // namespace detail

/// Runs every requested check. Module errors become report entries with
/// status "error".
inline RunReport run(const Manifest& manifest, const RunOptions& opt = {}) {
  return detail::Runner(manifest, opt).run();
}

}  // namespace pndp

#include "relfix/falsifier.hpp"

#include <algorithm>
#include <optional>
#include <thread>

namespace relfix {

const char* hypothesis_name(Hypothesis h) {
  switch (h) {
    case Hypothesis::None: return "none";
    case Hypothesis::A: return "a";
    case Hypothesis::B1: return "b1";
    case Hypothesis::B2: return "b2";
    case Hypothesis::C: return "c";
    case Hypothesis::D: return "d";
    case Hypothesis::E: return "e";
    case Hypothesis::U: return "u";
  }
  return "?";
}

std::optional<Hypothesis> hypothesis_from_name(const std::string& name) {
  for (Hypothesis h : {Hypothesis::None, Hypothesis::A, Hypothesis::B1, Hypothesis::B2,
                       Hypothesis::C, Hypothesis::D, Hypothesis::E, Hypothesis::U})
    if (name == hypothesis_name(h)) return h;
  return std::nullopt;
}

PhiChoice PhiChoice::fixed_phi(ControlFunction phi, std::string name) {
  PhiChoice choice;
  choice.kind = Kind::Fixed;
  choice.fixed = std::move(phi);
  choice.name = std::move(name);
  return choice;
}

std::uint64_t relation_count(int n) { return std::uint64_t{1} << (n * n); }

std::uint64_t map_count(int n) {
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c *= static_cast<std::uint64_t>(n);
  return c;
}

namespace {

constexpr double kAlphaMargin = 1e-9;

void check_spec(const SweepSpec& spec) {
  if (spec.n < 2 || spec.n > 4)
    throw Error("full enumeration supports carrier sizes 2 to 4 only");
  if (spec.phis.empty()) throw Error("sweep needs at least one control-function choice");
  if (spec.metric == MetricFamily::Custom) {
    if (!spec.custom_metric) throw Error("custom metric family needs a metric table");
    if (spec.custom_metric->size() != spec.n)
      throw Error("custom metric size disagrees with the sweep carrier");
    Witness ok = validate_metric(*spec.custom_metric);
    if (!ok.holds) throw Error("custom metric violates axiom '" + ok.note + "'");
  }
}

MetricTable metric_for(const SweepSpec& spec) {
  switch (spec.metric) {
    case MetricFamily::Path: return MetricTable::path(spec.n);
    case MetricFamily::Uniform: return MetricTable::uniform(spec.n);
    case MetricFamily::Custom: return *spec.custom_metric;
  }
  throw Error("unknown metric family");
}

double pair_distance(const MetricTable& m, int i, int j) { return i == j ? 0.0 : m(i, j); }

/// The per-instance linear coefficient: the worst image-to-source distance
/// ratio over related distinct pairs, plus a margin. Nothing is returned when
/// no modulus below one exists.
std::optional<double> per_instance_alpha(const FiniteRelation& r, const SelfMap& t,
                                         const MetricTable& m) {
  double worst = 0.0;
  for (int x = 0; x < r.carrier_size(); ++x)
    for (int y = 0; y < r.carrier_size(); ++y) {
      if (x == y || !r.contains(x, y)) continue;
      worst = std::max(worst, pair_distance(m, t(x), t(y)) / m(x, y));
    }
  const double alpha = worst + kAlphaMargin;
  if (alpha >= 1.0) return std::nullopt;
  return alpha;
}

bool contraction_holds(const FiniteRelation& r, const SelfMap& t, const MetricTable& m,
                       const ControlFunction& phi) {
  for (int x = 0; x < r.carrier_size(); ++x)
    for (int y = 0; y < r.carrier_size(); ++y) {
      if (!r.contains(x, y)) continue;
      const double d = pair_distance(m, x, y);
      if (pair_distance(m, t(x), t(y)) > phi(d < 0.0 ? 0.0 : d)) return false;
    }
  return true;
}

struct ConditionBits {
  bool b1 = false, b2 = false, d = false, e = false;
  // a and c hold automatically on finite carriers.
  bool all() const { return b1 && b2 && d && e; }
};

struct SweepTask {
  const SweepSpec* spec;
  MetricTable metric;
  Carrier carrier;
  std::uint64_t maps;
  std::size_t separation_cap = 1000;
};

std::optional<ControlFunction> resolve_phi(const PhiChoice& choice, const FiniteRelation& r,
                                           const SelfMap& t, const MetricTable& m) {
  if (choice.kind == PhiChoice::Kind::Fixed) return choice.fixed;
  if (auto alpha = per_instance_alpha(r, t, m)) return ControlFunction::linear(*alpha);
  return std::nullopt;
}

void validate_passing_instance(const SweepTask& task, const FiniteRelation& r, const SelfMap& t,
                               const ControlFunction& phi, IndexSet admissible,
                               std::uint64_t instance_id, std::uint64_t mask, std::uint64_t code,
                               int phi_index, SweepOutcome& out) {
  const int n = task.spec->n;
  FiniteInstance inst{task.carrier, task.metric, r, t, phi, std::nullopt};

  auto violation = [&](const std::string& claim, const std::string& detail) {
    out.violations.push_back({instance_id, mask, code, phi_index, claim, detail});
  };

  // Consistency between the sweep's inline gating and the certifier's view.
  HypothesisReport report = check_hypotheses(ProblemInstance{inst});
  if (!report.all_pass()) {
    violation("hypothesis-check-disagreement",
              "inline gate passed but condition " + report.first_failure()->id + " fails");
    return;
  }

  for (int s : set_to_indices(admissible)) {
    SolveResult sr = picard(inst, s, -1);
    if (sr.status != SolveStatus::FixedPoint)
      violation("existence", "start " + std::to_string(s) + " ends in " + status_name(sr.status));
    if (!sr.trace_preserving)
      violation("iterate-preservation",
                "trace from start " + std::to_string(s) + " leaves the relation");
  }

  if (is_Rs_connected(r, t.image_set()).holds) {
    UniquenessCertificate cert = certify_uniqueness(inst, report);
    if (!cert.unique)
      violation("uniqueness", std::to_string(cert.fixed_points.size()) +
                                  " fixed points despite a connected image");
    if (cert.collapse_alarm)
      violation("chain-collapse", "a chain table failed to reach zero within " +
                                      std::to_string(2 * n) + " steps");
  }
}

void scan_dropped_instance(const SweepTask& task, const FiniteRelation& r, const SelfMap& t,
                           const ControlFunction& phi, IndexSet admissible,
                           std::uint64_t instance_id, std::uint64_t mask, std::uint64_t code,
                           int phi_index, SweepOutcome& out) {
  const Hypothesis drop = task.spec->drop;
  FiniteInstance inst{task.carrier, task.metric, r, t, phi, std::nullopt};

  auto separation = [&](const std::string& claim, const std::string& detail) {
    out.separations.push_back({instance_id, mask, code, phi_index, claim, detail});
  };

  if (drop == Hypothesis::U) {
    std::vector<int> fixed;
    for (int i = 0; i < task.spec->n; ++i)
      if (t(i) == i) fixed.push_back(i);
    if (fixed.size() >= 2)
      separation("multiple-fixed-points",
                 std::to_string(fixed.size()) + " fixed points under a disconnected image");
    return;
  }

  // Existence-side drops: watch the conclusion and the iterate invariant.
  bool existence_failed = false, escape_seen = false;
  for (int s : set_to_indices(admissible)) {
    SolveResult sr = picard(inst, s, -1);
    if (sr.status != SolveStatus::FixedPoint && !existence_failed) {
      existence_failed = true;
      separation("existence-fails",
                 "start " + std::to_string(s) + " ends in " + status_name(sr.status));
    }
    if (!sr.trace_preserving && !escape_seen) {
      escape_seen = true;
      separation("iterate-escapes-relation",
                 "trace from start " + std::to_string(s) + " leaves the relation");
    }
  }
  bool any_fixed = false;
  for (int i = 0; i < task.spec->n && !any_fixed; ++i) any_fixed = t(i) == i;
  if (!any_fixed) separation("no-fixed-point", "the map has no fixed point at all");
}

void sweep_mask_range(const SweepTask& task, std::uint64_t mask_lo, std::uint64_t mask_hi,
                      SweepOutcome& out) {
  const SweepSpec& spec = *task.spec;
  const int n = spec.n;
  const int phi_count = static_cast<int>(spec.phis.size());

  for (std::uint64_t mask = mask_lo; mask < mask_hi; ++mask) {
    const FiniteRelation r = FiniteRelation::from_mask(n, mask);
    for (std::uint64_t code = 0; code < task.maps; ++code) {
      const SelfMap t = SelfMap::from_code(n, code);
      const IndexSet admissible = admissible_starts(r, t);
      const bool b1 = is_T_closed(r, t).holds;
      std::optional<bool> b2_cache;
      auto b2 = [&]() {
        if (!b2_cache) b2_cache = is_locally_T_transitive(r, t).holds;
        return *b2_cache;
      };

      for (int pi = 0; pi < phi_count; ++pi) {
        ++out.instances_checked;
        const std::uint64_t instance_id =
            (mask * task.maps + code) * static_cast<std::uint64_t>(phi_count) +
            static_cast<std::uint64_t>(pi);

        std::optional<ControlFunction> phi = resolve_phi(spec.phis[pi], r, t, task.metric);
        ConditionBits bits;
        bits.d = admissible != 0;
        bits.b1 = b1;
        if (spec.phis[pi].kind == PhiChoice::Kind::PerInstanceLinear) {
          bits.e = phi.has_value();  // alpha was chosen above every ratio
        } else {
          bits.e = phi && contraction_holds(r, t, task.metric, *phi);
        }
        if (!phi) continue;  // no linear modulus exists; instance carries no claim

        if (spec.drop == Hypothesis::None) {
          if (bits.d && bits.e && bits.b1 && b2()) {
            bits.b2 = true;
            ++out.instances_validated;
            validate_passing_instance(task, r, t, *phi, admissible, instance_id, mask, code, pi,
                                      out);
          }
          continue;
        }

        // Drop mode: the selected hypothesis must fail while the rest hold.
        // Conditions a and c hold automatically on finite carriers, so those
        // drops can never produce candidates; the loop still counts them.
        bool candidate = false;
        switch (spec.drop) {
          case Hypothesis::A:
          case Hypothesis::C:
            candidate = false;
            break;
          case Hypothesis::B1:
            candidate = bits.d && bits.e && !bits.b1 && b2();
            break;
          case Hypothesis::B2:
            candidate = bits.d && bits.e && bits.b1 && !b2();
            break;
          case Hypothesis::D:
            candidate = !bits.d && bits.e && bits.b1 && b2();
            break;
          case Hypothesis::E:
            candidate = bits.d && !bits.e && bits.b1 && b2();
            break;
          case Hypothesis::U:
            candidate = bits.d && bits.e && bits.b1 && b2() &&
                        !is_Rs_connected(r, t.image_set()).holds;
            break;
          default:
            break;
        }
        if (candidate) {
          ++out.instances_validated;
          scan_dropped_instance(task, r, t, *phi, admissible, instance_id, mask, code, pi, out);
        }
      }
    }
  }
}

SweepOutcome run_sweep(const SweepSpec& spec) {
  check_spec(spec);
  SweepTask task{&spec, metric_for(spec), Carrier::numbered(spec.n), map_count(spec.n)};

  const std::uint64_t masks = relation_count(spec.n);
  unsigned workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, masks));

  std::vector<SweepOutcome> parts(workers);
  if (workers <= 1) {
    sweep_mask_range(task, 0, masks, parts[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (masks + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = std::min<std::uint64_t>(masks, w * chunk);
      const std::uint64_t hi = std::min<std::uint64_t>(masks, lo + chunk);
      pool.emplace_back([&task, lo, hi, &parts, w] { sweep_mask_range(task, lo, hi, parts[w]); });
    }
    for (auto& th : pool) th.join();
  }

  SweepOutcome merged;
  for (auto& part : parts) {
    merged.instances_checked += part.instances_checked;
    merged.instances_validated += part.instances_validated;
    merged.violations.insert(merged.violations.end(), part.violations.begin(),
                             part.violations.end());
    merged.separations.insert(merged.separations.end(), part.separations.begin(),
                              part.separations.end());
  }
  auto by_id = [](const Finding& a, const Finding& b) {
    return a.instance_id != b.instance_id ? a.instance_id < b.instance_id : a.claim < b.claim;
  };
  std::sort(merged.violations.begin(), merged.violations.end(), by_id);
  std::sort(merged.separations.begin(), merged.separations.end(), by_id);
  merged.separations_total = merged.separations.size();
  if (merged.separations.size() > task.separation_cap)
    merged.separations.resize(task.separation_cap);
  return merged;
}

}  // namespace

SweepOutcome sweep_theorem(const SweepSpec& spec) {
  if (spec.drop != Hypothesis::None)
    throw Error("theorem sweeps take no drop selector; use search_counterexample");
  return run_sweep(spec);
}

SweepOutcome search_counterexample(const SweepSpec& spec) {
  if (spec.drop == Hypothesis::None)
    throw Error("counterexample search needs a drop selector");
  return run_sweep(spec);
}

FiniteInstance materialize(const SweepSpec& spec, std::uint64_t relation_mask,
                           std::uint64_t map_code, int phi_index) {
  check_spec(spec);
  if (phi_index < 0 || phi_index >= static_cast<int>(spec.phis.size()))
    throw Error("phi index out of range");
  const MetricTable metric = metric_for(spec);
  const FiniteRelation r = FiniteRelation::from_mask(spec.n, relation_mask);
  const SelfMap t = SelfMap::from_code(spec.n, map_code);
  std::optional<ControlFunction> phi = resolve_phi(spec.phis[static_cast<std::size_t>(phi_index)], r, t, metric);
  if (!phi) throw Error("instance has no linear modulus below one; it was skipped in the sweep");
  return FiniteInstance{Carrier::numbered(spec.n), metric, r, t, *phi, std::nullopt};
}

SweepOutcome sweep_propositions(int n) {
  if (n < 2 || n > 4) throw Error("proposition sweeps support carrier sizes 2 to 4 only");
  SweepOutcome out;
  const Carrier carrier = Carrier::numbered(n);
  const std::vector<MetricTable> metrics = {MetricTable::path(n), MetricTable::uniform(n)};
  const std::vector<ControlFunction> phis = {ControlFunction::linear(0.5),
                                             ControlFunction::rational_shrink()};
  const std::uint64_t masks = relation_count(n);
  const std::uint64_t maps = map_count(n);

  std::optional<Finding> sep_lt, sep_ltt_lt, sep_tt, sep_ltt_tt;
  std::uint64_t identity_code = 0;
  {
    std::uint64_t pow = 1;
    for (int i = 0; i < n; ++i) {
      identity_code += static_cast<std::uint64_t>(i) * pow;
      pow *= static_cast<std::uint64_t>(n);
    }
  }

  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const FiniteRelation r = FiniteRelation::from_mask(n, mask);
    const FiniteRelation rs = symmetric_closure(r);

    auto violation = [&](std::uint64_t code, const std::string& claim, const std::string& detail) {
      out.violations.push_back({mask * maps + code, mask, code, 0, claim, detail});
    };

    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (comparative(r, x, y) != rs.contains(x, y))
          violation(0, "comparative-iff-symmetric-closure",
                    "pair (" + std::to_string(x) + "," + std::to_string(y) + ")");

    const bool r_transitive = check_property(r, PropertyKind::Transitive).holds;
    const bool r_locally_transitive = is_locally_transitive(r).holds;
    if (r_transitive && !r_locally_transitive)
      violation(0, "transitive-implies-locally-transitive", "");
    if (r_locally_transitive && !r_transitive && !sep_lt)
      sep_lt = Finding{mask * maps + identity_code, mask, identity_code, 0,
                       "locally-transitive-not-transitive", "strict implication witness"};

    for (std::uint64_t code = 0; code < maps; ++code) {
      const SelfMap t = SelfMap::from_code(n, code);
      ++out.instances_checked;
      ++out.instances_validated;

      if (is_T_closed(r, t).holds) {
        if (!is_T_closed(rs, t).holds)
          violation(code, "symmetric-closure-stays-closed", "");
        for (int k = 0; k <= 2 * n; ++k)
          if (!is_T_closed(r, t.iterate(k)).holds)
            violation(code, "iterates-stay-closed", "iterate " + std::to_string(k));
      }

      const FiniteRelation on_image = restrict(r, t.image_set());
      const bool t_transitive = is_T_transitive(r, t).holds;
      if (t_transitive != check_property(on_image, PropertyKind::Transitive).holds)
        violation(code, "T-transitive-iff-image-restriction-transitive", "");
      const bool locally_t_transitive = is_locally_T_transitive(r, t).holds;
      if (locally_t_transitive != is_locally_transitive(on_image).holds)
        violation(code, "locally-T-transitive-iff-image-restriction-locally-transitive", "");

      if (r_transitive && !t_transitive)
        violation(code, "transitive-implies-T-transitive", "");
      if (r_locally_transitive && !locally_t_transitive)
        violation(code, "locally-transitive-implies-locally-T-transitive", "");
      if (t_transitive && !locally_t_transitive)
        violation(code, "T-transitive-implies-locally-T-transitive", "");

      if (locally_t_transitive && !r_locally_transitive && !sep_ltt_lt)
        sep_ltt_lt = Finding{mask * maps + code, mask, code, 0,
                             "locally-T-transitive-not-locally-transitive",
                             "strict implication witness"};
      if (t_transitive && !r_transitive && !sep_tt)
        sep_tt = Finding{mask * maps + code, mask, code, 0, "T-transitive-not-transitive",
                         "strict implication witness"};
      if (locally_t_transitive && !t_transitive && !sep_ltt_tt)
        sep_ltt_tt = Finding{mask * maps + code, mask, code, 0,
                             "locally-T-transitive-not-T-transitive", "strict implication witness"};

      for (const MetricTable& metric : metrics)
        for (const ControlFunction& phi : phis) {
          FiniteInstance inst{carrier, metric, r, t, phi, std::nullopt};
          if (verify_contraction(inst, false).holds != verify_contraction(inst, true).holds)
            violation(code, "contraction-agrees-on-symmetric-closure", phi.family_name());
        }
    }
  }

  for (const auto& sep : {sep_lt, sep_ltt_lt, sep_tt, sep_ltt_tt})
    if (sep) out.separations.push_back(*sep);
  out.separations_total = out.separations.size();
  return out;
}

}  // namespace relfix

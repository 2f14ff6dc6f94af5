#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relfix/certifier.hpp"
#include "relfix/instance.hpp"

namespace relfix {

enum class MetricFamily { Path, Uniform, Custom };

/// Hypothesis selector for necessity searches.
enum class Hypothesis { None, A, B1, B2, C, D, E, U };

const char* hypothesis_name(Hypothesis h);
std::optional<Hypothesis> hypothesis_from_name(const std::string& name);

/// Control-function choice for a sweep entry. PerInstanceLinear picks, per
/// (relation, map) pair, the coefficient max d(Tx,Ty)/d(x,y) over distinct
/// related pairs plus a 1e-9 margin, and skips the instance when no linear
/// modulus below 1 exists; that makes the contraction condition pass exactly
/// when a linear modulus exists.
struct PhiChoice {
  enum class Kind { PerInstanceLinear, Fixed };
  Kind kind = Kind::PerInstanceLinear;
  std::optional<ControlFunction> fixed;
  std::string name = "linear";

  static PhiChoice per_instance_linear() { return {}; }
  static PhiChoice fixed_phi(ControlFunction phi, std::string name);
};

struct SweepSpec {
  int n = 3;  // full enumeration demands 2 <= n <= 4
  MetricFamily metric = MetricFamily::Path;
  std::optional<MetricTable> custom_metric;
  std::vector<PhiChoice> phis = {PhiChoice::per_instance_linear(),
                                 PhiChoice::fixed_phi(ControlFunction::rational_shrink(),
                                                      "rational_shrink")};
  Hypothesis drop = Hypothesis::None;
  int workers = 0;  // 0: hardware concurrency
};

/// A theorem violation (no-drop sweeps) or a separating instance (drop
/// sweeps), addressed so it can be rebuilt and replayed standalone.
struct Finding {
  std::uint64_t instance_id = 0;
  std::uint64_t relation_mask = 0;
  std::uint64_t map_code = 0;
  int phi_index = 0;
  std::string claim;
  std::string detail;
};

struct SweepOutcome {
  std::uint64_t instances_checked = 0;
  /// Instances whose (non-dropped) hypotheses all held: the ones that carry a
  /// claim. Zero would make a violation-free sweep vacuous.
  std::uint64_t instances_validated = 0;
  std::vector<Finding> violations;   // nonempty only when a theorem breaks
  std::vector<Finding> separations;  // dropped-hypothesis findings, capped at 1000
  std::uint64_t separations_total = 0;  // found before the storage cap
};

std::uint64_t relation_count(int n);  // 2^(n*n)
std::uint64_t map_count(int n);       // n^n

/// Full enumeration of (relation, map, phi) triples: wherever the existence
/// hypotheses hold, Picard iteration must fix from every admissible start and
/// stay inside the relation; wherever the image is additionally connected,
/// the fixed point must be unique and every chain table must collapse within
/// 2n steps. Deterministic outcome for a given spec regardless of workers.
SweepOutcome sweep_theorem(const SweepSpec& spec);

/// Exhaustive checks of the relation-algebra facts the solver leans on, plus
/// the separating instances showing the one-way implications are strict.
SweepOutcome sweep_propositions(int n);

/// Enumerates instances where every hypothesis except the dropped one holds,
/// and reports those where the matching conclusion fails. An empty result is
/// reported as such — absence of counterexamples at this scale, not a proof.
SweepOutcome search_counterexample(const SweepSpec& spec);

/// Rebuilds the exact instance a finding addresses.
FiniteInstance materialize(const SweepSpec& spec, std::uint64_t relation_mask,
                           std::uint64_t map_code, int phi_index);

}  // namespace relfix

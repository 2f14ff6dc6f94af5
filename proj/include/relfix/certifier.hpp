#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relfix/solver.hpp"

namespace relfix {

struct ConditionEntry {
  std::string id;  // "a", "b1", "b2", "c", "d", "e"
  bool holds = false;
  Witness witness;
  std::string justification;
};

/// Per-condition verdicts for the existence theorem's hypotheses:
///   a  — relation-complete space
///   b1 — relation closed under the map
///   b2 — locally map-transitive relation
///   c  — map relation-continuous or relation d-self-closed
///   d  — an admissible start exists
///   e  — the contraction inequality on relation pairs
struct HypothesisReport {
  ConditionEntry a, b1, b2, c, d, e;
  std::string c_via;  // which disjunct(s) carried condition c
  IndexSet admissible = 0;
  std::optional<ContractionReport> contraction;
  bool relation_empty = false;  // diagnostic: the theory assumes a nonempty relation

  bool all_pass() const;
  const ConditionEntry* first_failure() const;
  std::vector<const ConditionEntry*> entries() const;
};

HypothesisReport check_hypotheses(const ProblemInstance& inst);

/// A path z_0 .. z_k with consecutive pairs comparative; k >= 1 always, so a
/// point is joined to itself only through an actual edge.
struct Path {
  std::vector<int> nodes;
  int length() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Shortest path from x to y through the symmetric closure, ties broken
/// toward the lexicographically smallest node sequence. Endpoints must lie in
/// `s`; intermediate nodes may use the whole carrier. Returns nothing if no
/// path of length <= max_len exists (max_len < 0 means the carrier size).
std::optional<Path> find_path(const FiniteRelation& r, IndexSet s, int x, int y, int max_len = -1);

/// Every pair u,v in s admits a z in the carrier comparative with both.
Witness is_Rs_directed(const FiniteRelation& r, IndexSet s);

/// Every pair u,v in s (the diagonal included) is comparative.
Witness is_complete_on(const FiniteRelation& r, IndexSet s);

/// Every pair u,v in s is joined by a path in the symmetric closure.
Witness is_Rs_connected(const FiniteRelation& r, IndexSet s);

/// One edge of a uniqueness chain: the distances d(T^n z_i, T^n z_{i+1})
/// recorded until the two orbits merge.
struct ChainTable {
  int from = 0;
  int to = 0;
  std::vector<double> values;
  bool collapsed = false;  // orbits merged within the iteration allowance
};

struct UniquenessCertificate {
  std::vector<int> fixed_points;
  bool image_connected = false;  // condition (u) on the image set
  std::optional<std::pair<int, int>> disconnected_pair;
  std::vector<Path> fixed_point_paths;  // between each pair of distinct fixed points
  std::vector<ChainTable> chains;
  bool unique = false;           // exactly one fixed point
  bool collapse_alarm = false;   // a chain failed to collapse; should never fire
  std::string note;
};

/// Enumerates the fixed points, checks image connectedness, and collapses the
/// chain tables along every path between distinct fixed points. Requires the
/// existence hypotheses to hold; throws Error otherwise. The overload taking
/// a report trusts it instead of re-deriving it.
UniquenessCertificate certify_uniqueness(const FiniteInstance& inst);
UniquenessCertificate certify_uniqueness(const FiniteInstance& inst,
                                         const HypothesisReport& report);

}  // namespace relfix

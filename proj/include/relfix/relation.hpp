#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "relfix/core.hpp"

namespace relfix {

class SelfMap;

/// A binary relation on an indexed finite carrier, stored as an n x n bit
/// matrix with value semantics. Row i holds the successors of point i.
class FiniteRelation {
 public:
  explicit FiniteRelation(int n);

  static FiniteRelation empty(int n) { return FiniteRelation(n); }
  static FiniteRelation universal(int n);
  static FiniteRelation from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);
  /// Unpacks a row-major bitmask, bit i*n+j <=> (i,j). Requires n <= 8 so the
  /// mask fits in 64 bits; this is the falsifier's enumeration encoding.
  static FiniteRelation from_mask(int n, std::uint64_t mask);

  int carrier_size() const { return n_; }
  bool contains(int i, int j) const;
  void add(int i, int j);
  void remove(int i, int j);

  bool is_empty() const;
  int pair_count() const;
  std::uint16_t row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

  /// All pairs in lexicographic order.
  std::vector<std::pair<int, int>> pairs() const;
  std::uint64_t mask() const;  // inverse of from_mask; requires n <= 8

  bool operator==(const FiniteRelation&) const = default;

 private:
  int n_;
  std::array<std::uint16_t, kMaxPoints> rows_{};
  void check_index(int i) const;
};

/// A total self-map T on the carrier: image(i) is the index of T(point i).
class SelfMap {
 public:
  SelfMap(int n, const std::vector<int>& image);

  static SelfMap identity(int n);
  static SelfMap constant(int n, int target);
  /// Decodes a base-n code: digit i (least significant first) is T(i).
  static SelfMap from_code(int n, std::uint64_t code);

  int carrier_size() const { return n_; }
  int operator()(int i) const;
  /// k-fold composition; iterate(0) is the identity.
  SelfMap iterate(int k) const;
  /// T(X) as an index set.
  IndexSet image_set() const;

  bool operator==(const SelfMap&) const = default;

 private:
  SelfMap() : n_(0) {}
  int n_;
  std::array<std::uint8_t, kMaxPoints> image_{};
};

enum class PropertyKind {
  Reflexive,
  Symmetric,
  Antisymmetric,
  Transitive,
  Complete,
  PartialOrder,
  Empty,
  Universal,
};

const char* property_name(PropertyKind kind);

/// An eventually periodic sequence of carrier points: the prefix is visited
/// once, then the cycle repeats forever. Every infinite walk over a finite
/// carrier is realizable in this shape without changing its range, which is
/// what makes the sequence-quantified definitions decidable.
struct IndexedSequence {
  std::vector<int> prefix;
  std::vector<int> cycle;  // never empty

  /// Set of points the infinite sequence visits.
  IndexSet range(int n) const;
};

// -- relation algebra ---------------------------------------------------------

FiniteRelation inverse(const FiniteRelation& r);
FiniteRelation symmetric_closure(const FiniteRelation& r);
/// Pairs of r with both endpoints in `points` (the carrier is unchanged).
FiniteRelation restrict(const FiniteRelation& r, IndexSet points);
/// True iff (x,y) or (y,x) is in r.
bool comparative(const FiniteRelation& r, int x, int y);

Witness check_property(const FiniteRelation& r, PropertyKind kind);

/// (x,y) in R implies (Tx,Ty) in R.
Witness is_T_closed(const FiniteRelation& r, const SelfMap& t);
/// (Tx,Ty),(Ty,Tz) in R implies (Tx,Tz) in R.
Witness is_T_transitive(const FiniteRelation& r, const SelfMap& t);

/// Every E subset of S that is the exact range of some infinite R-preserving
/// sequence contained in S. Decided by search over (visited-subset, current
/// vertex) states: E qualifies iff a walk inside E visits all of E and its
/// end vertex can keep walking forever (reaches a cycle of E's subgraph).
/// Returned masks are in increasing numeric order.
std::vector<IndexSet> walkable_ranges(const FiniteRelation& r, IndexSet s);

/// Explicit eventually periodic R-preserving sequence with range exactly E,
/// for E returned by walkable_ranges(r, s). Throws Error if E is not walkable.
IndexedSequence walk_witness(const FiniteRelation& r, IndexSet e);

/// R restricted to the range of any R-preserving sequence is transitive.
Witness is_locally_transitive(const FiniteRelation& r);
/// Same, for R-preserving sequences contained in T(X).
Witness is_locally_T_transitive(const FiniteRelation& r, const SelfMap& t);

/// Consecutive-pair membership for an eventually periodic sequence: prefix
/// steps, the prefix-to-cycle step, and all cycle steps including wraparound.
Witness is_R_preserving(const IndexedSequence& seq, const FiniteRelation& r);

}  // namespace relfix

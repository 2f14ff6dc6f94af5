#include "relfix/relation.hpp"

#include <algorithm>
#include <string>

namespace relfix {

namespace {

void check_carrier_match(const FiniteRelation& r, const SelfMap& t) {
  if (r.carrier_size() != t.carrier_size())
    throw Error("relation and self-map live on different carriers (" +
                std::to_string(r.carrier_size()) + " vs " + std::to_string(t.carrier_size()) +
                " points)");
}

/// First lexicographic triple (x,y,z) inside `points` with (x,y),(y,z) in r
/// but (x,z) missing.
std::optional<std::array<int, 3>> transitivity_gap(const FiniteRelation& r, IndexSet points) {
  const int n = r.carrier_size();
  for (int x = 0; x < n; ++x) {
    if (!set_contains(points, x)) continue;
    for (int y = 0; y < n; ++y) {
      if (!set_contains(points, y) || !r.contains(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (!set_contains(points, z) || !r.contains(y, z)) continue;
        if (!r.contains(x, z)) return std::array<int, 3>{x, y, z};
      }
    }
  }
  return std::nullopt;
}

/// Vertices of the subgraph induced by `points` from which an infinite walk
/// exists, i.e. that can reach a cycle. Computed by repeatedly discarding
/// vertices whose successor set within the surviving subgraph is empty.
IndexSet endless_walk_core(const FiniteRelation& r, IndexSet points) {
  IndexSet core = points;
  for (;;) {
    IndexSet keep = 0;
    for (int v = 0; v < r.carrier_size(); ++v)
      if (set_contains(core, v) && (r.row(v) & core)) keep = set_with(keep, v);
    if (keep == core) return core;
    core = keep;
  }
}

}  // namespace

// -- FiniteRelation -----------------------------------------------------------

FiniteRelation::FiniteRelation(int n) : n_(n) {
  if (n < 1 || n > kMaxPoints)
    throw Error("relation carrier size must be in [1, " + std::to_string(kMaxPoints) + "]");
}

void FiniteRelation::check_index(int i) const {
  if (i < 0 || i >= n_) throw Error("point index " + std::to_string(i) + " out of range");
}

FiniteRelation FiniteRelation::universal(int n) {
  FiniteRelation r(n);
  for (int i = 0; i < n; ++i) r.rows_[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(full_set(n));
  return r;
}

FiniteRelation FiniteRelation::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  FiniteRelation r(n);
  for (auto [i, j] : pairs) r.add(i, j);
  return r;
}

FiniteRelation FiniteRelation::from_mask(int n, std::uint64_t mask) {
  if (n > 8) throw Error("mask encoding supports at most 8 points");
  FiniteRelation r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((mask >> (i * n + j)) & 1u) r.add(i, j);
  return r;
}

std::uint64_t FiniteRelation::mask() const {
  if (n_ > 8) throw Error("mask encoding supports at most 8 points");
  std::uint64_t m = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (contains(i, j)) m |= std::uint64_t{1} << (i * n_ + j);
  return m;
}

bool FiniteRelation::contains(int i, int j) const {
  check_index(i);
  check_index(j);
  return (rows_[static_cast<std::size_t>(i)] >> j) & 1u;
}

void FiniteRelation::add(int i, int j) {
  check_index(i);
  check_index(j);
  rows_[static_cast<std::size_t>(i)] |= static_cast<std::uint16_t>(1u << j);
}

void FiniteRelation::remove(int i, int j) {
  check_index(i);
  check_index(j);
  rows_[static_cast<std::size_t>(i)] &= static_cast<std::uint16_t>(~(1u << j));
}

bool FiniteRelation::is_empty() const {
  for (int i = 0; i < n_; ++i)
    if (rows_[static_cast<std::size_t>(i)]) return false;
  return true;
}

int FiniteRelation::pair_count() const {
  int c = 0;
  for (int i = 0; i < n_; ++i) c += std::popcount(rows_[static_cast<std::size_t>(i)]);
  return c;
}

std::vector<std::pair<int, int>> FiniteRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (contains(i, j)) out.emplace_back(i, j);
  return out;
}

// -- SelfMap ------------------------------------------------------------------

SelfMap::SelfMap(int n, const std::vector<int>& image) : n_(n) {
  if (n < 1 || n > kMaxPoints)
    throw Error("self-map carrier size must be in [1, " + std::to_string(kMaxPoints) + "]");
  if (static_cast<int>(image.size()) != n)
    throw Error("self-map image table must list exactly one target per point");
  for (int i = 0; i < n; ++i) {
    if (image[static_cast<std::size_t>(i)] < 0 || image[static_cast<std::size_t>(i)] >= n)
      throw Error("self-map image of point " + std::to_string(i) + " is out of range");
    image_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(image[static_cast<std::size_t>(i)]);
  }
}

SelfMap SelfMap::identity(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(i)] = i;
  return SelfMap(n, image);
}

SelfMap SelfMap::constant(int n, int target) {
  return SelfMap(n, std::vector<int>(static_cast<std::size_t>(n), target));
}

SelfMap SelfMap::from_code(int n, std::uint64_t code) {
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    image[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(n));
    code /= static_cast<std::uint64_t>(n);
  }
  return SelfMap(n, image);
}

int SelfMap::operator()(int i) const {
  if (i < 0 || i >= n_) throw Error("point index " + std::to_string(i) + " out of range");
  return image_[static_cast<std::size_t>(i)];
}

SelfMap SelfMap::iterate(int k) const {
  if (k < 0) throw Error("iterate count must be nonnegative");
  SelfMap out = identity(n_);
  for (int step = 0; step < k; ++step) {
    SelfMap next = out;
    for (int i = 0; i < n_; ++i)
      next.image_[static_cast<std::size_t>(i)] =
          image_[static_cast<std::size_t>(out.image_[static_cast<std::size_t>(i)])];
    out = next;
  }
  return out;
}

IndexSet SelfMap::image_set() const {
  IndexSet s = 0;
  for (int i = 0; i < n_; ++i) s = set_with(s, image_[static_cast<std::size_t>(i)]);
  return s;
}

// -- algebra ------------------------------------------------------------------

FiniteRelation inverse(const FiniteRelation& r) {
  FiniteRelation out(r.carrier_size());
  for (int i = 0; i < r.carrier_size(); ++i)
    for (int j = 0; j < r.carrier_size(); ++j)
      if (r.contains(i, j)) out.add(j, i);
  return out;
}

FiniteRelation symmetric_closure(const FiniteRelation& r) {
  FiniteRelation out = r;
  for (int i = 0; i < r.carrier_size(); ++i)
    for (int j = 0; j < r.carrier_size(); ++j)
      if (r.contains(i, j)) out.add(j, i);
  return out;
}

FiniteRelation restrict(const FiniteRelation& r, IndexSet points) {
  if (points & ~full_set(r.carrier_size())) throw Error("restriction set leaves the carrier");
  FiniteRelation out(r.carrier_size());
  for (int i = 0; i < r.carrier_size(); ++i) {
    if (!set_contains(points, i)) continue;
    for (int j = 0; j < r.carrier_size(); ++j)
      if (set_contains(points, j) && r.contains(i, j)) out.add(i, j);
  }
  return out;
}

bool comparative(const FiniteRelation& r, int x, int y) {
  return r.contains(x, y) || r.contains(y, x);
}

const char* property_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::Reflexive: return "reflexive";
    case PropertyKind::Symmetric: return "symmetric";
    case PropertyKind::Antisymmetric: return "antisymmetric";
    case PropertyKind::Transitive: return "transitive";
    case PropertyKind::Complete: return "complete";
    case PropertyKind::PartialOrder: return "partial-order";
    case PropertyKind::Empty: return "empty";
    case PropertyKind::Universal: return "universal";
  }
  return "?";
}

Witness check_property(const FiniteRelation& r, PropertyKind kind) {
  const int n = r.carrier_size();
  switch (kind) {
    case PropertyKind::Reflexive:
      for (int i = 0; i < n; ++i)
        if (!r.contains(i, i)) return Witness::fail({i}, "missing loop");
      return Witness::pass();
    case PropertyKind::Symmetric:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (r.contains(i, j) && !r.contains(j, i)) return Witness::fail({i, j}, "missing reverse pair");
      return Witness::pass();
    case PropertyKind::Antisymmetric:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && r.contains(i, j) && r.contains(j, i))
            return Witness::fail({i, j}, "distinct points related both ways");
      return Witness::pass();
    case PropertyKind::Transitive:
      if (auto gap = transitivity_gap(r, full_set(n)))
        return Witness::fail({(*gap)[0], (*gap)[1], (*gap)[2]}, "missing composite pair");
      return Witness::pass();
    case PropertyKind::Complete:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!comparative(r, i, j)) return Witness::fail({i, j}, "incomparable pair");
      return Witness::pass();
    case PropertyKind::PartialOrder: {
      for (PropertyKind part :
           {PropertyKind::Reflexive, PropertyKind::Antisymmetric, PropertyKind::Transitive}) {
        Witness w = check_property(r, part);
        if (!w.holds) {
          w.note = std::string(property_name(part)) + " fails: " + w.note;
          return w;
        }
      }
      return Witness::pass();
    }
    case PropertyKind::Empty:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (r.contains(i, j)) return Witness::fail({i, j}, "pair present");
      return Witness::pass();
    case PropertyKind::Universal:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!r.contains(i, j)) return Witness::fail({i, j}, "pair absent");
      return Witness::pass();
  }
  throw Error("unknown property kind");
}

Witness is_T_closed(const FiniteRelation& r, const SelfMap& t) {
  check_carrier_match(r, t);
  const int n = r.carrier_size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (r.contains(x, y) && !r.contains(t(x), t(y)))
        return Witness::fail({x, y}, "image pair leaves the relation");
  return Witness::pass();
}

Witness is_T_transitive(const FiniteRelation& r, const SelfMap& t) {
  check_carrier_match(r, t);
  const int n = r.carrier_size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!r.contains(t(x), t(y))) continue;
      for (int z = 0; z < n; ++z)
        if (r.contains(t(y), t(z)) && !r.contains(t(x), t(z)))
          return Witness::fail({x, y, z}, "missing composite image pair");
    }
  return Witness::pass();
}

std::vector<IndexSet> walkable_ranges(const FiniteRelation& r, IndexSet s) {
  const int n = r.carrier_size();
  if (s & ~full_set(n)) throw Error("walk range set leaves the carrier");

  // reach[mask] holds the end vertices of walks that stay inside `mask` and
  // visit all of it.
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::uint16_t> reach(total, 0);
  for (int v = 0; v < n; ++v)
    if (set_contains(s, v)) reach[std::size_t{1} << v] = static_cast<std::uint16_t>(1u << v);

  std::vector<IndexSet> result;
  for (IndexSet mask = 1; mask < total; ++mask) {
    if (mask & ~s) continue;
    std::uint16_t ends = reach[mask];
    if (!ends) continue;

    // Close under moves that stay inside the mask.
    for (;;) {
      std::uint16_t grown = ends;
      for (int v = 0; v < n; ++v)
        if ((ends >> v) & 1u) grown |= static_cast<std::uint16_t>(r.row(v) & mask);
      if (grown == ends) break;
      ends = grown;
    }
    reach[mask] = ends;

    // Extend into so-far-unvisited vertices of s.
    for (int v = 0; v < n; ++v) {
      if (!((ends >> v) & 1u)) continue;
      std::uint16_t fresh = static_cast<std::uint16_t>(r.row(v) & s & ~mask);
      for (int w = 0; w < n; ++w)
        if ((fresh >> w) & 1u) reach[mask | (IndexSet{1} << w)] |= static_cast<std::uint16_t>(1u << w);
    }

    if (ends & endless_walk_core(r, mask)) result.push_back(mask);
  }
  return result;
}

IndexedSequence walk_witness(const FiniteRelation& r, IndexSet e) {
  const int n = r.carrier_size();
  if (!e || (e & ~full_set(n))) throw Error("witness range must be a nonempty carrier subset");
  const IndexSet core = endless_walk_core(r, e);

  // Breadth-first search over (visited set, current vertex) states inside e,
  // keeping parents so the covering walk can be reconstructed.
  const std::size_t states = (std::size_t{1} << n) * static_cast<std::size_t>(n);
  std::vector<std::int32_t> parent(states, -2);  // -2 unseen, -1 seed
  auto id = [n](IndexSet mask, int v) {
    return static_cast<std::size_t>(mask) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
  };
  std::vector<std::pair<IndexSet, int>> queue;
  for (int v = 0; v < n; ++v)
    if (set_contains(e, v)) {
      parent[id(set_with(0, v), v)] = -1;
      queue.emplace_back(set_with(0, v), v);
    }
  std::optional<std::pair<IndexSet, int>> goal;
  for (std::size_t head = 0; head < queue.size() && !goal; ++head) {
    auto [mask, v] = queue[head];
    if (mask == e && set_contains(core, v)) {
      goal = queue[head];
      break;
    }
    for (int w = 0; w < n; ++w) {
      if (!r.contains(v, w) || !set_contains(e, w)) continue;
      IndexSet next = set_with(mask, w);
      if (parent[id(next, w)] != -2) continue;
      parent[id(next, w)] = static_cast<std::int32_t>(id(mask, v));
      queue.emplace_back(next, w);
    }
  }
  if (!goal) throw Error("set is not the range of any endless relation-preserving walk");

  std::vector<int> covering;
  {
    std::int32_t cur = static_cast<std::int32_t>(id(goal->first, goal->second));
    while (cur >= 0) {
      covering.push_back(static_cast<int>(static_cast<std::size_t>(cur) % static_cast<std::size_t>(n)));
      cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(covering.begin(), covering.end());
  }

  // From the walk's end, follow smallest successors inside the core until a
  // vertex repeats; that loop is the cycle.
  std::vector<int> tail{covering.back()};
  std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
  seen_at[static_cast<std::size_t>(covering.back())] = 0;
  for (;;) {
    int v = tail.back();
    int next = -1;
    for (int w = 0; w < n; ++w)
      if (set_contains(core, w) && r.contains(v, w)) {
        next = w;
        break;
      }
    if (next < 0) throw Error("internal: endless-walk core vertex without successor");
    if (seen_at[static_cast<std::size_t>(next)] >= 0) {
      const int loop_start = seen_at[static_cast<std::size_t>(next)];
      IndexedSequence seq;
      seq.prefix.assign(covering.begin(), covering.end() - 1);
      seq.prefix.insert(seq.prefix.end(), tail.begin(), tail.begin() + loop_start);
      seq.cycle.assign(tail.begin() + loop_start, tail.end());
      return seq;
    }
    seen_at[static_cast<std::size_t>(next)] = static_cast<int>(tail.size());
    tail.push_back(next);
  }
}

IndexSet IndexedSequence::range(int n) const {
  IndexSet s = 0;
  auto absorb = [&](int i) {
    if (i < 0 || i >= n) throw Error("sequence point out of range");
    s = set_with(s, i);
  };
  for (int i : prefix) absorb(i);
  for (int i : cycle) absorb(i);
  return s;
}

Witness is_locally_transitive(const FiniteRelation& r) {
  for (IndexSet e : walkable_ranges(r, full_set(r.carrier_size()))) {
    if (auto gap = transitivity_gap(r, e))
      return Witness::fail_on_subset(set_to_indices(e), {(*gap)[0], (*gap)[1], (*gap)[2]},
                                     "restriction to a walk range is not transitive");
  }
  return Witness::pass();
}

Witness is_locally_T_transitive(const FiniteRelation& r, const SelfMap& t) {
  check_carrier_match(r, t);
  for (IndexSet e : walkable_ranges(r, t.image_set())) {
    if (auto gap = transitivity_gap(r, e))
      return Witness::fail_on_subset(set_to_indices(e), {(*gap)[0], (*gap)[1], (*gap)[2]},
                                     "restriction to an image walk range is not transitive");
  }
  return Witness::pass();
}

Witness is_R_preserving(const IndexedSequence& seq, const FiniteRelation& r) {
  if (seq.cycle.empty()) throw Error("eventually periodic sequence needs a nonempty cycle");
  const int n = r.carrier_size();
  auto in_range = [n](int i) { return i >= 0 && i < n; };
  for (int i : seq.prefix)
    if (!in_range(i)) throw Error("sequence point out of range");
  for (int i : seq.cycle)
    if (!in_range(i)) throw Error("sequence point out of range");

  auto step_ok = [&](int a, int b) { return r.contains(a, b); };
  for (std::size_t i = 0; i + 1 < seq.prefix.size(); ++i)
    if (!step_ok(seq.prefix[i], seq.prefix[i + 1]))
      return Witness::fail({seq.prefix[i], seq.prefix[i + 1]}, "prefix step leaves the relation");
  if (!seq.prefix.empty() && !step_ok(seq.prefix.back(), seq.cycle.front()))
    return Witness::fail({seq.prefix.back(), seq.cycle.front()}, "prefix-to-cycle step leaves the relation");
  for (std::size_t i = 0; i + 1 < seq.cycle.size(); ++i)
    if (!step_ok(seq.cycle[i], seq.cycle[i + 1]))
      return Witness::fail({seq.cycle[i], seq.cycle[i + 1]}, "cycle step leaves the relation");
  if (!step_ok(seq.cycle.back(), seq.cycle.front()))
    return Witness::fail({seq.cycle.back(), seq.cycle.front()}, "cycle wraparound leaves the relation");
  return Witness::pass();
}

}  // namespace relfix

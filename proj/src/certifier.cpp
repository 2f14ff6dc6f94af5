#include "relfix/certifier.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace relfix {

bool HypothesisReport::all_pass() const {
  return a.holds && b1.holds && b2.holds && c.holds && d.holds && e.holds;
}

const ConditionEntry* HypothesisReport::first_failure() const {
  for (const ConditionEntry* entry : entries())
    if (!entry->holds) return entry;
  return nullptr;
}

std::vector<const ConditionEntry*> HypothesisReport::entries() const {
  return {&a, &b1, &b2, &c, &d, &e};
}

namespace {

ConditionEntry make_entry(std::string id, Witness w, std::string justification) {
  ConditionEntry entry;
  entry.id = std::move(id);
  entry.holds = w.holds;
  entry.witness = std::move(w);
  entry.justification = std::move(justification);
  return entry;
}

HypothesisReport check_finite(const FiniteInstance& inst) {
  HypothesisReport rep;
  rep.relation_empty = inst.relation.is_empty();

  rep.a = make_entry("a", Witness::pass("finite-discrete"),
                     "Cauchy sequences over a finite metric space are eventually constant, so "
                     "every relation-preserving Cauchy sequence converges");

  rep.b1 = make_entry("b1", is_T_closed(inst.relation, inst.map),
                      "the relation is closed under the map");
  rep.b2 = make_entry("b2", is_locally_T_transitive(inst.relation, inst.map),
                      "the relation is transitive on every walk range inside the image");

  rep.c = make_entry("c",
                     is_R_continuous_at(inst.map, inst.relation, inst.metric, 0),
                     "relation-continuity and d-self-closedness both hold on finite carriers");
  rep.c_via = "both (finite-discrete)";

  rep.admissible = admissible_starts(inst.relation, inst.map);
  rep.d = make_entry(
      "d",
      rep.admissible ? Witness::pass()
                     : Witness::fail({}, "no point x has (x, Tx) in the relation"),
      "an admissible starting point exists");

  ContractionReport cr = verify_contraction(inst, false);
  Witness e_witness = cr.holds ? Witness::pass()
                               : Witness::fail({cr.worst_pair->first, cr.worst_pair->second},
                                               "contraction inequality fails");
  rep.e = make_entry("e", std::move(e_witness),
                     "d(Tx,Ty) <= phi(d(x,y)) over every relation pair");
  rep.contraction = std::move(cr);
  return rep;
}

HypothesisReport check_continuous(const ContinuousInstance& inst) {
  HypothesisReport rep;

  rep.a = make_entry("a", Witness::pass("closed-interval"),
                     "a closed bounded real interval is complete");

  Witness closed = Witness::pass("universal");
  std::string b1_just = "the universal relation is closed under any map";
  if (inst.relation.kind == LineRelation::Kind::Leq ||
      inst.relation.kind == LineRelation::Kind::Geq) {
    b1_just = "sampled monotonicity over 201 grid points";
    closed = Witness::pass("sampled-monotone");
    constexpr int kGrid = 201;
    const double lo = inst.line.lower, hi = inst.line.upper;
    for (int i = 0; i + 1 < kGrid; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
      const double y = lo + (hi - lo) * static_cast<double>(i + 1) / (kGrid - 1);
      if (inst.map(x) > inst.map(y)) {
        closed = Witness::fail({i, i + 1}, "map is not monotone on the sample grid");
        break;
      }
    }
  } else if (inst.relation.kind == LineRelation::Kind::PairList) {
    closed = Witness::fail({}, "pair-list relations are not supported in interval mode");
  }
  rep.b1 = make_entry("b1", std::move(closed), std::move(b1_just));

  rep.b2 = make_entry("b2", Witness::pass("transitive-kind"),
                      "the relation kind is transitive, hence locally map-transitive");

  rep.c = make_entry("c", Witness::pass("comparative-total"),
                     "every pair is comparative under this relation kind, so the relation is "
                     "d-self-closed");
  rep.c_via = "d-self-closed";

  constexpr int kGrid = 201;
  std::optional<double> admissible;
  for (int i = 0; i < kGrid; ++i) {
    const double x = inst.line.lower +
                     (inst.line.upper - inst.line.lower) * static_cast<double>(i) / (kGrid - 1);
    if (inst.relation.related(x, inst.map(x))) {
      admissible = x;
      break;
    }
  }
  rep.d = make_entry("d",
                     admissible ? Witness::pass("sampled")
                                : Witness::fail({}, "no admissible start found on the sample grid"),
                     "an admissible starting value exists (sampled)");

  ContractionReport cr = verify_contraction(inst, false);
  Witness e_witness =
      cr.holds ? Witness::pass("sampled")
               : Witness::fail({}, "contraction inequality fails on the sample grid");
  rep.e = make_entry("e", std::move(e_witness),
                     "d(Tx,Ty) <= phi(d(x,y)) over sampled admissible pairs");
  rep.contraction = std::move(cr);
  return rep;
}

}  // namespace

HypothesisReport check_hypotheses(const ProblemInstance& inst) {
  if (const auto* fin = std::get_if<FiniteInstance>(&inst)) return check_finite(*fin);
  return check_continuous(std::get<ContinuousInstance>(inst));
}

std::optional<Path> find_path(const FiniteRelation& r, IndexSet s, int x, int y, int max_len) {
  const int n = r.carrier_size();
  if (s & ~full_set(n)) throw Error("endpoint set leaves the carrier");
  if (x < 0 || x >= n || y < 0 || y >= n) throw Error("path endpoint out of range");
  if (!set_contains(s, x) || !set_contains(s, y))
    throw Error("path endpoints must lie in the designated set");
  if (max_len < 0) max_len = n;
  if (max_len < 1) return std::nullopt;

  const FiniteRelation rs = symmetric_closure(r);

  if (x == y) {
    if (rs.contains(x, x)) return Path{{x, x}};
    if (max_len >= 2)
      for (int z = 0; z < n; ++z)
        if (z != x && rs.contains(x, z)) return Path{{x, z, x}};
    return std::nullopt;
  }

  // Distances to y through the symmetric closure, then a greedy walk from x
  // picking the smallest next node; that yields the lexicographically
  // smallest among the shortest paths.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n), kUnreached);
  dist[static_cast<std::size_t>(y)] = 0;
  std::vector<int> queue{y};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int w = 0; w < n; ++w)
      if (rs.contains(v, w) && dist[static_cast<std::size_t>(w)] == kUnreached) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
  }
  if (dist[static_cast<std::size_t>(x)] == kUnreached || dist[static_cast<std::size_t>(x)] > max_len)
    return std::nullopt;

  Path path;
  path.nodes.push_back(x);
  int cur = x;
  while (cur != y) {
    for (int w = 0; w < n; ++w)
      if (rs.contains(cur, w) &&
          dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(cur)] - 1) {
        path.nodes.push_back(w);
        cur = w;
        break;
      }
  }
  return path;
}

Witness is_Rs_directed(const FiniteRelation& r, IndexSet s) {
  const int n = r.carrier_size();
  if (s & ~full_set(n)) throw Error("point set leaves the carrier");
  for (int u = 0; u < n; ++u) {
    if (!set_contains(s, u)) continue;
    for (int v = 0; v < n; ++v) {
      if (!set_contains(s, v)) continue;
      bool dominated = false;
      for (int z = 0; z < n && !dominated; ++z)
        dominated = comparative(r, u, z) && comparative(r, v, z);
      if (!dominated) return Witness::fail({u, v}, "no common comparative point");
    }
  }
  return Witness::pass();
}

Witness is_complete_on(const FiniteRelation& r, IndexSet s) {
  const int n = r.carrier_size();
  if (s & ~full_set(n)) throw Error("point set leaves the carrier");
  for (int u = 0; u < n; ++u) {
    if (!set_contains(s, u)) continue;
    for (int v = 0; v < n; ++v)
      if (set_contains(s, v) && !comparative(r, u, v))
        return Witness::fail({u, v}, "incomparable pair");
  }
  return Witness::pass();
}

Witness is_Rs_connected(const FiniteRelation& r, IndexSet s) {
  const int n = r.carrier_size();
  if (s & ~full_set(n)) throw Error("point set leaves the carrier");
  for (int u = 0; u < n; ++u) {
    if (!set_contains(s, u)) continue;
    for (int v = 0; v < n; ++v)
      if (set_contains(s, v) && !find_path(r, s, u, v))
        return Witness::fail({u, v}, "no symmetric-closure path");
  }
  return Witness::pass();
}

UniquenessCertificate certify_uniqueness(const FiniteInstance& inst) {
  return certify_uniqueness(inst, check_hypotheses(ProblemInstance{inst}));
}

UniquenessCertificate certify_uniqueness(const FiniteInstance& inst,
                                         const HypothesisReport& report) {
  if (!report.all_pass()) {
    const ConditionEntry* bad = report.first_failure();
    throw Error("uniqueness certification requires the existence hypotheses; condition " +
                (bad ? bad->id : std::string("?")) + " fails");
  }

  const int n = inst.carrier.size();
  UniquenessCertificate cert;
  cert.note = "symmetric-closure paths may route through carrier points outside the image set";

  for (int i = 0; i < n; ++i)
    if (inst.map(i) == i) cert.fixed_points.push_back(i);

  const IndexSet image = inst.map.image_set();
  Witness connected = is_Rs_connected(inst.relation, image);
  cert.image_connected = connected.holds;
  if (!connected.holds && connected.counterexample.size() == 2)
    cert.disconnected_pair = {connected.counterexample[0], connected.counterexample[1]};

  const long allowance = 2 * n;
  for (std::size_t pi = 0; pi < cert.fixed_points.size(); ++pi)
    for (std::size_t qi = pi + 1; qi < cert.fixed_points.size(); ++qi) {
      auto path = find_path(inst.relation, image, cert.fixed_points[pi], cert.fixed_points[qi]);
      if (!path) continue;  // covered by the connectivity verdict above
      for (int i = 0; i + 1 < static_cast<int>(path->nodes.size()); ++i) {
        ChainTable chain;
        chain.from = path->nodes[static_cast<std::size_t>(i)];
        chain.to = path->nodes[static_cast<std::size_t>(i + 1)];
        int a = chain.from, b = chain.to;
        for (long step = 0; step <= allowance; ++step) {
          chain.values.push_back(a == b ? 0.0 : inst.metric(a, b));
          if (a == b) {
            chain.collapsed = true;
            break;
          }
          a = inst.map(a);
          b = inst.map(b);
        }
        if (!chain.collapsed) cert.collapse_alarm = true;
        cert.chains.push_back(std::move(chain));
      }
      cert.fixed_point_paths.push_back(std::move(*path));
    }

  cert.unique = cert.fixed_points.size() == 1;
  return cert;
}

}  // namespace relfix

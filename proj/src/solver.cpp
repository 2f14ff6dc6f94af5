#include "relfix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relfix/certifier.hpp"

namespace relfix {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::FixedPoint: return "fixed-point";
    case SolveStatus::CycleDetected: return "cycle-detected";
    case SolveStatus::ToleranceReached: return "tolerance-reached";
    case SolveStatus::BudgetExhausted: return "budget-exhausted";
    case SolveStatus::HypothesisFailure: return "hypothesis-failure";
  }
  return "?";
}

IndexSet admissible_starts(const FiniteRelation& r, const SelfMap& t) {
  if (r.carrier_size() != t.carrier_size())
    throw Error("relation and self-map live on different carriers");
  IndexSet s = 0;
  for (int x = 0; x < r.carrier_size(); ++x)
    if (r.contains(x, t(x))) s = set_with(s, x);
  return s;
}

namespace {

/// Identical indices are at distance zero by definition; the table is only
/// consulted for distinct points, and tiny negative noise within the metric
/// tolerance is clamped before phi sees it.
double point_distance(const MetricTable& m, int i, int j) {
  if (i == j) return 0.0;
  return m(i, j);
}

double phi_arg(double d) { return d < 0.0 ? 0.0 : d; }

}  // namespace

ContractionReport verify_contraction(const FiniteInstance& inst, bool symmetrized) {
  const FiniteRelation rel =
      symmetrized ? symmetric_closure(inst.relation) : inst.relation;
  ContractionReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  const int n = rel.carrier_size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!rel.contains(x, y)) continue;
      ++rep.checked_pairs;
      const double lhs = point_distance(inst.metric, inst.map(x), inst.map(y));
      const double margin = lhs - inst.phi(phi_arg(point_distance(inst.metric, x, y)));
      if (margin > rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_pair = {x, y};
      }
    }
  if (rep.checked_pairs == 0) rep.worst_margin = 0.0;
  rep.holds = rep.worst_margin <= 0.0;
  return rep;
}

ContractionReport verify_contraction(const ContinuousInstance& inst, bool symmetrized,
                                     int grid_points) {
  if (grid_points < 2) throw Error("contraction grid needs at least two points");
  ContractionReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  const double lo = inst.line.lower, hi = inst.line.upper;
  constexpr double kSlack = 1e-12;  // float noise on algebraically equal sides
  for (int i = 0; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
    for (int j = 0; j < grid_points; ++j) {
      const double y = lo + (hi - lo) * static_cast<double>(j) / (grid_points - 1);
      const bool admissible = symmetrized ? inst.relation.comparative(x, y)
                                          : inst.relation.related(x, y);
      if (!admissible) continue;
      ++rep.checked_pairs;
      const double margin = NumericLine::distance(inst.map(x), inst.map(y)) -
                            inst.phi(NumericLine::distance(x, y));
      if (margin > rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_sample = {x, y};
      }
    }
  }
  if (rep.checked_pairs == 0) rep.worst_margin = 0.0;
  rep.holds = rep.worst_margin <= kSlack;
  return rep;
}

SolveResult picard(const FiniteInstance& inst, int start, long budget) {
  const int n = inst.carrier.size();
  if (start < 0 || start >= n) throw Error("start point index out of range");
  if (budget == 0) throw Error("iteration budget must be positive");

  SolveResult res;
  res.start_admissible = inst.relation.contains(start, inst.map(start));
  if (!res.start_admissible)
    res.warning = "start '" + inst.carrier.label(start) +
                  "' is not admissible: (x, Tx) is not in the relation; the existence argument "
                  "does not cover this orbit";

  const long cap = budget < 0 ? n + 2 : budget;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  res.trace.push_back(start);
  seen[static_cast<std::size_t>(start)] = true;
  res.status = SolveStatus::BudgetExhausted;
  for (long step = 0; step < cap; ++step) {
    const int cur = res.trace.back();
    const int next = inst.map(cur);
    res.trace.push_back(next);
    res.residuals.push_back(point_distance(inst.metric, cur, next));
    if (next == cur) {
      res.status = SolveStatus::FixedPoint;
      res.fixed_point = cur;
      break;
    }
    if (seen[static_cast<std::size_t>(next)]) {
      res.status = SolveStatus::CycleDetected;
      break;
    }
    seen[static_cast<std::size_t>(next)] = true;
  }

  for (std::size_t i = 0; i + 1 < res.trace.size(); ++i)
    if (!inst.relation.contains(res.trace[i], res.trace[i + 1])) {
      res.trace_preserving = false;
      res.trace_escape = {res.trace[i], res.trace[i + 1]};
      break;
    }

  // Re-check the fixation claim independently of the loop's bookkeeping.
  if (res.fixed_point && inst.map(*res.fixed_point) != *res.fixed_point)
    throw Error("internal: reported fixed point is not fixed");
  return res;
}

SolveResult picard(const ContinuousInstance& inst, double start, long budget, double tol) {
  if (!inst.line.contains(start, 1e-12)) throw Error("start value lies outside the interval");
  if (budget < 1) throw Error("iteration budget must be positive");
  if (!(tol > 0.0)) throw Error("tolerance must be positive");

  SolveResult res;
  res.start_admissible = inst.relation.related(start, inst.map(start));
  if (!res.start_admissible)
    res.warning = "start is not admissible: (x, Tx) does not satisfy the relation";

  res.value_trace.push_back(start);
  res.status = SolveStatus::BudgetExhausted;
  for (long step = 0; step < budget; ++step) {
    const double cur = res.value_trace.back();
    const double next = inst.map(cur);
    res.value_trace.push_back(next);
    const double r = NumericLine::distance(cur, next);
    res.residuals.push_back(r);
    if (r < tol) {
      res.status = SolveStatus::ToleranceReached;
      res.fixed_value = next;
      break;
    }
  }

  for (std::size_t i = 0; i + 1 < res.value_trace.size(); ++i)
    if (!inst.relation.related(res.value_trace[i], res.value_trace[i + 1])) {
      res.trace_preserving = false;
      res.trace_escape = {static_cast<int>(i), static_cast<int>(i + 1)};
      break;
    }

  if (res.fixed_value) {
    const double residual = NumericLine::distance(*res.fixed_value, inst.map(*res.fixed_value));
    if (!(residual < tol))
      res.warning += std::string(res.warning.empty() ? "" : "; ") +
                     "reported value moves by " + std::to_string(residual) +
                     " under one more application";
  }
  return res;
}

namespace {

std::optional<double> least_admissible_value(const ContinuousInstance& inst, int grid_points) {
  const double lo = inst.line.lower, hi = inst.line.upper;
  for (int i = 0; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (grid_points - 1);
    if (inst.relation.related(x, inst.map(x))) return x;
  }
  return std::nullopt;
}

}  // namespace

SolveResult solve(const ProblemInstance& inst, long budget, double tol) {
  auto report = std::make_shared<HypothesisReport>(check_hypotheses(inst));
  if (!report->all_pass()) {
    SolveResult res;
    res.status = SolveStatus::HypothesisFailure;
    res.hypotheses = std::move(report);
    return res;
  }

  if (const auto* fin = std::get_if<FiniteInstance>(&inst)) {
    const int start = fin->start ? *fin->start : set_to_indices(report->admissible).front();
    SolveResult res = picard(*fin, start, budget);
    res.hypotheses = std::move(report);
    return res;
  }

  const auto& cont = std::get<ContinuousInstance>(inst);
  const double start =
      cont.start ? *cont.start : least_admissible_value(cont, 201).value_or(cont.line.lower);
  SolveResult res = picard(cont, start, budget < 0 ? 1'000'000 : budget, tol);
  res.hypotheses = std::move(report);
  return res;
}

std::vector<std::pair<int, SolveResult>> solve_all_starts(const FiniteInstance& inst,
                                                          long budget) {
  std::vector<std::pair<int, SolveResult>> out;
  for (int s : set_to_indices(admissible_starts(inst.relation, inst.map)))
    out.emplace_back(s, picard(inst, s, budget));
  return out;
}

}  // namespace relfix

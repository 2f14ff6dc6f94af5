#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "relfix/instance.hpp"

namespace relfix {

struct HypothesisReport;

enum class SolveStatus {
  FixedPoint,         // exact fixation (finite mode)
  CycleDetected,      // revisited a point without fixing; a hypothesis-violation signal
  ToleranceReached,   // residual under tolerance (continuous mode)
  BudgetExhausted,    // iteration cap hit before any of the above
  HypothesisFailure,  // gate refused to iterate
};

const char* status_name(SolveStatus s);

struct ContractionReport {
  bool holds = true;
  long checked_pairs = 0;
  /// Max over admissible pairs of d(Tx,Ty) - phi(d(x,y)); <= 0 iff holds.
  double worst_margin = 0.0;
  std::optional<std::pair<int, int>> worst_pair;          // finite mode
  std::optional<std::pair<double, double>> worst_sample;  // continuous mode
};

struct SolveResult {
  SolveStatus status = SolveStatus::HypothesisFailure;
  std::optional<int> fixed_point;     // finite mode
  std::optional<double> fixed_value;  // continuous mode
  std::vector<int> trace;             // finite-mode iterates
  std::vector<double> value_trace;    // continuous-mode iterates
  std::vector<double> residuals;      // d(x_n, x_{n+1})
  bool start_admissible = true;
  bool trace_preserving = true;  // every consecutive trace pair lies in the relation
  std::optional<std::pair<int, int>> trace_escape;
  std::string warning;
  std::shared_ptr<const HypothesisReport> hypotheses;  // attached by solve()
};

/// X(T,R): the points x with (x, Tx) in R — the admissible Picard starts.
IndexSet admissible_starts(const FiniteRelation& r, const SelfMap& t);

/// Checks d(Tx,Ty) <= phi(d(x,y)) over every relation pair (or every
/// symmetric-closure pair when `symmetrized`). The two variants must agree;
/// the falsifier asserts that equivalence exhaustively.
ContractionReport verify_contraction(const FiniteInstance& inst, bool symmetrized);
/// Continuous mode: the same check over a uniform sample grid of admissible
/// pairs, with a 1e-12 slack absorbing float noise on algebraically equal
/// sides.
ContractionReport verify_contraction(const ContinuousInstance& inst, bool symmetrized,
                                     int grid_points = 201);

/// Picard iteration from `start`. Finite mode stops at exact fixation or at a
/// revisited point; budget < 0 means "enough for a finite carrier". The trace
/// always records whether its consecutive pairs stayed inside the relation.
SolveResult picard(const FiniteInstance& inst, int start, long budget = -1);
SolveResult picard(const ContinuousInstance& inst, double start, long budget = 1'000'000,
                   double tol = 1e-9);

/// Full pipeline: hypothesis check first, then iteration from the instance's
/// start if given, else from the least admissible point. Never claims a fixed
/// point without the premises; on any failed condition the result carries the
/// report and status HypothesisFailure.
SolveResult solve(const ProblemInstance& inst, long budget = -1, double tol = 1e-9);

/// Runs picard from every admissible start (exploration mode).
std::vector<std::pair<int, SolveResult>> solve_all_starts(const FiniteInstance& inst,
                                                          long budget = -1);

}  // namespace relfix

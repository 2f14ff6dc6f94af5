#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "relfix/core.hpp"
#include "relfix/relation.hpp"

namespace relfix {

/// Finite metric space: an n x n table of distances. Construction only checks
/// the shape; the metric axioms are the business of validate_metric.
class MetricTable {
 public:
  static MetricTable path(int n);     // d(i,j) = |i-j|
  static MetricTable uniform(int n);  // d(i,j) = 1 for i != j
  static MetricTable from_rows(const std::vector<std::vector<double>>& rows);

  int size() const { return n_; }
  double operator()(int i, int j) const;
  std::vector<std::vector<double>> rows() const;

  bool operator==(const MetricTable&) const = default;

 private:
  explicit MetricTable(int n);
  int n_ = 0;
  std::vector<double> d_;
};

/// Checks all four metric axiom families up to an absolute tolerance.
/// Failure witnesses carry the offending indices and name the axiom in the
/// note ("identity", "positivity", "symmetry", "triangle").
Witness validate_metric(const MetricTable& m, double tol = 1e-12);

/// Closed interval of the real line with the absolute-difference metric; the
/// carrier of the continuous demo mode.
struct NumericLine {
  double lower = 0.0;
  double upper = 1.0;

  NumericLine(double lo, double hi);
  bool contains(double x, double slack = 0.0) const {
    return x >= lower - slack && x <= upper + slack;
  }
  static double distance(double a, double b) { return a < b ? b - a : a - b; }
};

/// Relation on the line, kept serializable: a predicate kind plus, for the
/// pair-list kind, explicit sample-point pairs.
struct LineRelation {
  enum class Kind { Universal, Leq, Geq, PairList };
  Kind kind = Kind::Universal;
  std::vector<std::pair<double, double>> pairs;  // PairList only

  bool related(double a, double b) const;
  bool comparative(double a, double b) const { return related(a, b) || related(b, a); }
};

/// Self-map of the line as a tagged formula, so instances stay serializable.
class LineFormula {
 public:
  struct RationalShrinkMap {};           // x / (1 + x)
  struct ScaleMap { double alpha; };     // alpha * x
  struct StepMap {                       // jump at `at`
    double at;
    double below;
    double above;
  };
  using Form = std::variant<RationalShrinkMap, ScaleMap, StepMap>;

  explicit LineFormula(Form form) : form_(std::move(form)) {}
  double operator()(double x) const;
  const Form& form() const { return form_; }
  const char* name() const;

 private:
  Form form_;
};

/// Indices extracted from a sequence that fails to be epsilon-Cauchy. With k
/// counting entries from 1, the invariants are k <= m_k < n_k,
/// d(x_{m_k}, x_{n_k}) > epsilon and d(x_{m_k}, x_{n_k - 1}) <= epsilon.
struct CauchyWitness {
  double epsilon = 0.0;
  std::vector<std::int64_t> m_indices;
  std::vector<std::int64_t> n_indices;
};

/// Standard extraction over a finite numeric prefix: m_k is the least
/// admissible index >= k and n_k the least index past m_k whose distance from
/// x_{m_k} exceeds epsilon. Returns nothing when the prefix is
/// epsilon-Cauchy-consistent. Every returned witness is re-checked by an
/// independent assertion pass before it is handed out.
std::optional<CauchyWitness> cauchy_failure_witness(std::span<const double> xs, double epsilon);

/// The independent assertion pass; throws Error if any invariant is violated.
void assert_cauchy_witness(const CauchyWitness& w, std::span<const double> xs);

/// d-self-closedness on a finite space. Convergent sequences over a finite
/// metric space are eventually constant at their limit x, and a relation-
/// preserving tail then forces (x,x) into the relation, so the verdict is
/// always true; the note records the "finite-discrete" justification.
Witness is_d_self_closed(const FiniteRelation& r, const MetricTable& m);

/// Relation-continuity of t at point x on a finite space; true for the same
/// discreteness reason.
Witness is_R_continuous_at(const SelfMap& t, const FiniteRelation& r, const MetricTable& m, int x);

/// Continuous-mode sampled analogue of d-self-closedness: given a relation-
/// preserving sample sequence converging to `limit`, reports the subsequence
/// (as indices, in `subset`) comparative with the limit.
Witness line_d_self_closed_check(const LineRelation& rel, std::span<const double> xs, double limit);

/// Continuous-mode sampled continuity check of `map` at `limit` along a
/// relation-preserving sequence: the image gaps |map(x_n) - map(limit)| must
/// at least halve from the first half of the samples to the second, down to
/// the absolute tolerance floor. A jump at the limit pins the gap and fails.
Witness line_R_continuity_check(const LineFormula& map, const LineRelation& rel,
                                std::span<const double> xs, double limit, double tol = 1e-9);

}  // namespace relfix

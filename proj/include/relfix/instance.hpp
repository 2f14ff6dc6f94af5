#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relfix/control.hpp"
#include "relfix/core.hpp"
#include "relfix/metric.hpp"
#include "relfix/relation.hpp"

namespace relfix {

/// One solvable problem in exact finite mode: carrier, metric, relation,
/// self-map, control function, optional preferred starting point.
struct FiniteInstance {
  Carrier carrier;
  MetricTable metric;
  FiniteRelation relation;
  SelfMap map;
  ControlFunction phi;
  std::optional<int> start;
};

/// The continuous 1-D demo mode: a closed interval, a predicate relation, a
/// formula self-map, a control function, an optional numeric start.
struct ContinuousInstance {
  NumericLine line;
  LineRelation relation;
  LineFormula map;
  ControlFunction phi;
  std::optional<double> start;
};

using ProblemInstance = std::variant<FiniteInstance, ContinuousInstance>;

struct InstanceDiagnostics {
  bool ok = true;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;  // e.g. the relation-is-empty flag
  Witness metric_check = Witness::pass();
};

/// Structural validation: carrier agreement across components, metric axioms,
/// a usable control function, start-point sanity. The empty relation is
/// representable but flagged with a warning, since the theory assumes a
/// nonempty relation.
InstanceDiagnostics validate_instance(const ProblemInstance& instance);

}  // namespace relfix

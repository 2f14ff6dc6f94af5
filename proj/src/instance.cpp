#include "relfix/instance.hpp"

#include <string>

namespace relfix {

namespace {

void validate_phi(const ControlFunction& phi, InstanceDiagnostics& diag) {
  if (!phi.omega_for_iteration())
    diag.errors.push_back(
        "control function '" + phi.family_name() +
        "' is not verified in the Boyd-Wong class; set declared_omega if it is known to belong");
}

InstanceDiagnostics validate_finite(const FiniteInstance& inst) {
  InstanceDiagnostics diag;
  const int n = inst.carrier.size();
  if (inst.metric.size() != n || inst.relation.carrier_size() != n ||
      inst.map.carrier_size() != n)
    diag.errors.push_back("carrier size disagreement between points, metric, relation and map");

  diag.metric_check = validate_metric(inst.metric);
  if (!diag.metric_check.holds)
    diag.errors.push_back("metric axiom '" + diag.metric_check.note + "' fails");

  if (inst.relation.is_empty())
    diag.warnings.push_back("relation is empty; the theory assumes a nonempty relation");

  validate_phi(inst.phi, diag);

  if (inst.start && (*inst.start < 0 || *inst.start >= n))
    diag.errors.push_back("start point index out of range");

  diag.ok = diag.errors.empty();
  return diag;
}

InstanceDiagnostics validate_continuous(const ContinuousInstance& inst) {
  InstanceDiagnostics diag;

  if (inst.relation.kind == LineRelation::Kind::PairList)
    diag.errors.push_back(
        "pair-list relations are supported by the sampled sequence diagnostics only, not by "
        "interval-mode instances");

  // The formula must map the interval into itself; sampled check.
  constexpr int kSamples = 129;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = inst.line.lower +
                     (inst.line.upper - inst.line.lower) * static_cast<double>(i) / kSamples;
    if (!inst.line.contains(inst.map(x), 1e-12)) {
      diag.errors.push_back("map leaves the interval near x = " + std::to_string(x));
      break;
    }
  }

  validate_phi(inst.phi, diag);

  if (inst.start && !inst.line.contains(*inst.start))
    diag.errors.push_back("start value lies outside the interval");

  diag.ok = diag.errors.empty();
  return diag;
}

}  // namespace

InstanceDiagnostics validate_instance(const ProblemInstance& instance) {
  if (const auto* fin = std::get_if<FiniteInstance>(&instance)) return validate_finite(*fin);
  return validate_continuous(std::get<ContinuousInstance>(instance));
}

}  // namespace relfix

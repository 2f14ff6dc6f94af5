#pragma once

#include <string>

#include <json.hpp>

#include "relfix/certifier.hpp"
#include "relfix/falsifier.hpp"
#include "relfix/instance.hpp"
#include "relfix/solver.hpp"

namespace relfix {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

ProblemInstance instance_from_json(const Json& j);
Json instance_to_json(const ProblemInstance& inst);
ProblemInstance load_instance_file(const std::string& path);

Json meta_json();
Json diagnostics_to_json(const InstanceDiagnostics& diag);
/// Witnesses and reports translate indices to labels when a carrier is given.
Json witness_to_json(const Witness& w, const Carrier* carrier);
Json hypotheses_to_json(const HypothesisReport& rep, const Carrier* carrier);
Json solve_result_to_json(const SolveResult& res, const Carrier* carrier);
Json certificate_to_json(const UniquenessCertificate& cert, const Carrier& carrier);
Json sweep_to_json(const SweepSpec& spec, const SweepOutcome& outcome);

}  // namespace relfix

#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <string>

#include "relfix/io.hpp"

using namespace relfix;

namespace {

const std::string kFixtures = RELFIX_FIXTURE_DIR;

}  // namespace

TEST_CASE("the bundled three-point fixture parses to the worked instance") {
  const ProblemInstance inst = load_instance_file(kFixtures + "/instance_3pt.json");
  const auto* fin = std::get_if<FiniteInstance>(&inst);
  REQUIRE(fin != nullptr);
  CHECK(fin->carrier.size() == 3);
  CHECK(fin->carrier.label(0) == "p0");
  CHECK(fin->relation == FiniteRelation::from_pairs(3, {{1, 0}, {2, 1}, {0, 0}}));
  CHECK(fin->map == SelfMap::constant(3, 0));
  CHECK(fin->metric == MetricTable::path(3));
  CHECK(fin->start == 2);
  CHECK(std::get<LinearPhi>(fin->phi.family()).alpha == 0.5);
  CHECK(validate_instance(inst).ok);
}

TEST_CASE("the interval fixture parses to the shrinking-map demo") {
  const ProblemInstance inst = load_instance_file(kFixtures + "/boydwong_demo.json");
  const auto* cont = std::get_if<ContinuousInstance>(&inst);
  REQUIRE(cont != nullptr);
  CHECK(cont->line.lower == 0.0);
  CHECK(cont->line.upper == 1.0);
  CHECK(cont->relation.kind == LineRelation::Kind::Universal);
  CHECK(std::holds_alternative<LineFormula::RationalShrinkMap>(cont->map.form()));
  CHECK(cont->start == 1.0);
  CHECK(validate_instance(inst).ok);
}

TEST_CASE("instances round-trip through serialization") {
  for (const char* name : {"/instance_3pt.json", "/boydwong_demo.json", "/two_fixed_points.json",
                           "/broken_triangle.json"}) {
    const ProblemInstance first = load_instance_file(kFixtures + name);
    const Json doc = instance_to_json(first);
    const ProblemInstance second = instance_from_json(doc);
    CHECK(instance_to_json(second) == doc);
    CHECK(instance_to_json(second).dump(2) == doc.dump(2));
  }
}

TEST_CASE("metric tables serialize as exact decimal strings") {
  // values with no short decimal representation must survive bit-exactly
  const double awkward = 0.1 + 0.2;
  const MetricTable m = MetricTable::from_rows(
      {{0.0, awkward, 1.0}, {awkward, 0.0, 1.0}, {1.0, 1.0, 0.0}});
  const FiniteInstance inst{Carrier::numbered(3), m,
                            FiniteRelation::from_pairs(3, {{0, 1}}),
                            SelfMap::constant(3, 0), ControlFunction::linear(0.5),
                            std::nullopt};
  const Json doc = instance_to_json(ProblemInstance{inst});
  CHECK(doc["metric"]["values"][0][1].is_string());

  const ProblemInstance round = instance_from_json(doc);
  const double reparsed = std::get<FiniteInstance>(round).metric(0, 1);
  std::uint64_t a = 0, b = 0;
  std::memcpy(&a, &awkward, sizeof a);
  std::memcpy(&b, &reparsed, sizeof b);
  CHECK(a == b);
}

TEST_CASE("every control-function family round-trips through the file format") {
  const std::vector<ControlFunction> phis = {
      ControlFunction::linear(0.25), ControlFunction::rational_shrink(),
      ControlFunction::scaled_rational(0.75), ControlFunction::omega_oscillator(),
      ControlFunction::table(TablePiecewisePhi{{{0.0, 0.5, 0.0}, {2.0, 0.25, 0.5}}, true})};
  for (const ControlFunction& phi : phis) {
    const FiniteInstance inst{Carrier::numbered(2), MetricTable::path(2),
                              FiniteRelation::universal(2), SelfMap::constant(2, 0), phi,
                              std::nullopt};
    const ProblemInstance round = instance_from_json(instance_to_json(ProblemInstance{inst}));
    CHECK(std::get<FiniteInstance>(round).phi == phi);
  }

  // interval-mode formulas round-trip too
  for (const LineFormula& formula :
       {LineFormula(LineFormula::RationalShrinkMap{}), LineFormula(LineFormula::ScaleMap{0.5}),
        LineFormula(LineFormula::StepMap{0.5, 0.1, 0.9})}) {
    const ContinuousInstance inst{NumericLine(0.0, 1.0),
                                  LineRelation{LineRelation::Kind::Leq, {}}, formula,
                                  ControlFunction::rational_shrink(), 0.5};
    const Json doc = instance_to_json(ProblemInstance{inst});
    const auto& back = std::get<ContinuousInstance>(instance_from_json(doc));
    CHECK(back.map.form().index() == formula.form().index());
    CHECK(instance_to_json(ProblemInstance{back}) == doc);
  }
}

TEST_CASE("parse failures name the offending key") {
  Json doc = Json::parse(R"({"points": ["a"], "metric": {"kind": "path"},
                             "relation": {"kind": "pairs", "pairs": []},
                             "map": {"kind": "table", "images": ["a"]}})");
  CHECK_THROWS_WITH_AS(instance_from_json(doc), doctest::Contains("phi"), Error);

  Json no_kind = doc;
  no_kind["phi"] = {{"family", "rational_shrink"}};
  no_kind["metric"] = Json::object();
  CHECK_THROWS_WITH_AS(instance_from_json(no_kind), doctest::Contains("metric"), Error);

  Json bad_label = doc;
  bad_label["phi"] = {{"family", "rational_shrink"}};
  bad_label["relation"]["pairs"] = Json::array({Json::array({"a", "zz"})});
  CHECK_THROWS_WITH_AS(instance_from_json(bad_label), doctest::Contains("zz"), Error);

  CHECK_THROWS_AS(load_instance_file(kFixtures + "/no_such_file.json"), Error);
}

TEST_CASE("the broken-triangle fixture is rejected by validation, naming the axiom") {
  const ProblemInstance inst = load_instance_file(kFixtures + "/broken_triangle.json");
  const InstanceDiagnostics diag = validate_instance(inst);
  CHECK(!diag.ok);
  CHECK(!diag.metric_check.holds);
  CHECK(diag.metric_check.note == "triangle");
  CHECK(diag.metric_check.counterexample == std::vector<int>{0, 2, 1});
}

TEST_CASE("the empty relation is flagged but representable") {
  Json doc = instance_to_json(ProblemInstance{FiniteInstance{
      Carrier::numbered(2), MetricTable::path(2), FiniteRelation::empty(2),
      SelfMap::constant(2, 0), ControlFunction::linear(0.5), std::nullopt}});
  const ProblemInstance inst = instance_from_json(doc);
  const InstanceDiagnostics diag = validate_instance(inst);
  CHECK(diag.ok);
  REQUIRE(diag.warnings.size() == 1);
  CHECK(diag.warnings[0].find("empty") != std::string::npos);
}

TEST_CASE("reports are byte-stable for identical inputs") {
  const ProblemInstance inst = load_instance_file(kFixtures + "/instance_3pt.json");
  const auto& fin = std::get<FiniteInstance>(inst);
  const std::string once =
      hypotheses_to_json(check_hypotheses(inst), &fin.carrier).dump(2);
  const std::string twice =
      hypotheses_to_json(check_hypotheses(inst), &fin.carrier).dump(2);
  CHECK(once == twice);
}

TEST_CASE("format_double round-trips and stays short") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1 + 0.2) != "0.3");  // honest about the actual value
}

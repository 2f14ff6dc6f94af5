#include <doctest.h>

#include <cmath>
#include <vector>

#include "relfix/certifier.hpp"
#include "relfix/solver.hpp"

using namespace relfix;

namespace {

FiniteInstance three_point_instance() {
  return FiniteInstance{
      Carrier::numbered(3),
      MetricTable::path(3),
      FiniteRelation::from_pairs(3, {{1, 0}, {2, 1}, {0, 0}}),
      SelfMap::constant(3, 0),
      ControlFunction::linear(0.5),
      2,
  };
}

ContinuousInstance boyd_wong_demo() {
  return ContinuousInstance{
      NumericLine(0.0, 1.0),
      LineRelation{LineRelation::Kind::Universal, {}},
      LineFormula(LineFormula::RationalShrinkMap{}),
      ControlFunction::rational_shrink(),
      1.0,
  };
}

}  // namespace

TEST_CASE("admissible starts collect the (x, Tx) pairs of the relation") {
  const FiniteRelation r = FiniteRelation::from_pairs(3, {{1, 0}, {2, 1}, {0, 0}});
  CHECK(admissible_starts(r, SelfMap(3, {0, 0, 1})) == full_set(3));
  CHECK(admissible_starts(FiniteRelation::empty(3), SelfMap::constant(3, 0)) == 0);
  CHECK(admissible_starts(FiniteRelation::universal(3), SelfMap(3, {1, 2, 0})) == full_set(3));
  // with the constant-to-0 map, (2, T2) = (2, 0) is missing
  CHECK(admissible_starts(r, SelfMap::constant(3, 0)) == set_from_indices({0, 1}, 3));
}

TEST_CASE("contraction verification scans every related pair") {
  const FiniteInstance inst = three_point_instance();
  const ContractionReport ok = verify_contraction(inst, false);
  CHECK(ok.holds);
  CHECK(ok.checked_pairs == 3);
  CHECK(ok.worst_margin <= 0.0);

  FiniteInstance bad = inst;
  bad.map = SelfMap(3, {0, 0, 1});
  const ContractionReport rep = verify_contraction(bad, false);
  CHECK(!rep.holds);
  REQUIRE(rep.worst_pair.has_value());
  CHECK(*rep.worst_pair == std::pair<int, int>{2, 1});
  CHECK(rep.worst_margin == doctest::Approx(0.5));  // d(T2,T1)=1 vs phi(1)=0.5

  const ContractionReport cont = verify_contraction(boyd_wong_demo(), false);
  CHECK(cont.holds);
  CHECK(cont.checked_pairs == 201 * 201);
}

TEST_CASE("contraction verdicts agree between the relation and its symmetric closure") {
  const FiniteInstance inst = three_point_instance();
  CHECK(verify_contraction(inst, false).holds == verify_contraction(inst, true).holds);

  FiniteInstance bad = inst;
  bad.map = SelfMap(3, {0, 0, 1});
  CHECK(verify_contraction(bad, false).holds == verify_contraction(bad, true).holds);
}

TEST_CASE("picard fixes, cycles, or runs out of budget") {
  const FiniteInstance inst = three_point_instance();

  SolveResult run = picard(inst, 2);
  CHECK(run.status == SolveStatus::FixedPoint);
  CHECK(run.fixed_point == 0);
  CHECK(run.trace == std::vector<int>{2, 0, 0});
  CHECK(run.residuals == std::vector<double>{2.0, 0.0});
  CHECK(!run.start_admissible);  // (2, 0) is not a relation pair
  CHECK(!run.trace_preserving);
  CHECK(run.trace_escape == std::pair<int, int>{2, 0});

  SolveResult from_admissible = picard(inst, 1);
  CHECK(from_admissible.status == SolveStatus::FixedPoint);
  CHECK(from_admissible.start_admissible);
  CHECK(from_admissible.trace_preserving);
  CHECK(from_admissible.trace == std::vector<int>{1, 0, 0});

  FiniteInstance ident = inst;
  ident.map = SelfMap::identity(3);
  ident.relation = FiniteRelation::universal(3);
  SolveResult still = picard(ident, 1);
  CHECK(still.status == SolveStatus::FixedPoint);
  CHECK(still.trace == std::vector<int>{1, 1});

  FiniteInstance swap = inst;
  swap.relation = FiniteRelation::universal(3);
  swap.map = SelfMap(3, {1, 0, 2});
  SolveResult cycle = picard(swap, 0);
  CHECK(cycle.status == SolveStatus::CycleDetected);
  CHECK(cycle.trace == std::vector<int>{0, 1, 0});

  SolveResult starved = picard(swap, 0, 1);
  CHECK(starved.status == SolveStatus::BudgetExhausted);
  CHECK_THROWS_AS(picard(inst, 9), Error);
}

TEST_CASE("interval-mode picard matches the closed form of the shrinking map") {
  const ContinuousInstance demo = boyd_wong_demo();
  const SolveResult run = picard(demo, 1.0, 1'000'000, 1e-4);
  CHECK(run.status == SolveStatus::ToleranceReached);
  REQUIRE(run.fixed_value.has_value());
  CHECK(*run.fixed_value < 0.02);
  CHECK(run.value_trace.size() < 10'000);
  CHECK(run.trace_preserving);

  // iterates follow x_n = 1/(n+1)
  for (std::size_t i = 0; i < run.value_trace.size(); ++i)
    CHECK(std::abs(run.value_trace[i] - 1.0 / (static_cast<double>(i) + 1.0)) < 1e-12);

  // residual recursion r_{n+1} <= phi(r_n), and residuals never increase
  for (std::size_t i = 0; i + 1 < run.residuals.size(); ++i) {
    CHECK(run.residuals[i + 1] <= demo.phi(run.residuals[i]));
    CHECK(run.residuals[i + 1] <= run.residuals[i]);
  }
}

TEST_CASE("interval-mode iteration reports budget exhaustion honestly") {
  const SolveResult starved = picard(boyd_wong_demo(), 1.0, 5, 1e-300);
  CHECK(starved.status == SolveStatus::BudgetExhausted);
  CHECK(starved.value_trace.size() == 6);
  CHECK(!starved.fixed_value.has_value());
}

TEST_CASE("solve gates on the hypotheses before iterating") {
  SolveResult good = solve(ProblemInstance{three_point_instance()});
  CHECK(good.status == SolveStatus::FixedPoint);
  CHECK(good.fixed_point == 0);
  CHECK(good.trace.size() == 3);  // explicit start p2 wins over the least admissible
  REQUIRE(good.hypotheses != nullptr);
  CHECK(good.hypotheses->all_pass());

  FiniteInstance not_closed = three_point_instance();
  not_closed.relation = FiniteRelation::from_pairs(3, {{0, 1}});
  not_closed.map = SelfMap(3, {1, 0, 2});
  SolveResult gated = solve(ProblemInstance{not_closed});
  CHECK(gated.status == SolveStatus::HypothesisFailure);
  REQUIRE(gated.hypotheses != nullptr);
  CHECK(!gated.hypotheses->b1.holds);
  CHECK(gated.trace.empty());

  SolveResult cont = solve(ProblemInstance{boyd_wong_demo()}, -1, 1e-9);
  CHECK(cont.status == SolveStatus::ToleranceReached);
  REQUIRE(cont.fixed_value.has_value());
  CHECK(*cont.fixed_value < 1e-4);

  // without an explicit start, the least admissible point is used
  FiniteInstance defaulted = three_point_instance();
  defaulted.start.reset();
  SolveResult least = solve(ProblemInstance{defaulted});
  CHECK(least.trace.front() == 0);
}

TEST_CASE("solving from every admissible start tabulates the reached fixed points") {
  const auto table = solve_all_starts(three_point_instance());
  REQUIRE(table.size() == 2);  // starts 0 and 1
  for (const auto& [start, result] : table) {
    CHECK(result.status == SolveStatus::FixedPoint);
    CHECK(result.fixed_point == 0);
    CHECK(result.trace_preserving);
  }
}

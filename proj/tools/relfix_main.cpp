// relfix — relation-constrained fixed-point toolkit.
//
// Subcommands:
//   check    hypothesis report for an instance file
//   solve    hypothesis gate + Picard iteration
//   certify  fixed-point enumeration, connectivity and chain collapse
//   sweep    exhaustive small-carrier validation / counterexample search
//   demo     print the bundled example instances

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "relfix/io.hpp"

namespace {

constexpr const char* kThreePointFixture = R"json({
  "points": ["p0", "p1", "p2"],
  "metric": {"kind": "path"},
  "relation": {"kind": "pairs", "pairs": [["p1", "p0"], ["p2", "p1"], ["p0", "p0"]]},
  "map": {"kind": "table", "images": ["p0", "p0", "p0"]},
  "phi": {"family": "linear", "alpha": 0.5},
  "start": "p2"
}
)json";

constexpr const char* kBoydWongFixture = R"json({
  "metric": {"kind": "interval", "lower": 0.0, "upper": 1.0},
  "relation": {"kind": "universal"},
  "map": {"kind": "formula", "formula": "x/(1+x)"},
  "phi": {"family": "rational_shrink"},
  "start": 1.0
}
)json";

void emit(const relfix::Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw relfix::Error("cannot write report file '" + out_path + "'");
  out << text;
}

const relfix::Carrier* carrier_of(const relfix::ProblemInstance& inst) {
  if (const auto* fin = std::get_if<relfix::FiniteInstance>(&inst)) return &fin->carrier;
  return nullptr;
}

int run_check(const std::string& file, const std::string& out) {
  const relfix::ProblemInstance inst = relfix::load_instance_file(file);
  const relfix::InstanceDiagnostics diag = relfix::validate_instance(inst);

  relfix::Json report;
  report["meta"] = relfix::meta_json();
  report["instance_diagnostics"] = relfix::diagnostics_to_json(diag);
  if (!diag.ok) {
    emit(report, out);
    return 2;
  }
  const relfix::HypothesisReport rep = relfix::check_hypotheses(inst);
  report["hypotheses"] = relfix::hypotheses_to_json(rep, carrier_of(inst));
  emit(report, out);
  return rep.all_pass() ? 0 : 2;
}

int run_solve(const std::string& file, const std::string& out, long budget, double tol,
              bool all_starts) {
  const relfix::ProblemInstance inst = relfix::load_instance_file(file);
  const relfix::InstanceDiagnostics diag = relfix::validate_instance(inst);

  relfix::Json report;
  report["meta"] = relfix::meta_json();
  report["instance_diagnostics"] = relfix::diagnostics_to_json(diag);
  if (!diag.ok) {
    emit(report, out);
    return 2;
  }

  const relfix::SolveResult res = relfix::solve(inst, budget, tol);
  const relfix::Carrier* carrier = carrier_of(inst);
  if (res.hypotheses) report["hypotheses"] = relfix::hypotheses_to_json(*res.hypotheses, carrier);
  report["solve"] = relfix::solve_result_to_json(res, carrier);

  if (all_starts && res.status != relfix::SolveStatus::HypothesisFailure) {
    if (const auto* fin = std::get_if<relfix::FiniteInstance>(&inst)) {
      relfix::Json table = relfix::Json::array();
      for (const auto& [start, result] : relfix::solve_all_starts(*fin, budget)) {
        relfix::Json row;
        row["start"] = fin->carrier.label(start);
        row["status"] = relfix::status_name(result.status);
        if (result.fixed_point) row["fixed_point"] = fin->carrier.label(*result.fixed_point);
        table.push_back(std::move(row));
      }
      report["all_starts"] = std::move(table);
    }
  }
  emit(report, out);
  const bool solved = res.status == relfix::SolveStatus::FixedPoint ||
                      res.status == relfix::SolveStatus::ToleranceReached;
  return solved ? 0 : 2;
}

int run_certify(const std::string& file, const std::string& out) {
  const relfix::ProblemInstance inst = relfix::load_instance_file(file);
  const relfix::InstanceDiagnostics diag = relfix::validate_instance(inst);

  relfix::Json report;
  report["meta"] = relfix::meta_json();
  report["instance_diagnostics"] = relfix::diagnostics_to_json(diag);
  if (!diag.ok) {
    emit(report, out);
    return 2;
  }

  const auto* fin = std::get_if<relfix::FiniteInstance>(&inst);
  if (!fin) throw relfix::Error("uniqueness certification supports finite instances only");

  const relfix::HypothesisReport rep = relfix::check_hypotheses(inst);
  report["hypotheses"] = relfix::hypotheses_to_json(rep, &fin->carrier);
  if (!rep.all_pass()) {
    emit(report, out);
    return 2;
  }

  const relfix::UniquenessCertificate cert = relfix::certify_uniqueness(*fin, rep);
  report["uniqueness"] = relfix::certificate_to_json(cert, fin->carrier);
  emit(report, out);

  // Alarms: a connected image with several fixed points, a chain that will
  // not collapse, or no fixed point at all contradict the certified theory.
  const bool alarm = cert.collapse_alarm || cert.fixed_points.empty() ||
                     (cert.image_connected && !cert.unique);
  return alarm ? 2 : 0;
}

relfix::PhiChoice parse_phi_choice(const std::string& token) {
  const auto colon = token.find(':');
  const std::string name = token.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
  if (name == "linear" && arg.empty()) return relfix::PhiChoice::per_instance_linear();
  if (name == "linear")
    return relfix::PhiChoice::fixed_phi(relfix::ControlFunction::linear(std::stod(arg)), token);
  if (name == "rational_shrink")
    return relfix::PhiChoice::fixed_phi(relfix::ControlFunction::rational_shrink(), token);
  if (name == "scaled_rational")
    return relfix::PhiChoice::fixed_phi(relfix::ControlFunction::scaled_rational(std::stod(arg)),
                                        token);
  if (name == "omega_oscillator")
    return relfix::PhiChoice::fixed_phi(relfix::ControlFunction::omega_oscillator(), token);
  throw relfix::Error("unknown control-function choice '" + token + "'");
}

int run_sweep(int n, const std::string& drop, const std::string& phi_set,
              const std::string& metric, int threads, const std::string& out) {
  relfix::SweepSpec spec;
  spec.n = n;
  spec.workers = threads;

  if (metric == "path") spec.metric = relfix::MetricFamily::Path;
  else if (metric == "uniform") spec.metric = relfix::MetricFamily::Uniform;
  else throw relfix::Error("unknown metric family '" + metric + "'");

  if (!phi_set.empty()) {
    spec.phis.clear();
    std::size_t pos = 0;
    while (pos != std::string::npos) {
      const std::size_t comma = phi_set.find(',', pos);
      const std::string token = phi_set.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (!token.empty()) spec.phis.push_back(parse_phi_choice(token));
      pos = comma == std::string::npos ? comma : comma + 1;
    }
    if (spec.phis.empty()) throw relfix::Error("empty control-function set");
  }

  auto selector = relfix::hypothesis_from_name(drop);
  if (!selector) throw relfix::Error("unknown drop selector '" + drop + "'");
  spec.drop = *selector;

  const relfix::SweepOutcome outcome = spec.drop == relfix::Hypothesis::None
                                           ? relfix::sweep_theorem(spec)
                                           : relfix::search_counterexample(spec);
  emit(relfix::sweep_to_json(spec, outcome), out);
  return outcome.violations.empty() ? 0 : 2;
}

int run_demo(const std::string& name) {
  if (name == "instance_3pt") {
    std::cout << kThreePointFixture;
    return 0;
  }
  if (name == "boydwong_demo") {
    std::cout << kBoydWongFixture;
    return 0;
  }
  if (!name.empty()) throw relfix::Error("unknown demo '" + name + "'");
  relfix::Json both;
  both["instance_3pt"] = relfix::Json::parse(kThreePointFixture);
  both["boydwong_demo"] = relfix::Json::parse(kBoydWongFixture);
  std::cout << both.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relation-constrained fixed-point toolkit"};
  app.require_subcommand(1);

  std::string file, out;
  long budget = -1;
  double tol = 1e-9;
  bool all_starts = false;
  int n = 3, threads = 0;
  std::string drop = "none", phi_set, metric = "path", demo_name;

  auto* check = app.add_subcommand("check", "hypothesis report for an instance file");
  check->add_option("file", file, "instance file")->required();
  check->add_option("--out", out, "write the report here instead of stdout");

  auto* solve = app.add_subcommand("solve", "hypothesis gate plus Picard iteration");
  solve->add_option("file", file, "instance file")->required();
  solve->add_option("--out", out, "write the report here instead of stdout");
  solve->add_option("--budget", budget, "iteration budget (default: automatic)");
  solve->add_option("--tol", tol, "residual tolerance for interval mode");
  solve->add_flag("--all-starts", all_starts, "iterate from every admissible start");

  auto* certify = app.add_subcommand("certify", "uniqueness certificate");
  certify->add_option("file", file, "instance file")->required();
  certify->add_option("--out", out, "write the report here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "exhaustive small-carrier validation");
  sweep->add_option("--n", n, "carrier size (2..4)");
  sweep->add_option("--drop", drop, "hypothesis to drop (a|b1|b2|c|d|e|u)");
  sweep->add_option("--phi-set", phi_set,
                    "comma list: linear, linear:<alpha>, rational_shrink, scaled_rational:<c>, "
                    "omega_oscillator");
  sweep->add_option("--metric", metric, "path|uniform");
  sweep->add_option("--threads", threads, "worker count (0: hardware)");
  sweep->add_option("--out", out, "write the report here instead of stdout");

  auto* demo = app.add_subcommand("demo", "print a bundled example instance");
  demo->add_option("name", demo_name, "instance_3pt or boydwong_demo");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(file, out);
    if (solve->parsed()) return run_solve(file, out, budget, tol, all_starts);
    if (certify->parsed()) return run_certify(file, out);
    if (sweep->parsed()) return run_sweep(n, drop, phi_set, metric, threads, out);
    if (demo->parsed()) return run_demo(demo_name);
  } catch (const relfix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include "relfix/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace relfix {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

namespace {

const Json& require_key(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw Error(where + ": missing key '" + key + "'");
  return *it;
}

std::string require_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw Error(where + ": expected a string");
  return j.get<std::string>();
}

double require_number(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return v;
    throw Error(where + ": '" + s + "' is not a number");
  }
  throw Error(where + ": expected a number");
}

Carrier parse_points(const Json& root) {
  const Json& points = require_key(root, "points", "instance");
  if (!points.is_array() || points.empty())
    throw Error("instance.points: expected a nonempty array of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < points.size(); ++i)
    labels.push_back(require_string(points[i], "instance.points[" + std::to_string(i) + "]"));
  return Carrier(std::move(labels));
}

MetricTable parse_finite_metric(const Json& metric, const std::string& kind, int n) {
  if (kind == "path") return MetricTable::path(n);
  if (kind == "uniform") return MetricTable::uniform(n);
  if (kind != "table")
    throw Error("instance.metric.kind: '" + kind + "' is not a finite-mode metric");
  const Json& values = require_key(metric, "values", "instance.metric");
  if (!values.is_array() || static_cast<int>(values.size()) != n)
    throw Error("instance.metric.values: expected " + std::to_string(n) + " rows");
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    const Json& row = values[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw Error("instance.metric.values[" + std::to_string(i) + "]: expected " +
                  std::to_string(n) + " entries");
    std::vector<double> out;
    for (int j = 0; j < n; ++j)
      out.push_back(require_number(row[static_cast<std::size_t>(j)],
                                   "instance.metric.values[" + std::to_string(i) + "][" +
                                       std::to_string(j) + "]"));
    rows.push_back(std::move(out));
  }
  return MetricTable::from_rows(rows);
}

FiniteRelation parse_finite_relation(const Json& relation, const Carrier& carrier) {
  const std::string kind = require_string(require_key(relation, "kind", "instance.relation"),
                                          "instance.relation.kind");
  const int n = carrier.size();
  if (kind == "universal") return FiniteRelation::universal(n);
  if (kind != "pairs")
    throw Error("instance.relation.kind: '" + kind + "' is not a finite-mode relation");
  const Json& pairs = require_key(relation, "pairs", "instance.relation");
  if (!pairs.is_array()) throw Error("instance.relation.pairs: expected an array");
  FiniteRelation r(n);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Json& p = pairs[i];
    const std::string where = "instance.relation.pairs[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2) throw Error(where + ": expected a [from, to] pair");
    r.add(carrier.index_of(require_string(p[0], where)),
          carrier.index_of(require_string(p[1], where)));
  }
  return r;
}

SelfMap parse_finite_map(const Json& map, const Carrier& carrier) {
  const std::string kind =
      require_string(require_key(map, "kind", "instance.map"), "instance.map.kind");
  if (kind != "table")
    throw Error("instance.map.kind: '" + kind + "' is not a finite-mode map");
  const Json& images = require_key(map, "images", "instance.map");
  if (!images.is_array() || static_cast<int>(images.size()) != carrier.size())
    throw Error("instance.map.images: expected one image label per point");
  std::vector<int> image;
  for (std::size_t i = 0; i < images.size(); ++i)
    image.push_back(carrier.index_of(
        require_string(images[i], "instance.map.images[" + std::to_string(i) + "]")));
  return SelfMap(carrier.size(), image);
}

ControlFunction parse_phi(const Json& root) {
  const Json& phi = require_key(root, "phi", "instance");
  const std::string family =
      require_string(require_key(phi, "family", "instance.phi"), "instance.phi.family");
  if (family == "linear")
    return ControlFunction::linear(require_number(require_key(phi, "alpha", "instance.phi"),
                                                  "instance.phi.alpha"));
  if (family == "rational_shrink") return ControlFunction::rational_shrink();
  if (family == "scaled_rational")
    return ControlFunction::scaled_rational(
        require_number(require_key(phi, "c", "instance.phi"), "instance.phi.c"));
  if (family == "omega_oscillator") return ControlFunction::omega_oscillator();
  if (family == "table_piecewise") {
    TablePiecewisePhi table;
    const Json& pieces = require_key(phi, "pieces", "instance.phi");
    if (!pieces.is_array() || pieces.empty())
      throw Error("instance.phi.pieces: expected a nonempty array");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::string where = "instance.phi.pieces[" + std::to_string(i) + "]";
      table.pieces.push_back({require_number(require_key(pieces[i], "start", where), where + ".start"),
                              require_number(require_key(pieces[i], "slope", where), where + ".slope"),
                              require_number(require_key(pieces[i], "intercept", where),
                                             where + ".intercept")});
    }
    if (phi.contains("declared_omega")) table.declared_omega = phi["declared_omega"].get<bool>();
    return ControlFunction::table(std::move(table));
  }
  throw Error("instance.phi.family: unknown family '" + family + "'");
}

ProblemInstance parse_finite(const Json& root, const Json& metric, const std::string& kind) {
  Carrier carrier = parse_points(root);
  const int n = carrier.size();
  MetricTable table = parse_finite_metric(metric, kind, n);
  FiniteRelation relation = parse_finite_relation(require_key(root, "relation", "instance"), carrier);
  SelfMap map = parse_finite_map(require_key(root, "map", "instance"), carrier);
  ControlFunction phi = parse_phi(root);
  std::optional<int> start;
  if (root.contains("start"))
    start = carrier.index_of(require_string(root["start"], "instance.start"));
  return FiniteInstance{std::move(carrier), std::move(table), relation, map, std::move(phi),
                        start};
}

LineFormula parse_formula(const Json& map) {
  const std::string formula =
      require_string(require_key(map, "formula", "instance.map"), "instance.map.formula");
  if (formula == "x/(1+x)") return LineFormula(LineFormula::RationalShrinkMap{});
  if (formula == "alpha*x")
    return LineFormula(LineFormula::ScaleMap{
        require_number(require_key(map, "alpha", "instance.map"), "instance.map.alpha")});
  if (formula == "step")
    return LineFormula(LineFormula::StepMap{
        require_number(require_key(map, "at", "instance.map"), "instance.map.at"),
        require_number(require_key(map, "below", "instance.map"), "instance.map.below"),
        require_number(require_key(map, "above", "instance.map"), "instance.map.above")});
  throw Error("instance.map.formula: unknown formula '" + formula + "'");
}

ProblemInstance parse_continuous(const Json& root, const Json& metric) {
  NumericLine line(require_number(require_key(metric, "lower", "instance.metric"),
                                  "instance.metric.lower"),
                   require_number(require_key(metric, "upper", "instance.metric"),
                                  "instance.metric.upper"));

  const Json& relation = require_key(root, "relation", "instance");
  const std::string rel_kind = require_string(require_key(relation, "kind", "instance.relation"),
                                              "instance.relation.kind");
  LineRelation rel;
  if (rel_kind == "universal") rel.kind = LineRelation::Kind::Universal;
  else if (rel_kind == "leq") rel.kind = LineRelation::Kind::Leq;
  else if (rel_kind == "geq") rel.kind = LineRelation::Kind::Geq;
  else
    throw Error("instance.relation.kind: '" + rel_kind +
                "' is not an interval-mode relation (universal, leq, geq)");

  const Json& map = require_key(root, "map", "instance");
  const std::string map_kind =
      require_string(require_key(map, "kind", "instance.map"), "instance.map.kind");
  if (map_kind != "formula")
    throw Error("instance.map.kind: interval mode expects a formula map");

  ControlFunction phi = parse_phi(root);
  std::optional<double> start;
  if (root.contains("start")) start = require_number(root["start"], "instance.start");
  return ContinuousInstance{line, rel, parse_formula(map), std::move(phi), start};
}

}  // namespace

ProblemInstance instance_from_json(const Json& j) {
  const Json& metric = require_key(j, "metric", "instance");
  const std::string kind =
      require_string(require_key(metric, "kind", "instance.metric"), "instance.metric.kind");
  if (kind == "interval") return parse_continuous(j, metric);
  return parse_finite(j, metric, kind);
}

ProblemInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw Error("instance file '" + path + "': " + e.what());
  }
  return instance_from_json(j);
}

namespace {

Json phi_to_json(const ControlFunction& phi) {
  Json j;
  j["family"] = phi.family_name();
  if (const auto* lin = std::get_if<LinearPhi>(&phi.family())) j["alpha"] = lin->alpha;
  if (const auto* sc = std::get_if<ScaledRationalPhi>(&phi.family())) j["c"] = sc->c;
  if (const auto* tab = std::get_if<TablePiecewisePhi>(&phi.family())) {
    Json pieces = Json::array();
    for (const auto& p : tab->pieces)
      pieces.push_back({{"start", p.start}, {"slope", p.slope}, {"intercept", p.intercept}});
    j["pieces"] = std::move(pieces);
    j["declared_omega"] = tab->declared_omega;
  }
  return j;
}

Json finite_to_json(const FiniteInstance& inst) {
  Json j;
  Json points = Json::array();
  for (int i = 0; i < inst.carrier.size(); ++i) points.push_back(inst.carrier.label(i));
  j["points"] = std::move(points);

  Json rows = Json::array();
  for (const auto& row : inst.metric.rows()) {
    Json out = Json::array();
    for (double v : row) out.push_back(format_double(v));
    rows.push_back(std::move(out));
  }
  j["metric"] = {{"kind", "table"}, {"values", std::move(rows)}};

  Json pairs = Json::array();
  for (auto [a, b] : inst.relation.pairs())
    pairs.push_back(Json::array({inst.carrier.label(a), inst.carrier.label(b)}));
  j["relation"] = {{"kind", "pairs"}, {"pairs", std::move(pairs)}};

  Json images = Json::array();
  for (int i = 0; i < inst.carrier.size(); ++i) images.push_back(inst.carrier.label(inst.map(i)));
  j["map"] = {{"kind", "table"}, {"images", std::move(images)}};

  j["phi"] = phi_to_json(inst.phi);
  if (inst.start) j["start"] = inst.carrier.label(*inst.start);
  return j;
}

Json continuous_to_json(const ContinuousInstance& inst) {
  Json j;
  j["metric"] = {{"kind", "interval"}, {"lower", inst.line.lower}, {"upper", inst.line.upper}};
  switch (inst.relation.kind) {
    case LineRelation::Kind::Universal: j["relation"] = {{"kind", "universal"}}; break;
    case LineRelation::Kind::Leq: j["relation"] = {{"kind", "leq"}}; break;
    case LineRelation::Kind::Geq: j["relation"] = {{"kind", "geq"}}; break;
    case LineRelation::Kind::PairList:
      throw Error("pair-list relations have no instance-file form");
  }
  Json map;
  map["kind"] = "formula";
  if (std::holds_alternative<LineFormula::RationalShrinkMap>(inst.map.form())) {
    map["formula"] = "x/(1+x)";
  } else if (const auto* sc = std::get_if<LineFormula::ScaleMap>(&inst.map.form())) {
    map["formula"] = "alpha*x";
    map["alpha"] = sc->alpha;
  } else {
    const auto& st = std::get<LineFormula::StepMap>(inst.map.form());
    map["formula"] = "step";
    map["at"] = st.at;
    map["below"] = st.below;
    map["above"] = st.above;
  }
  j["map"] = std::move(map);
  j["phi"] = phi_to_json(inst.phi);
  if (inst.start) j["start"] = *inst.start;
  return j;
}

Json labels_of(const std::vector<int>& indices, const Carrier* carrier) {
  Json out = Json::array();
  for (int i : indices) {
    if (carrier) out.push_back(carrier->label(i));
    else out.push_back(i);
  }
  return out;
}

}  // namespace

Json instance_to_json(const ProblemInstance& inst) {
  if (const auto* fin = std::get_if<FiniteInstance>(&inst)) return finite_to_json(*fin);
  return continuous_to_json(std::get<ContinuousInstance>(inst));
}

Json meta_json() { return Json{{"tool", "relfix"}, {"version", kVersion}}; }

Json diagnostics_to_json(const InstanceDiagnostics& diag) {
  Json j;
  j["ok"] = diag.ok;
  j["errors"] = diag.errors;
  j["warnings"] = diag.warnings;
  j["metric_check"] = witness_to_json(diag.metric_check, nullptr);
  return j;
}

Json witness_to_json(const Witness& w, const Carrier* carrier) {
  Json j;
  j["holds"] = w.holds;
  if (!w.counterexample.empty()) j["counterexample"] = labels_of(w.counterexample, carrier);
  if (!w.subset.empty()) j["subset"] = labels_of(w.subset, carrier);
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

Json hypotheses_to_json(const HypothesisReport& rep, const Carrier* carrier) {
  Json conditions = Json::array();
  for (const ConditionEntry* entry : rep.entries()) {
    Json e;
    e["id"] = entry->id;
    e["holds"] = entry->holds;
    e["witness"] = witness_to_json(entry->witness, carrier);
    e["justification"] = entry->justification;
    conditions.push_back(std::move(e));
  }
  Json j;
  j["overall"] = rep.all_pass();
  j["conditions"] = std::move(conditions);
  j["c_via"] = rep.c_via;
  j["relation_empty"] = rep.relation_empty;
  j["admissible_starts"] = labels_of(set_to_indices(rep.admissible), carrier);
  if (rep.contraction) {
    Json c;
    c["holds"] = rep.contraction->holds;
    c["checked_pairs"] = rep.contraction->checked_pairs;
    c["worst_margin"] = rep.contraction->worst_margin;
    if (rep.contraction->worst_pair)
      c["worst_pair"] = labels_of({rep.contraction->worst_pair->first,
                                   rep.contraction->worst_pair->second},
                                  carrier);
    if (rep.contraction->worst_sample)
      c["worst_sample"] = Json::array(
          {rep.contraction->worst_sample->first, rep.contraction->worst_sample->second});
    j["contraction"] = std::move(c);
  }
  return j;
}

Json solve_result_to_json(const SolveResult& res, const Carrier* carrier) {
  Json j;
  j["status"] = status_name(res.status);
  if (res.fixed_point) {
    if (carrier) j["fixed_point"] = carrier->label(*res.fixed_point);
    else j["fixed_point"] = *res.fixed_point;
  }
  if (res.fixed_value) j["fixed_value"] = *res.fixed_value;
  if (!res.trace.empty()) j["trace"] = labels_of(res.trace, carrier);
  if (!res.value_trace.empty()) j["value_trace"] = res.value_trace;
  j["residuals"] = res.residuals;
  j["start_admissible"] = res.start_admissible;
  j["trace_preserving"] = res.trace_preserving;
  if (res.trace_escape)
    j["trace_escape"] = labels_of({res.trace_escape->first, res.trace_escape->second}, carrier);
  if (!res.warning.empty()) j["warning"] = res.warning;
  return j;
}

Json certificate_to_json(const UniquenessCertificate& cert, const Carrier& carrier) {
  Json j;
  j["fixed_points"] = labels_of(cert.fixed_points, &carrier);
  j["image_connected"] = cert.image_connected;
  if (cert.disconnected_pair)
    j["disconnected_pair"] =
        labels_of({cert.disconnected_pair->first, cert.disconnected_pair->second}, &carrier);
  Json paths = Json::array();
  for (const Path& p : cert.fixed_point_paths) paths.push_back(labels_of(p.nodes, &carrier));
  j["paths"] = std::move(paths);
  Json chains = Json::array();
  for (const ChainTable& c : cert.chains) {
    Json e;
    e["from"] = carrier.label(c.from);
    e["to"] = carrier.label(c.to);
    e["values"] = c.values;
    e["collapsed"] = c.collapsed;
    chains.push_back(std::move(e));
  }
  j["chains"] = std::move(chains);
  j["unique"] = cert.unique;
  j["collapse_alarm"] = cert.collapse_alarm;
  j["note"] = cert.note;
  return j;
}

Json sweep_to_json(const SweepSpec& spec, const SweepOutcome& outcome) {
  Json j;
  j["meta"] = meta_json();

  Json s;
  s["n"] = spec.n;
  switch (spec.metric) {
    case MetricFamily::Path: s["metric"] = "path"; break;
    case MetricFamily::Uniform: s["metric"] = "uniform"; break;
    case MetricFamily::Custom: s["metric"] = "custom"; break;
  }
  Json phis = Json::array();
  for (const auto& p : spec.phis) phis.push_back(p.name);
  s["phis"] = std::move(phis);
  s["drop"] = hypothesis_name(spec.drop);
  j["spec"] = std::move(s);

  j["instances_checked"] = outcome.instances_checked;
  j["instances_validated"] = outcome.instances_validated;
  j["separations_total"] = outcome.separations_total;
  auto findings_json = [&](const std::vector<Finding>& findings) {
    Json arr = Json::array();
    for (const Finding& f : findings) {
      Json e;
      e["instance_id"] = f.instance_id;
      e["relation_mask"] = f.relation_mask;
      e["map_code"] = f.map_code;
      e["phi_index"] = f.phi_index;
      e["claim"] = f.claim;
      e["detail"] = f.detail;
      try {
        e["instance"] =
            instance_to_json(ProblemInstance{materialize(spec, f.relation_mask, f.map_code, f.phi_index)});
      } catch (const Error&) {
        // Proposition sweeps use a bare (relation, map) addressing with no
        // metric/phi resolution; the ids still replay through from_mask.
      }
      arr.push_back(std::move(e));
    }
    return arr;
  };
  j["violations"] = findings_json(outcome.violations);
  j["separations"] = findings_json(outcome.separations);
  return j;
}

}  // namespace relfix

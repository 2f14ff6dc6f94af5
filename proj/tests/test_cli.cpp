#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

extern std::string g_relfix_binary;

namespace {

using Json = nlohmann::json;

const std::string kFixtures = RELFIX_FIXTURE_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = g_relfix_binary + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = std::string("/tmp/relfix_test_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("check: passing instance exits 0 with an all-pass report") {
  const RunResult r = run_cli("check " + kFixtures + "/instance_3pt.json");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["hypotheses"]["overall"] == true);
  CHECK(doc["instance_diagnostics"]["ok"] == true);
  CHECK(doc["meta"]["tool"] == "relfix");
}

TEST_CASE("check: a broken triangle inequality exits 2 and names the axiom") {
  const RunResult r = run_cli("check " + kFixtures + "/broken_triangle.json");
  CHECK(r.exit_code == 2);
  const Json doc = Json::parse(r.out);
  CHECK(doc["instance_diagnostics"]["ok"] == false);
  CHECK(doc["instance_diagnostics"]["metric_check"]["note"] == "triangle");
}

TEST_CASE("check: a missing key exits 1") {
  const std::string path = temp_file(
      "missing_phi.json",
      R"({"points": ["a"], "metric": {"kind": "path"},
          "relation": {"kind": "pairs", "pairs": [["a", "a"]]},
          "map": {"kind": "table", "images": ["a"]}})");
  const RunResult r = run_cli("check " + path);
  CHECK(r.exit_code == 1);
}

TEST_CASE("check: reports are byte-stable across runs") {
  const RunResult a = run_cli("check " + kFixtures + "/instance_3pt.json");
  const RunResult b = run_cli("check " + kFixtures + "/instance_3pt.json");
  CHECK(a.out == b.out);
}

TEST_CASE("solve: the three-point fixture reaches p0 in a three-entry trace") {
  const RunResult r = run_cli("solve " + kFixtures + "/instance_3pt.json");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["solve"]["status"] == "fixed-point");
  CHECK(doc["solve"]["fixed_point"] == "p0");
  CHECK(doc["solve"]["trace"].size() == 3);
}

TEST_CASE("solve: --all-starts tabulates every admissible orbit") {
  const RunResult r = run_cli("solve --all-starts " + kFixtures + "/instance_3pt.json");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  REQUIRE(doc.contains("all_starts"));
  CHECK(doc["all_starts"].size() == 2);
  for (const auto& row : doc["all_starts"]) CHECK(row["fixed_point"] == "p0");
}

TEST_CASE("solve: the interval demo reaches the tolerance quickly") {
  const RunResult r = run_cli("solve --tol 1e-4 " + kFixtures + "/boydwong_demo.json");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["solve"]["status"] == "tolerance-reached");
  CHECK(doc["solve"]["value_trace"].size() <= 10'000);
}

TEST_CASE("solve: a hypothesis failure exits 2 with the report attached") {
  const std::string path = temp_file(
      "not_closed.json",
      R"({"points": ["a", "b"], "metric": {"kind": "path"},
          "relation": {"kind": "pairs", "pairs": [["a", "b"]]},
          "map": {"kind": "table", "images": ["b", "a"]},
          "phi": {"family": "linear", "alpha": 0.5}})");
  const RunResult r = run_cli("solve " + path);
  CHECK(r.exit_code == 2);
  const Json doc = Json::parse(r.out);
  CHECK(doc["solve"]["status"] == "hypothesis-failure");
  CHECK(doc["hypotheses"]["overall"] == false);
}

TEST_CASE("solve: piecewise tables need the explicit class declaration") {
  const char* body =
      R"({"points": ["a", "b"], "metric": {"kind": "path"},
          "relation": {"kind": "pairs", "pairs": [["a", "a"], ["b", "a"]]},
          "map": {"kind": "table", "images": ["a", "a"]},
          "phi": {"family": "table_piecewise",
                  "pieces": [{"start": 0.0, "slope": 0.5, "intercept": 0.0}]%s}})";
  char declared[1024], undeclared[1024];
  std::snprintf(declared, sizeof declared, body, ", \"declared_omega\": true");
  std::snprintf(undeclared, sizeof undeclared, body, "");

  const RunResult no = run_cli("solve " + temp_file("undeclared_table.json", undeclared));
  CHECK(no.exit_code == 2);  // validation refuses an unverified table

  const RunResult yes = run_cli("solve " + temp_file("declared_table.json", declared));
  CHECK(yes.exit_code == 0);
  CHECK(Json::parse(yes.out)["solve"]["fixed_point"] == "a");
}

TEST_CASE("certify: unique fixed point for the worked instance") {
  const RunResult r = run_cli("certify " + kFixtures + "/instance_3pt.json");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["uniqueness"]["unique"] == true);
  CHECK(doc["uniqueness"]["fixed_points"] == Json::array({"p0"}));
}

TEST_CASE("certify: split fixed points come back not-unique with the witness pair") {
  const RunResult r = run_cli("certify " + kFixtures + "/two_fixed_points.json");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["uniqueness"]["unique"] == false);
  CHECK(doc["uniqueness"]["image_connected"] == false);
  CHECK(doc["uniqueness"]["fixed_points"] == Json::array({"p0", "p2"}));
  CHECK(doc["uniqueness"]["disconnected_pair"] == Json::array({"p0", "p2"}));
}

TEST_CASE("certify: a failing contraction is rejected before certification") {
  const std::string path = temp_file(
      "identity.json",
      R"({"points": ["a", "b"], "metric": {"kind": "path"},
          "relation": {"kind": "universal"},
          "map": {"kind": "table", "images": ["a", "b"]},
          "phi": {"family": "linear", "alpha": 0.5}})");
  const RunResult r = run_cli("certify " + path);
  CHECK(r.exit_code == 2);
  const Json doc = Json::parse(r.out);
  CHECK(doc["hypotheses"]["overall"] == false);
  CHECK(!doc.contains("uniqueness"));
}

TEST_CASE("sweep: n = 2 passes and the cap rejects oversized carriers") {
  const RunResult ok = run_cli("sweep --n 2");
  CHECK(ok.exit_code == 0);
  const Json doc = Json::parse(ok.out);
  CHECK(doc["instances_checked"] == 16 * 4 * 2);
  CHECK(doc["violations"].empty());

  const RunResult capped = run_cli("sweep --n 7");
  CHECK(capped.exit_code == 1);
}

TEST_CASE("sweep: explicit control-function sets are honoured") {
  const RunResult r = run_cli("sweep --n 2 --phi-set rational_shrink,linear:0.6");
  CHECK(r.exit_code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["spec"]["phis"] == Json::array({"rational_shrink", "linear:0.6"}));
  CHECK(doc["instances_checked"] == 16 * 4 * 2);

  const RunResult bad = run_cli("sweep --n 2 --phi-set nonsense");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("sweep: dropping connectivity writes replayable separation fixtures") {
  const std::string out_path = "/tmp/relfix_test_sweep_drop_u.json";
  const RunResult r = run_cli("sweep --n 2 --drop u --out " + out_path);
  CHECK(r.exit_code == 0);
  std::ifstream in(out_path);
  REQUIRE(in.good());
  Json doc;
  in >> doc;
  REQUIRE(!doc["separations"].empty());
  const Json& first = doc["separations"][0];
  CHECK(first["claim"] == "multiple-fixed-points");
  REQUIRE(first.contains("instance"));
  // the embedded instance is a complete, parseable document
  CHECK(first["instance"].contains("points"));
  CHECK(first["instance"].contains("phi"));
}

TEST_CASE("demo: bundled fixtures match the files shipped in the repository") {
  const RunResult three = run_cli("demo instance_3pt");
  CHECK(three.exit_code == 0);
  std::ifstream file(kFixtures + "/instance_3pt.json");
  Json from_file;
  file >> from_file;
  CHECK(Json::parse(three.out) == from_file);

  const RunResult demo = run_cli("demo boydwong_demo");
  std::ifstream bw(kFixtures + "/boydwong_demo.json");
  Json bw_file;
  bw >> bw_file;
  CHECK(Json::parse(demo.out) == bw_file);

  const RunResult both = run_cli("demo");
  const Json both_doc = Json::parse(both.out);
  CHECK(both_doc.contains("instance_3pt"));
  CHECK(both_doc.contains("boydwong_demo"));
}

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "nprg/errors.hpp"
#include "nprg/experiment.hpp"

using namespace nprg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nprg_experiment_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHarmonicSweep = R"({
  "study": "sweep",
  "potential": {"kind": "harmonic"},
  "parameter": "m",
  "values": [2.0, 0.5, 1.0],
  "methods": ["couplings:2", "harmonic", "oracle"]
})";

// couplings:10 hits the mass pole at 0.02 and completes at 0.3.
const char* kFaultSweep = R"({
  "study": "sweep",
  "potential": {"kind": "double_well"},
  "parameter": "lambda0",
  "values": [0.02, 0.3],
  "methods": ["couplings:10"],
  "expected_failures": [{"method": "couplings:10", "value": 0.02}]
})";

}  // namespace

TEST_CASE("study names") {
  CHECK(study_from_string("flow-diagram") == Study::flow_diagram);
  CHECK(study_from_string("two_particle") == Study::two_particle);
  CHECK(to_string(Study::fixed_points) == "fixed_points");
  CHECK_THROWS_AS(study_from_string("bogus"), ConfigError);
}

TEST_CASE("config validation") {
  const fs::path out = scratch("invalid");
  Json bad = Json::parse(kHarmonicSweep);
  bad["colour"] = "blue";
  CHECK_THROWS_AS(run_experiment(bad, Study::sweep, out), ConfigError);
  Json wrong_method = Json::parse(kHarmonicSweep);
  wrong_method["methods"] = {"magic"};
  CHECK_THROWS_AS(run_experiment(wrong_method, Study::sweep, out), ConfigError);
  CHECK_THROWS_AS(run_experiment(Json::parse(kHarmonicSweep), Study::flow, out), ConfigError);
  CHECK_THROWS_AS(run_experiment(Json::parse(kHarmonicSweep), Study::sweep, out, 0), ConfigError);
  fs::remove_all(out);
}

TEST_CASE("sweep outputs are sorted and reproducible") {
  const fs::path a = scratch("repro_a");
  const fs::path b = scratch("repro_b");
  const RunManifest ma = run_experiment(Json::parse(kHarmonicSweep), Study::sweep, a, 1);
  const RunManifest mb = run_experiment(Json::parse(kHarmonicSweep), Study::sweep, b, 3);
  CHECK(ma.ok());
  CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
  REQUIRE(ma.outputs.size() == mb.outputs.size());
  for (std::size_t i = 0; i < ma.outputs.size(); ++i) CHECK(ma.outputs[i].sha256 == mb.outputs[i].sha256);

  const CsvTable t = read_csv(a / "results.csv");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0] == "0.5");
  CHECK(t.rows[2][0] == "2");
  CHECK(t.header[0] == "m");

  const Json manifest = load_config(a / "manifest.json");
  CHECK(manifest["version"].get<std::string>() == kArtifactVersion);
  CHECK(manifest["outputs"][0]["sha256"] == sha256_hex(slurp(a / "results.csv")));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("one failing point leaves the others intact") {
  const fs::path out = scratch("fault");
  const RunManifest m = run_experiment(Json::parse(kFaultSweep), Study::sweep, out, 2);
  REQUIRE(m.runs.size() == 2);
  CHECK_FALSE(m.runs[0].ok);
  CHECK(m.runs[0].expected_failure);
  CHECK(m.runs[0].detail.find("spinodal") != std::string::npos);
  CHECK(m.runs[1].ok);
  CHECK(m.ok());
  const CsvTable t = read_csv(out / "results.csv");
  CHECK(t.rows[0].back() == "expected_failure");
  CHECK(t.rows[1].back() == "ok");
  CHECK_FALSE(t.rows[1][2].empty());

  Json undeclared = Json::parse(kFaultSweep);
  undeclared.erase("expected_failures");
  CHECK_FALSE(run_experiment(undeclared, Study::sweep, out, 2).ok());
  fs::remove_all(out);
}

TEST_CASE("comparing identical manifests gives zero deviation") {
  Json cfg = Json::parse(kHarmonicSweep);
  cfg["methods"] = {"couplings:2", "harmonic"};
  const fs::path a = scratch("cmp_a");
  const fs::path b = scratch("cmp_b");
  run_experiment(cfg, Study::sweep, a);
  run_experiment(cfg, Study::sweep, b);
  const CsvTable t = compare_manifests({a / "manifest.json", b / "manifest.json"});
  CHECK(t.rows.size() == 3);
  int devs = 0;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c].rfind("rel_dev:", 0) != 0) continue;
    ++devs;
    for (const auto& row : t.rows) CHECK(std::stod(row[c]) == 0.0);
  }
  CHECK(devs == 2 * (5 + 2));

  const fs::path d = scratch("cmp_axis");
  run_experiment(Json::parse(kFaultSweep), Study::sweep, d);
  CHECK_THROWS_AS(compare_manifests({a / "manifest.json", d / "manifest.json"}), ConfigError);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(d);
}

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nprg/io.hpp"

namespace nprg {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Study { flow, sweep, flow_diagram, fixed_points, susy, two_particle, poles };
std::string to_string(Study s);
/// Accepts both "flow_diagram" and the verb spelling "flow-diagram".
Study study_from_string(const std::string& name);

struct RunRecord {
  std::string label;
  bool ok = false;
  bool expected_failure = false;
  std::string detail;  // termination or error text
  double seconds = 0.0;
};

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct RunManifest {
  Study study = Study::flow;
  Json config;
  std::vector<RunRecord> runs;
  std::vector<OutputFile> outputs;
  Json summary = Json::object();
  double wall_seconds = 0.0;

  /// True when every run either succeeded or was declared expected-to-fail.
  bool ok() const;
  Json to_json() const;
};

Json load_config(const std::filesystem::path& path);

/// Validates the config (unknown keys throw ConfigError), runs the study with
/// up to `jobs` workers and writes outputs plus manifest.json into out_dir.
/// Per-point solver errors are recorded in the manifest, never thrown.
RunManifest run_experiment(const Json& config, Study study, const std::filesystem::path& out_dir, int jobs = 1);

/// Outer join of the manifests' tables on their shared parameter axis, with
/// rel_dev:<column> against the oracle column of the same quantity, or
/// against the first manifest's column when no oracle column exists.
/// Throws ConfigError on axis mismatch.
CsvTable compare_manifests(const std::vector<std::filesystem::path>& manifests);

}  // namespace nprg

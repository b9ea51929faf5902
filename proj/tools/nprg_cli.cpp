#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nprg/errors.hpp"
#include "nprg/experiment.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitFailures = 2;

int run_study(nprg::Study study, const fs::path& config, const fs::path& out, int jobs) {
  const nprg::Json cfg = nprg::load_config(config);
  fs::path dir = out;
  if (dir.empty()) dir = cfg.contains("output") ? fs::path(cfg["output"].get<std::string>()) : fs::path("out") / nprg::to_string(study);
  nprg::Json clean = cfg;
  clean.erase("output");
  const nprg::RunManifest m = nprg::run_experiment(clean, study, dir, jobs);
  int failed = 0;
  for (const auto& r : m.runs) {
    const char* status = r.ok ? "ok" : (r.expected_failure ? "expected_failure" : "FAILED");
    std::cout << r.label << ": " << status;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << '\n';
    failed += !(r.ok || r.expected_failure);
  }
  std::cout << "wrote " << m.outputs.size() << " files and manifest.json to " << dir.string() << '\n';
  return failed ? kExitFailures : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LPA Wegner-Houghton renormalization group for quantum mechanics"};
  app.require_subcommand(1);

  fs::path config, out;
  int jobs = 1;
  const std::vector<std::pair<std::string, std::string>> verbs{
      {"flow", "integrate one flow and extract observables"},
      {"sweep", "observables over a parameter grid for several methods"},
      {"flow-diagram", "dimensionless flows from a seed grid in (ahat_2, ahat_4)"},
      {"fixed-points", "fixed points of the truncated dimensionless flow"},
      {"susy", "supersymmetric ground-state energy scan"},
      {"two-particle", "gap of two coupled double wells"},
      {"poles", "pole decomposition of the two-point function"}};
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }
  std::vector<fs::path> manifests;
  fs::path compare_out;
  CLI::App* cmp = app.add_subcommand("compare", "join sweep manifests on their parameter axis");
  cmp->add_option("manifests", manifests, "manifest.json files")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", compare_out, "output CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmp->parsed()) {
      const std::string csv = nprg::to_csv(nprg::compare_manifests(manifests));
      if (compare_out.empty())
        std::cout << csv;
      else
        nprg::write_file(compare_out, csv);
      return 0;
    }
    for (const auto& [name, help] : verbs)
      if (app.got_subcommand(name)) return run_study(nprg::study_from_string(name), config, out, jobs);
  } catch (const nprg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

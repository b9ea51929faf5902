#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "nprg/coupling_flow.hpp"
#include "nprg/fixed_points.hpp"
#include "nprg/grid_flow.hpp"
#include "nprg/observables.hpp"
#include "nprg/polynomial.hpp"

namespace nprg {

using Json = nlohmann::ordered_json;

/// JSON record {kind, params, coeffs}. Kinds: single_well, double_well,
/// asym_double_well (lambda0, h0), harmonic (m), susy_plus, susy_minus (g),
/// polynomial (coeffs, ascending powers).
struct PotentialSpec {
  std::string kind = "polynomial";
  std::map<std::string, double> params;
  std::vector<double> coeffs;
};

/// Throws ConfigError on unknown kinds, missing or unknown params.
Polynomial1D build_potential(const PotentialSpec& spec);
/// Polynomial record of p (kind "polynomial").
PotentialSpec potential_record(const Polynomial1D& p);

Json to_json(const PotentialSpec& spec);
/// Strict: unknown keys throw ConfigError.
PotentialSpec potential_from_json(const Json& j);

/// Throws ConfigError naming the first key of j not in allowed.
void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where);

/// Shortest text with 17 significant digits; nan and inf spelled out.
std::string format_number(double x);

Json to_json(const ObservableSet& o);
std::vector<std::string> observable_columns();
std::vector<std::string> observable_row(const ObservableSet& o);

/// RFC 4180 quoting where needed.
std::string csv_line(const std::vector<std::string>& cells);
/// Splits one line written by csv_line.
std::vector<std::string> csv_split(const std::string& line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
std::string to_csv(const CsvTable& t);
CsvTable read_csv(const std::filesystem::path& path);

/// Rows (lambda, x, V), one block per snapshot.
CsvTable trajectory_table(const FlowTrajectory& traj);
/// Rows (lambda, a_0, ..., a_N).
CsvTable trajectory_table(const CouplingTrajectory& traj);
/// Rows (t, ahat_0, ..., ahat_N).
CsvTable seed_table(const SeedTrajectory& seed);

Json to_json(const FixedPoint& fp);

/// Writes the file (creating parent directories) and returns its SHA-256 hex digest.
std::string write_file(const std::filesystem::path& path, const std::string& content);
std::string sha256_hex(const std::string& content);

}  // namespace nprg

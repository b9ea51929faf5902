#include "nprg/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "nprg/errors.hpp"
#include "nprg/potentials.hpp"

namespace nprg {

namespace {

double param(const PotentialSpec& s, const std::string& name) {
  const auto it = s.params.find(name);
  if (it == s.params.end()) throw ConfigError("potential '" + s.kind + "' needs parameter '" + name + "'");
  return it->second;
}

void allow_params(const PotentialSpec& s, const std::vector<std::string>& names) {
  for (const auto& [k, v] : s.params)
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw ConfigError("potential '" + s.kind + "' has unknown parameter '" + k + "'");
  if (!s.coeffs.empty() && s.kind != "polynomial") throw ConfigError("only polynomial potentials take coeffs");
}

}  // namespace

Polynomial1D build_potential(const PotentialSpec& s) {
  if (s.kind == "single_well" || s.kind == "double_well") {
    allow_params(s, {"lambda0"});
    return make_standard_potential(well_kind_from_string(s.kind), param(s, "lambda0"));
  }
  if (s.kind == "asym_double_well") {
    allow_params(s, {"lambda0", "h0"});
    return make_standard_potential(WellKind::asym_double_well, param(s, "lambda0"), param(s, "h0"));
  }
  if (s.kind == "harmonic") {
    allow_params(s, {"m"});
    const double m = param(s, "m");
    if (!(m > 0.0)) throw ConfigError("harmonic potential needs m > 0");
    return Polynomial1D{0.0, 0.0, 0.5 * m * m};
  }
  if (s.kind == "susy_plus" || s.kind == "susy_minus") {
    allow_params(s, {"g"});
    const auto [plus, minus] = susy_partner_potentials(SusyPotentialW{param(s, "g")});
    return s.kind == "susy_plus" ? plus : minus;
  }
  if (s.kind == "polynomial") {
    allow_params(s, {});
    if (s.coeffs.empty()) throw ConfigError("polynomial potential needs coeffs");
    return Polynomial1D(Eigen::Map<const Eigen::VectorXd>(s.coeffs.data(), static_cast<Eigen::Index>(s.coeffs.size())));
  }
  throw ConfigError("unknown potential kind '" + s.kind + "'");
}

PotentialSpec potential_record(const Polynomial1D& p) {
  PotentialSpec s;
  for (int n = 0; n <= p.degree(); ++n) s.coeffs.push_back(p.coeff(n));
  return s;
}

void require_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown key '" + k + "' in " + where);
}

Json to_json(const PotentialSpec& s) {
  Json j;
  j["kind"] = s.kind;
  j["params"] = Json::object();
  for (const auto& [k, v] : s.params) j["params"][k] = v;
  j["coeffs"] = s.coeffs;
  return j;
}

PotentialSpec potential_from_json(const Json& j) {
  require_keys(j, {"kind", "params", "coeffs"}, "potential");
  PotentialSpec s;
  try {
    s.kind = j.at("kind").get<std::string>();
    if (j.contains("params")) {
      require_keys(j["params"], {"lambda0", "h0", "m", "g"}, "potential.params");
      for (const auto& [k, v] : j["params"].items()) s.params[k] = v.get<double>();
    }
    if (j.contains("coeffs")) s.coeffs = j["coeffs"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  build_potential(s);
  return s;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

Json to_json(const ObservableSet& o) {
  Json j;
  j["x_vev"] = number(o.x_vev);
  j["e0"] = number(o.e0);
  j["m_eff"] = number(o.m_eff);
  j["lambda_eff"] = number(o.lambda_eff);
  j["m1"] = number(o.m1);
  j["m2"] = number(o.m2);
  j["m4_connected"] = number(o.m4_connected);
  j["m4"] = number(o.m4);
  j["moments_defined"] = o.moments_defined;
  return j;
}

std::vector<std::string> observable_columns() {
  return {"x_vev", "e0", "m_eff", "lambda_eff", "m1", "m2", "m4_connected", "m4", "moments_defined"};
}

std::vector<std::string> observable_row(const ObservableSet& o) {
  return {format_number(o.x_vev), format_number(o.e0),           format_number(o.m_eff),
          format_number(o.lambda_eff), format_number(o.m1),      format_number(o.m2),
          format_number(o.m4_connected), format_number(o.m4), o.moments_defined ? "true" : "false"};
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out += c;
      continue;
    }
    out += '"';
    for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    out += '"';
  }
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  return out;
}

std::string to_csv(const CsvTable& t) {
  std::string out = csv_line(t.header) + '\n';
  for (const auto& r : t.rows) out += csv_line(r) + '\n';
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + " is empty");
  t.header = csv_split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(csv_split(line));
  return t;
}

CsvTable trajectory_table(const FlowTrajectory& traj) {
  CsvTable t{{"lambda", "x", "V"}, {}};
  for (const auto& s : traj.snapshots)
    for (int i = 0; i < s.grid.points(); ++i)
      t.rows.push_back({format_number(s.lambda), format_number(s.grid.x(i)), format_number(s.values(i))});
  return t;
}

CsvTable trajectory_table(const CouplingTrajectory& traj) {
  CsvTable t{{"lambda"}, {}};
  const int n = traj.snapshots.empty() ? -1 : traj.snapshots.front().order();
  for (int k = 0; k <= n; ++k) t.header.push_back("a_" + std::to_string(k));
  for (const auto& s : traj.snapshots) {
    std::vector<std::string> row{format_number(s.lambda)};
    for (Eigen::Index k = 0; k < s.a.size(); ++k) row.push_back(format_number(s.a(k)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable seed_table(const SeedTrajectory& seed) {
  CsvTable t{{"t"}, {}};
  const int n = seed.samples.empty() ? -1 : seed.samples.front().order();
  for (int k = 0; k <= n; ++k) t.header.push_back("ahat_" + std::to_string(k));
  for (const auto& s : seed.samples) {
    std::vector<std::string> row{format_number(s.t)};
    for (Eigen::Index k = 0; k < s.ahat.size(); ++k) row.push_back(format_number(s.ahat(k)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Json to_json(const FixedPoint& fp) {
  Json j;
  j["ahat"] = std::vector<double>(fp.ahat.data(), fp.ahat.data() + fp.ahat.size());
  Json eig = Json::array();
  for (Eigen::Index k = 0; k < fp.eigenvalues.size(); ++k)
    eig.push_back({fp.eigenvalues(k).real(), fp.eigenvalues(k).imag()});
  j["eigenvalues"] = eig;
  j["relevant"] = fp.relevant;
  j["classification"] = fp.classification();
  return j;
}

std::string sha256_hex(const std::string& content) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(content.data(), content.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + path.string());
  return sha256_hex(content);
}

}  // namespace nprg

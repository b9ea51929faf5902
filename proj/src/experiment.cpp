#include "nprg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "nprg/errors.hpp"
#include "nprg/oracle.hpp"
#include "nprg/parallel.hpp"
#include "nprg/potentials.hpp"
#include "nprg/references.hpp"
#include "nprg/two_field.hpp"

namespace nprg {

namespace fs = std::filesystem;

std::string to_string(Study s) {
  switch (s) {
    case Study::flow: return "flow";
    case Study::sweep: return "sweep";
    case Study::flow_diagram: return "flow_diagram";
    case Study::fixed_points: return "fixed_points";
    case Study::susy: return "susy";
    case Study::two_particle: return "two_particle";
    case Study::poles: return "poles";
  }
  return "unknown";
}

Study study_from_string(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (Study s : {Study::flow, Study::sweep, Study::flow_diagram, Study::fixed_points, Study::susy,
                  Study::two_particle, Study::poles})
    if (to_string(s) == n) return s;
  throw ConfigError("unknown study '" + name + "'");
}

bool RunManifest::ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunRecord& r) { return r.ok || r.expected_failure; });
}

Json RunManifest::to_json() const {
  Json j;
  j["artifact"] = "nprg";
  j["version"] = kArtifactVersion;
  j["study"] = to_string(study);
  j["config"] = config;
  j["runs"] = Json::array();
  for (const auto& r : runs)
    j["runs"].push_back({{"label", r.label},
                         {"status", r.ok ? "ok" : (r.expected_failure ? "expected_failure" : "failed")},
                         {"detail", r.detail},
                         {"seconds", r.seconds}});
  j["outputs"] = Json::array();
  for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
  j["summary"] = summary;
  j["wall_seconds"] = wall_seconds;
  return j;
}

Json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

namespace {

using Clock = std::chrono::steady_clock;

// Shortest round-trip text, for labels only.
std::string label_number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <typename T>
T get(const Json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

template <typename T>
T need(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'");
  return get<T>(j, key, T{});
}

std::pair<double, double> range(const Json& j, const std::string& key, std::pair<double, double> fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = get<std::vector<double>>(j, key, {});
  if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("'" + key + "' must be [lo, hi] with lo < hi");
  return {v[0], v[1]};
}

FlowConfig parse_flow(const Json& j) {
  FlowConfig c;
  if (j.is_null()) return c;
  require_keys(j, {"lambda0", "lambda_ir", "rel_tol", "abs_tol", "snapshot_schedule", "spinodal_guard", "max_steps",
                   "uv_completion"},
               "flow");
  c.lambda0 = get(j, "lambda0", c.lambda0);
  c.lambda_ir = get(j, "lambda_ir", c.lambda_ir);
  c.rel_tol = get(j, "rel_tol", c.rel_tol);
  c.abs_tol = get(j, "abs_tol", c.abs_tol);
  c.snapshot_schedule = get(j, "snapshot_schedule", c.snapshot_schedule);
  c.spinodal_guard = get(j, "spinodal_guard", c.spinodal_guard);
  c.max_steps = get(j, "max_steps", c.max_steps);
  c.uv_completion = get(j, "uv_completion", c.uv_completion);
  c.validate();
  return c;
}

struct GridSpec {
  std::optional<double> x_min, x_max, spacing;
  std::optional<int> points;
};

struct SolverSpec {
  std::string method = "grid";
  int order = 16;
  std::optional<bool> at_minimum;  // unset: minimum for asymmetric and SUSY potentials
  std::string branch;  // "left" or "right" for degenerate minima
  GridSpec grid;
};

GridSpec parse_grid(const Json& j) {
  GridSpec g;
  if (j.is_null()) return g;
  require_keys(j, {"x_min", "x_max", "points", "spacing"}, "solver.grid");
  if (j.contains("x_min")) g.x_min = get<double>(j, "x_min", 0.0);
  if (j.contains("x_max")) g.x_max = get<double>(j, "x_max", 0.0);
  if (j.contains("points")) g.points = get<int>(j, "points", 0);
  if (j.contains("spacing")) g.spacing = get<double>(j, "spacing", 0.0);
  if (g.points && g.spacing) throw ConfigError("solver.grid takes points or spacing, not both");
  if (g.spacing && !(*g.spacing > 0.0)) throw ConfigError("solver.grid.spacing must be positive");
  return g;
}

SolverSpec parse_solver(const Json& j) {
  SolverSpec s;
  if (j.is_null()) return s;
  require_keys(j, {"method", "order", "expansion", "branch", "grid"}, "solver");
  s.method = get<std::string>(j, "method", s.method);
  if (s.method != "grid" && s.method != "couplings") throw ConfigError("solver.method must be grid or couplings");
  s.order = get(j, "order", s.order);
  if (s.order < 2) throw ConfigError("solver.order must be at least 2");
  if (j.contains("expansion")) {
    const auto expansion = get<std::string>(j, "expansion", "");
    if (expansion != "origin" && expansion != "minimum") throw ConfigError("solver.expansion must be origin or minimum");
    s.at_minimum = expansion == "minimum";
  }
  s.branch = get<std::string>(j, "branch", "");
  if (!s.branch.empty() && s.branch != "left" && s.branch != "right")
    throw ConfigError("solver.branch must be left or right");
  s.grid = parse_grid(j.contains("grid") ? j["grid"] : Json());
  return s;
}

// Default domain: wide enough for the wells and, for SUSY, the second zero of W at 1/g.
Grid1D solver_grid(const PotentialSpec& p, const GridSpec& g) {
  double lo = -8.0, hi = 8.0;
  if (p.kind == "double_well" || p.kind == "asym_double_well") {
    const double x = std::max(8.0, 1.0 / std::sqrt(p.params.at("lambda0")) + 3.0);
    lo = -x;
    hi = x;
  } else if (p.kind == "susy_plus" || p.kind == "susy_minus") {
    const double gg = std::abs(p.params.at("g"));
    hi = gg > 0.0 ? std::min(1.0 / gg + 6.0, 40.0) : 40.0;
  }
  lo = g.x_min.value_or(lo);
  hi = g.x_max.value_or(hi);
  if (!(lo < hi)) throw ConfigError("solver.grid needs x_min < x_max");
  const int points = g.points ? *g.points : static_cast<int>(std::lround((hi - lo) / g.spacing.value_or(0.01))) + 1;
  return Grid1D(lo, hi, points);
}

Grid1D oracle_grid(const PotentialSpec& p) {
  if (p.kind == "susy_plus" || p.kind == "susy_minus") {
    const double gg = std::abs(p.params.at("g"));
    const double hi = gg > 0.0 ? std::min(1.0 / gg + 10.0, 50.0) : 10.0;
    return Grid1D(-10.0, hi, static_cast<int>(std::lround((hi + 10.0) / 0.01)) + 1);
  }
  return default_oracle_grid();
}

using Quantities = std::vector<std::pair<std::string, double>>;

Quantities from_observables(const ObservableSet& o) {
  return {{"e0", o.e0}, {"gap", o.m_eff}, {"m1", o.m1}, {"m2", o.m2}, {"m4", o.m4}};
}

struct FlowOutcome {
  Quantities q;
  std::string detail;
  std::optional<CsvTable> trajectory;
  ObservableSet observables;
};

FlowOutcome run_flow(const PotentialSpec& spec, const SolverSpec& s, const FlowConfig& cfg, bool keep_trajectory) {
  const Polynomial1D p = build_potential(spec);
  FlowOutcome out;
  if (s.method == "grid") {
    const FlowTrajectory tr = evolve_grid(p, solver_grid(spec, s.grid), cfg);
    out.detail = tr.termination.describe();
    if (keep_trajectory) out.trajectory = trajectory_table(tr);
    out.observables = extract_from_trajectory(tr);
  } else {
    double x0 = 0.0;
    const bool at_minimum =
        s.at_minimum.value_or(spec.kind == "asym_double_well" || spec.kind == "susy_plus" || spec.kind == "susy_minus");
    if (at_minimum) {
      try {
        x0 = shift_to_minimum(p).x_min;
      } catch (const DegenerateMinimumError& e) {
        if (s.branch.empty()) throw;
        x0 = s.branch == "left" ? e.left() : e.right();
      }
    }
    const CouplingTrajectory tr = evolve_couplings(couplings_from_polynomial(p, s.order, cfg.lambda0, x0), cfg);
    out.detail = tr.termination.describe();
    if (keep_trajectory) out.trajectory = trajectory_table(tr);
    out.observables = extract_from_trajectory(tr);
  }
  out.q = from_observables(out.observables);
  return out;
}

Quantities run_oracle(const PotentialSpec& spec) {
  const SpectralSolution sol = solve_schrodinger_1d(build_potential(spec), oracle_grid(spec), 2);
  const double m1 = wavefunction_moment(sol, 1);
  const double x2 = wavefunction_moment(sol, 2);
  const double x3 = wavefunction_moment(sol, 3);
  const double x4 = wavefunction_moment(sol, 4);
  const double m4 = x4 - 4.0 * x3 * m1 + 6.0 * x2 * m1 * m1 - 3.0 * std::pow(m1, 4);
  return {{"e0", sol.energies[0]}, {"gap", sol.energies[1] - sol.energies[0]}, {"m1", m1}, {"m2", x2 - m1 * m1},
          {"m4", m4}};
}

struct ExpectedFailure {
  std::string method;
  double value;
};

std::vector<ExpectedFailure> parse_expected(const Json& j, bool with_method) {
  std::vector<ExpectedFailure> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ConfigError("expected_failures must be an array");
  for (const auto& e : j) {
    require_keys(e, with_method ? std::vector<std::string>{"method", "value"} : std::vector<std::string>{"value"},
                 "expected_failures");
    out.push_back({with_method ? need<std::string>(e, "method", "expected_failures") : std::string(),
                   need<double>(e, "value", "expected_failures")});
  }
  return out;
}

bool is_expected(const std::vector<ExpectedFailure>& ex, const std::string& method, double value) {
  return std::any_of(ex.begin(), ex.end(), [&](const ExpectedFailure& e) {
    return e.method == method && std::abs(e.value - value) <= 1e-12 * std::max(1.0, std::abs(value));
  });
}

struct Writer {
  fs::path dir;
  RunManifest& manifest;

  void write(const std::string& rel, const std::string& content) {
    manifest.outputs.push_back({rel, write_file(dir / rel, content)});
  }
};

struct Cell {
  Quantities q;
  bool ok = false;
  std::string detail;
  double seconds = 0.0;
};

template <typename Fn>
Cell guarded(Fn&& fn) {
  Cell c;
  const auto t0 = Clock::now();
  try {
    fn(c);
    c.ok = true;
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  c.seconds = seconds_since(t0);
  return c;
}

// ---- flow ----

void study_flow(const Json& cfg, Writer& w, int) {
  require_keys(cfg, {"study", "description", "potential", "solver", "flow", "expected_failure"}, "config");
  const PotentialSpec spec = potential_from_json(need<Json>(cfg, "potential", "flow study"));
  const SolverSpec solver = parse_solver(cfg.contains("solver") ? cfg["solver"] : Json());
  const FlowConfig fc = parse_flow(cfg.contains("flow") ? cfg["flow"] : Json());
  const bool expected = get(cfg, "expected_failure", false);

  std::optional<CsvTable> traj;
  ObservableSet obs;
  const Cell c = guarded([&](Cell& cell) {
    FlowOutcome o = run_flow(spec, solver, fc, true);
    cell.detail = o.detail;
    traj = std::move(o.trajectory);
    obs = o.observables;
  });
  w.manifest.runs.push_back({solver.method, c.ok, expected && !c.ok, c.detail, c.seconds});
  if (traj) w.write("trajectory.csv", to_csv(*traj));
  if (c.ok) w.write("observables.json", to_json(obs).dump(2) + "\n");
}

// ---- sweep / susy ----

struct MethodSpec {
  std::string name;
  std::vector<std::string> columns;
};

MethodSpec method_spec(const std::string& name) {
  const std::vector<std::string> all{"e0", "gap", "m1", "m2", "m4"};
  if (name == "grid" || name == "couplings" || name == "oracle" || name.rfind("couplings:", 0) == 0)
    return {name, all};
  if (name == "perturbation" || name == "valley") return {name, {"e0"}};
  if (name == "instanton") return {name, {"gap"}};
  if (name == "harmonic") return {name, {"e0", "gap"}};
  throw ConfigError("unknown method '" + name + "'");
}

Cell run_method(const std::string& method, const PotentialSpec& spec, const SolverSpec& solver, const FlowConfig& fc) {
  return guarded([&](Cell& c) {
    if (method == "grid" || method.rfind("couplings", 0) == 0) {
      SolverSpec s = solver;
      s.method = method == "grid" ? "grid" : "couplings";
      if (method.rfind("couplings:", 0) == 0) s.order = std::stoi(method.substr(10));
      FlowOutcome o = run_flow(spec, s, fc, false);
      c.q = o.q;
      c.detail = o.detail;
    } else if (method == "oracle") {
      c.q = run_oracle(spec);
    } else {
      auto param = [&](const std::string& k) {
        const auto it = spec.params.find(k);
        if (it == spec.params.end()) throw ConfigError("method " + method + " needs parameter " + k);
        return it->second;
      };
      ReferenceEstimate r;
      if (method == "perturbation") {
        if (spec.kind != "single_well") throw ConfigError("perturbation applies to single_well only");
        r = perturbation2_reference(0, param("lambda0"));
        c.q = {{"e0", r.value}};
      } else if (method == "instanton") {
        if (spec.kind != "double_well") throw ConfigError("instanton applies to double_well only");
        r = instanton_reference(param("lambda0"));
        c.q = {{"gap", r.value}};
      } else if (method == "valley") {
        if (spec.kind != "susy_plus") throw ConfigError("valley applies to susy_plus only");
        r = valley_susy_reference(param("g"));
        c.q = {{"e0", r.value}};
      } else {
        if (spec.kind != "harmonic") throw ConfigError("harmonic applies to harmonic only");
        const double m = param("m");
        c.q = {{"e0", 0.5 * m}, {"gap", m}};
      }
      c.detail = r.validity_note;
    }
  });
}

std::vector<double> sorted_values(const Json& cfg) {
  auto v = need<std::vector<double>>(cfg, "values", "config");
  if (v.empty()) throw ConfigError("values must not be empty");
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void study_sweep(const Json& cfg, Writer& w, int jobs, bool susy) {
  require_keys(cfg, {"study", "description", "potential", "parameter", "values", "methods", "solver", "flow",
                     "expected_failures"},
               "config");
  PotentialSpec base;
  if (cfg.contains("potential")) {
    Json p = cfg["potential"];
    require_keys(p, {"kind", "params", "coeffs"}, "potential");
    base.kind = need<std::string>(p, "kind", "potential");
    if (p.contains("params"))
      for (const auto& [k, v] : p["params"].items()) base.params[k] = v.get<double>();
  } else if (susy) {
    base.kind = "susy_plus";
  } else {
    throw ConfigError("sweep needs 'potential'");
  }
  if (susy && base.kind != "susy_plus" && base.kind != "susy_minus")
    throw ConfigError("susy study needs a susy_plus or susy_minus potential");
  const std::string axis = get<std::string>(cfg, "parameter", susy ? "g" : "lambda0");
  const std::vector<double> values = sorted_values(cfg);
  const std::vector<std::string> method_names = get<std::vector<std::string>>(
      cfg, "methods", susy ? std::vector<std::string>{"grid", "couplings", "oracle", "valley"}
                           : std::vector<std::string>{"grid", "couplings", "oracle"});
  std::vector<MethodSpec> methods;
  for (const auto& m : method_names) methods.push_back(method_spec(m));
  const SolverSpec solver = parse_solver(cfg.contains("solver") ? cfg["solver"] : Json());
  const FlowConfig fc = parse_flow(cfg.contains("flow") ? cfg["flow"] : Json());
  const auto expected = parse_expected(cfg.contains("expected_failures") ? cfg["expected_failures"] : Json(), true);

  std::vector<PotentialSpec> specs;
  for (double v : values) {
    PotentialSpec s = base;
    s.params[axis] = v;
    build_potential(s);  // rejects unknown axes early
    specs.push_back(std::move(s));
  }

  std::vector<Cell> cells(values.size() * methods.size());
  parallel_for(cells.size(), jobs, [&](std::size_t k) {
    cells[k] = run_method(methods[k % methods.size()].name, specs[k / methods.size()], solver, fc);
  });

  CsvTable table{{axis}, {}};
  for (const auto& m : methods) {
    for (const auto& c : m.columns) table.header.push_back(m.name + ":" + c);
    table.header.push_back(m.name + ":status");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<std::string> row{format_number(values[i])};
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const Cell& c = cells[i * methods.size() + m];
      const bool exp = is_expected(expected, methods[m].name, values[i]);
      for (const auto& col : methods[m].columns) {
        const auto it = std::find_if(c.q.begin(), c.q.end(), [&](const auto& p) { return p.first == col; });
        row.push_back(c.ok && it != c.q.end() ? format_number(it->second) : "");
      }
      row.push_back(c.ok ? "ok" : (exp ? "expected_failure" : "failed"));
      w.manifest.runs.push_back(
          {methods[m].name + "@" + axis + "=" + label_number(values[i]), c.ok, exp && !c.ok, c.detail, c.seconds});
    }
    table.rows.push_back(std::move(row));
  }
  w.write("results.csv", to_csv(table));
  w.manifest.summary["axis"] = axis;
  w.manifest.summary["table"] = "results.csv";
}

// ---- poles ----

void study_poles(const Json& cfg, Writer& w, int jobs) {
  require_keys(cfg, {"study", "description", "potential", "parameter", "values", "states", "columns"}, "config");
  Json p = need<Json>(cfg, "potential", "poles study");
  require_keys(p, {"kind", "params", "coeffs"}, "potential");
  PotentialSpec base;
  base.kind = need<std::string>(p, "kind", "potential");
  if (p.contains("params"))
    for (const auto& [k, v] : p["params"].items()) base.params[k] = v.get<double>();
  const std::string axis = get<std::string>(cfg, "parameter", "lambda0");
  const std::vector<double> values = sorted_values(cfg);
  const int states = get(cfg, "states", 40);
  const int shown = get(cfg, "columns", 5);
  if (states < 2 || shown < 1 || shown >= states) throw ConfigError("poles needs 1 <= columns < states");

  std::vector<Cell> cells(values.size());
  parallel_for(values.size(), jobs, [&](std::size_t i) {
    cells[i] = guarded([&](Cell& c) {
      PotentialSpec s = base;
      s.params[axis] = values[i];
      const SpectralSolution sol = solve_schrodinger_1d(build_potential(s), default_oracle_grid(), states);
      const PoleDecomposition pd = pole_coefficients(sol, states);
      c.q = {{"e0", sol.energies[0]}, {"gap", sol.energies[1] - sol.energies[0]}};
      for (int n = 1; n <= shown; ++n) c.q.push_back({"D_" + std::to_string(n), pd.d[n]});
      c.q.push_back({"residual", pd.residual});
    });
  });

  CsvTable table{{axis, "e0", "gap"}, {}};
  for (int n = 1; n <= shown; ++n) table.header.push_back("D_" + std::to_string(n));
  table.header.push_back("residual");
  table.header.push_back("status");
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<std::string> row{format_number(values[i])};
    for (std::size_t k = 1; k + 1 < table.header.size(); ++k)
      row.push_back(cells[i].ok ? format_number(cells[i].q[k - 1].second) : "");
    row.push_back(cells[i].ok ? "ok" : "failed");
    table.rows.push_back(std::move(row));
    w.manifest.runs.push_back({"oracle@" + axis + "=" + label_number(values[i]), cells[i].ok, false,
                               cells[i].detail, cells[i].seconds});
  }
  w.write("poles.csv", to_csv(table));
  w.manifest.summary["axis"] = axis;
  w.manifest.summary["table"] = "poles.csv";
}

// ---- two particle ----

void study_two_particle(const Json& cfg, Writer& w, int jobs) {
  require_keys(cfg, {"study", "description", "lambda0", "interaction", "values", "order", "flow",
                     "expected_failures"},
               "config");
  const double lambda0 = need<double>(cfg, "lambda0", "two_particle study");
  const Interaction::Kind kind = interaction_kind_from_string(need<std::string>(cfg, "interaction", "two_particle study"));
  const std::vector<double> values = sorted_values(cfg);
  const int order = get(cfg, "order", 12);
  const FlowConfig fc = parse_flow(cfg.contains("flow") ? cfg["flow"] : Json());
  const auto expected = parse_expected(cfg.contains("expected_failures") ? cfg["expected_failures"] : Json(), false);

  std::vector<Cell> nprg(values.size()), pert(values.size());
  parallel_for(2 * values.size(), jobs, [&](std::size_t k) {
    const std::size_t i = k / 2;
    const Interaction f{kind, values[i]};
    if (k % 2 == 0) {
      nprg[i] = guarded([&](Cell& c) {
        const Series2 v0 = series_from_bivariate(rotate_to_normal_coordinates(make_two_particle_potential(lambda0, f)), order);
        const TwoFieldTrajectory tr = evolve_two_field(v0, fc);
        c.detail = tr.termination.describe();
        if (!tr.termination.completed()) throw ExtractionError("two-field flow stopped: " + c.detail);
        c.q = {{"gap", two_field_gap(tr.last())}};
      });
    } else {
      pert[i] = guarded([&](Cell& c) { c.q = {{"gap", two_particle_first_order_gap(lambda0, f)}}; });
    }
  });

  CsvTable table{{"strength", "nprg:gap", "nprg:status", "perturbation:gap", "perturbation:status"}, {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool exp = std::any_of(expected.begin(), expected.end(), [&](const ExpectedFailure& e) {
      return std::abs(e.value - values[i]) <= 1e-12 * std::max(1.0, std::abs(values[i]));
    });
    table.rows.push_back({format_number(values[i]), nprg[i].ok ? format_number(nprg[i].q[0].second) : "",
                          nprg[i].ok ? "ok" : (exp ? "expected_failure" : "failed"),
                          pert[i].ok ? format_number(pert[i].q[0].second) : "", pert[i].ok ? "ok" : "failed"});
    const std::string at = "@strength=" + label_number(values[i]);
    w.manifest.runs.push_back({"nprg" + at, nprg[i].ok, exp && !nprg[i].ok, nprg[i].detail, nprg[i].seconds});
    w.manifest.runs.push_back({"perturbation" + at, pert[i].ok, false, pert[i].detail, pert[i].seconds});
  }
  w.write("results.csv", to_csv(table));
  w.manifest.summary["axis"] = "strength";
  w.manifest.summary["table"] = "results.csv";
}

// ---- flow diagram ----

std::vector<int> orders(const Json& cfg, std::vector<int> fallback) {
  auto v = get(cfg, "orders", fallback);
  if (v.empty()) throw ConfigError("orders must not be empty");
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void study_flow_diagram(const Json& cfg, Writer& w, int jobs) {
  require_keys(cfg, {"study", "description", "orders", "a2_range", "a4_range", "seeds", "t_max", "sample_dt",
                     "symmetric_threshold"},
               "config");
  FlowDiagramConfig base;
  base.a2_range = range(cfg, "a2_range", base.a2_range);
  base.a4_range = range(cfg, "a4_range", base.a4_range);
  const auto seeds = get(cfg, "seeds", std::vector<int>{base.seeds_a2, base.seeds_a4});
  if (seeds.size() != 2) throw ConfigError("seeds must be [n_a2, n_a4]");
  base.seeds_a2 = seeds[0];
  base.seeds_a4 = seeds[1];
  base.t_max = get(cfg, "t_max", base.t_max);
  base.sample_dt = get(cfg, "sample_dt", base.sample_dt);
  base.symmetric_threshold = get(cfg, "symmetric_threshold", base.symmetric_threshold);
  base.keep_samples = true;
  base.jobs = jobs;
  if (!(base.t_max > 0.0 && base.sample_dt > 0.0)) throw ConfigError("t_max and sample_dt must be positive");

  Json fractions = Json::object();
  for (int n : orders(cfg, {4, 6, 10})) {
    FlowDiagramConfig c = base;
    c.order = n;
    const auto t0 = Clock::now();
    const FlowDiagram d = compute_flow_diagram(c);
    const std::string dir = "N" + std::to_string(n) + "/";
    CsvTable index{{"i_a2", "i_a4", "a2", "a4", "phase", "t_end", "file"}, {}};
    for (std::size_t k = 0; k < d.seeds.size(); ++k) {
      const auto& s = d.seeds[k];
      const std::string i = std::to_string(k % c.seeds_a2), j = std::to_string(k / c.seeds_a2);
      const std::string file = "seed_" + i + "_" + j + ".csv";
      w.write(dir + file, to_csv(seed_table(s)));
      index.rows.push_back({i, j, format_number(s.a2), format_number(s.a4), to_string(s.phase), format_number(s.t_end), file});
    }
    w.write(dir + "index.csv", to_csv(index));
    Json f;
    for (Phase p : {Phase::symmetric, Phase::false_broken, Phase::diverged, Phase::undecided})
      f[to_string(p)] = d.fraction(p);
    fractions[std::to_string(n)] = f;
    w.manifest.runs.push_back({"N=" + std::to_string(n), true, false, "", seconds_since(t0)});
  }
  w.manifest.summary["fractions"] = fractions;
  w.manifest.summary["seed_grid"] = {{"a2_range", {base.a2_range.first, base.a2_range.second}},
                                     {"a4_range", {base.a4_range.first, base.a4_range.second}},
                                     {"seeds", seeds},
                                     {"placement", "cell centres"},
                                     {"direction", "decreasing Lambda (increasing t)"}};
}

// ---- fixed points ----

void study_fixed_points(const Json& cfg, Writer& w, int) {
  require_keys(cfg, {"study", "description", "orders", "ranges", "seeds_per_axis", "even_sector"}, "config");
  SearchBox box;
  box.ranges = {{-0.95, 0.0}, {0.0, 5.0}};
  if (cfg.contains("ranges")) {
    box.ranges.clear();
    for (const auto& r : cfg["ranges"]) {
      const auto v = r.get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("each range must be [lo, hi]");
      box.ranges.push_back({v[0], v[1]});
    }
  }
  box.seeds_per_axis = get(cfg, "seeds_per_axis", 8);
  box.even_sector = get(cfg, "even_sector", true);

  Json report = Json::object();
  for (int n : orders(cfg, {4, 6, 8, 10})) {
    const auto t0 = Clock::now();
    Json list = Json::array();
    std::string detail;
    const Cell c = guarded([&](Cell&) {
      for (const auto& fp : find_fixed_points(n, box)) list.push_back(to_json(fp));
    });
    report[std::to_string(n)] = list;
    w.manifest.runs.push_back({"N=" + std::to_string(n), c.ok, false, c.detail, seconds_since(t0)});
  }
  w.write("fixed_points.json", report.dump(2) + "\n");
}

}  // namespace

RunManifest run_experiment(const Json& config, Study study, const fs::path& out_dir, int jobs) {
  if (jobs < 1) throw ConfigError("jobs must be positive");
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (config.contains("study") && study_from_string(config["study"].get<std::string>()) != study)
    throw ConfigError("config study '" + config["study"].get<std::string>() + "' does not match " + to_string(study));
  RunManifest m;
  m.study = study;
  m.config = config;
  Writer w{out_dir, m};
  const auto t0 = Clock::now();
  switch (study) {
    case Study::flow: study_flow(config, w, jobs); break;
    case Study::sweep: study_sweep(config, w, jobs, false); break;
    case Study::susy: study_sweep(config, w, jobs, true); break;
    case Study::poles: study_poles(config, w, jobs); break;
    case Study::two_particle: study_two_particle(config, w, jobs); break;
    case Study::flow_diagram: study_flow_diagram(config, w, jobs); break;
    case Study::fixed_points: study_fixed_points(config, w, jobs); break;
  }
  m.wall_seconds = seconds_since(t0);
  write_file(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
  return m;
}

CsvTable compare_manifests(const std::vector<fs::path>& manifests) {
  if (manifests.empty()) throw ConfigError("compare needs at least one manifest");
  struct Source {
    CsvTable table;
    std::map<std::string, std::size_t> by_axis;
  };
  std::string axis;
  std::vector<Source> sources;
  for (const auto& path : manifests) {
    const Json j = load_config(path);
    if (!j.contains("summary") || !j["summary"].contains("axis") || !j["summary"].contains("table"))
      throw ConfigError(path.string() + " has no parameter axis");
    const auto a = j["summary"]["axis"].get<std::string>();
    if (axis.empty()) axis = a;
    if (a != axis) throw ConfigError("axis mismatch: '" + axis + "' vs '" + a + "' in " + path.string());
    Source s{read_csv(path.parent_path() / j["summary"]["table"].get<std::string>()), {}};
    if (s.table.header.empty() || s.table.header[0] != axis) throw ConfigError("table of " + path.string() + " lacks the axis column");
    for (std::size_t r = 0; r < s.table.rows.size(); ++r) s.by_axis[s.table.rows[r].at(0)] = r;
    sources.push_back(std::move(s));
  }

  std::set<double> keys;
  std::map<double, std::string> key_text;
  for (const auto& s : sources)
    for (const auto& [k, r] : s.by_axis) {
      keys.insert(std::stod(k));
      key_text[std::stod(k)] = k;
    }

  // Column names, prefixed with the manifest index on collision.
  std::vector<std::vector<std::string>> names(sources.size());
  std::map<std::string, int> seen;
  for (const auto& s : sources)
    for (std::size_t c = 1; c < s.table.header.size(); ++c) ++seen[s.table.header[c]];
  CsvTable out{{axis}, {}};
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t c = 1; c < sources[i].table.header.size(); ++c) {
      const std::string& h = sources[i].table.header[c];
      names[i].push_back(seen[h] > 1 ? "m" + std::to_string(i) + "." + h : h);
      out.header.push_back(names[i].back());
    }

  auto quantity = [](const std::string& h) {
    const auto p = h.rfind(':');
    return p == std::string::npos ? h : h.substr(p + 1);
  };
  auto is_oracle = [](const std::string& h) {
    const auto p = h.find("oracle:");
    return p == 0 || (p != std::string::npos && h[p - 1] == '.');
  };
  // Reference column per (source, column): the oracle column of the same quantity, else the first manifest's.
  struct Dev {
    std::size_t src, col, ref_src, ref_col;
  };
  std::vector<Dev> devs;
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t c = 1; c < sources[i].table.header.size(); ++c) {
      const std::string& h = sources[i].table.header[c];
      const std::string q = quantity(h);
      if (q == "status") continue;
      std::optional<std::pair<std::size_t, std::size_t>> ref;
      for (std::size_t a = 0; a < sources.size() && !ref; ++a)
        for (std::size_t b = 1; b < sources[a].table.header.size(); ++b)
          if (is_oracle(sources[a].table.header[b]) && quantity(sources[a].table.header[b]) == q) {
            ref = {a, b};
            break;
          }
      if (!ref)
        for (std::size_t b = 1; b < sources[0].table.header.size(); ++b)
          if (sources[0].table.header[b] == h) ref = {0, b};
      if (!ref) continue;
      devs.push_back({i, c, ref->first, ref->second});
      out.header.push_back("rel_dev:" + names[i][c - 1]);
    }

  for (double k : keys) {
    const std::string& kt = key_text[k];
    std::vector<std::string> row{kt};
    auto cell = [&](std::size_t s, std::size_t c) -> std::string {
      const auto it = sources[s].by_axis.find(kt);
      if (it == sources[s].by_axis.end()) {
        for (const auto& [text, r] : sources[s].by_axis)
          if (std::stod(text) == k) return sources[s].table.rows[r].at(c);
        return "";
      }
      return sources[s].table.rows[it->second].at(c);
    };
    for (std::size_t i = 0; i < sources.size(); ++i)
      for (std::size_t c = 1; c < sources[i].table.header.size(); ++c) row.push_back(cell(i, c));
    for (const auto& d : devs) {
      const std::string v = cell(d.src, d.col), r = cell(d.ref_src, d.ref_col);
      if (v.empty() || r.empty()) {
        row.emplace_back();
        continue;
      }
      const double x = std::stod(v), ref = std::stod(r);
      row.push_back(ref == 0.0 ? (x == 0.0 ? "0" : "") : format_number((x - ref) / std::abs(ref)));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace nprg

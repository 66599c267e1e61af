// hjsolve: drive the solver library from the shell.
//
//   hjsolve solve   --config run.json --out results/
//   hjsolve table   --config run.json --out results/
//   hjsolve compare results/phi.csv hopf_lax_quadratic
//
// The config is one JSON document.  Preset mode picks a benchmark problem:
//
//   {"preset": "quad", "dim": 1, "grid": {"n_x": 20, "n_t": 11},
//    "cfg": {"delta": 1e-6}}
//
// Explicit mode swaps "preset" for a Hamiltonian and initial-data name:
//
//   {"hamiltonian": "l1", "g0": "sines", "dim": 1, "grid": ..., "cfg": ...}
//
// CSV layout: a 1D solution is one file, row i = space index, column k =
// time index.  A 2D solution is one file per time slice (row i = x index,
// column j = y index) plus an index.json naming the slices.  Values are
// written as shortest round-trip decimals, so re-reading a file reproduces
// the in-memory doubles bit for bit.
//
// Exit codes: 0 solved, 1 bad config or usage, 2 solver did not converge.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/metrics.hpp"
#include "hj/pdhg_general.hpp"
#include "hj/presets.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace hj;

namespace {

// Anything wrong with the user's input (as opposed to a solve that ran and
// failed to converge) lands here and becomes exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// numbers <-> text

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double parse_num(std::string_view s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError("not a number in CSV: '" + std::string(s) + "'");
  return v;
}

// ---------------------------------------------------------------------------
// CSV files

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// One row per spatial index, one column per time slice.
std::string csv_from_field(const Field1D& f) {
  std::string out;
  out.reserve(f.size() * 20);
  for (int i = 0; i < f.n_x; ++i) {
    for (int k = 0; k < f.n_k; ++k) {
      if (k) out += ',';
      out += fmt(f(i, k));
    }
    out += '\n';
  }
  return out;
}

// One time slice of a 2D field: row i (x), column j (y).
std::string csv_from_slice(const Field2D& f, int k) {
  std::string out;
  for (int i = 0; i < f.n_x; ++i) {
    for (int j = 0; j < f.n_y; ++j) {
      if (j) out += ',';
      out += fmt(f(i, j, k));
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      row.push_back(parse_num(std::string_view(line).substr(start, end - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigError("ragged CSV: " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("empty CSV: " + path.string());
  return rows;
}

Field1D field_from_csv(const fs::path& path) {
  const auto rows = read_csv(path);
  Field1D f((int)rows.size(), (int)rows.front().size());
  for (int i = 0; i < f.n_x; ++i)
    for (int k = 0; k < f.n_k; ++k) f(i, k) = rows[i][k];
  return f;
}

// ---------------------------------------------------------------------------
// config parsing

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

double num_at(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return obj[key].get<double>();
}

int int_at(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
  return obj[key].get<int>();
}

void apply_cfg_overrides(const json& j, SolverConfig& cfg) {
  require_keys(j, {"tau", "sigma", "c", "delta", "n_inner", "n_outer",
                   "epsilon", "time_windows", "stop_rule"}, "cfg");
  cfg.tau = num_at(j, "tau", cfg.tau);
  cfg.sigma = num_at(j, "sigma", cfg.sigma);
  cfg.c = num_at(j, "c", cfg.c);
  cfg.delta = num_at(j, "delta", cfg.delta);
  cfg.n_inner = int_at(j, "n_inner", cfg.n_inner);
  cfg.n_outer = int_at(j, "n_outer", cfg.n_outer);
  cfg.epsilon = num_at(j, "epsilon", cfg.epsilon);
  cfg.time_windows = int_at(j, "time_windows", cfg.time_windows);
  if (j.contains("stop_rule")) {
    const std::string s = j["stop_rule"].get<std::string>();
    if (s == "sum") cfg.stop_rule = StopRule::Sum;
    else if (s == "avg") cfg.stop_rule = StopRule::Avg;
    else throw ConfigError("stop_rule must be \"sum\" or \"avg\"");
  }
}

struct RunSpec {
  int dim = 1;
  bool preset_mode = true;
  std::string name;     // preset name, or Hamiltonian name in explicit mode
  std::string g0_name;  // explicit mode only
  int n_x = 0, n_y = 0, n_t = 0;  // 0 = keep the preset default
  json cfg_overrides = json::object();
  std::optional<bool> want_reference;
  std::vector<std::array<int, 3>> grids;  // table mode; [n_x, n_y, n_t]
  bool grids_given = false;
  json echo;
};

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  return doc;
}

RunSpec parse_spec(const json& doc, bool table_mode) {
  require_keys(doc, {"preset", "hamiltonian", "g0", "dim", "grid", "cfg",
                     "reference", "grids"}, "config");
  RunSpec spec;
  spec.echo = doc;
  spec.dim = int_at(doc, "dim", 1);
  if (spec.dim != 1 && spec.dim != 2) throw ConfigError("dim must be 1 or 2");

  if (doc.contains("preset") == doc.contains("hamiltonian"))
    throw ConfigError("config needs exactly one of \"preset\" or \"hamiltonian\"");
  spec.preset_mode = doc.contains("preset");
  spec.name = doc[spec.preset_mode ? "preset" : "hamiltonian"].get<std::string>();
  if (doc.contains("g0")) {
    if (spec.preset_mode) throw ConfigError("\"g0\" only applies with \"hamiltonian\"");
    spec.g0_name = doc["g0"].get<std::string>();
  } else if (!spec.preset_mode) {
    throw ConfigError("explicit mode needs \"g0\" (paraboloid or sines)");
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    require_keys(g, {"n_x", "n_y", "n_t"}, "grid");
    spec.n_x = int_at(g, "n_x", 0);
    spec.n_y = int_at(g, "n_y", spec.n_x);
    spec.n_t = int_at(g, "n_t", 0);
    if (spec.n_x <= 0 || spec.n_t <= 1 || (spec.dim == 2 && spec.n_y <= 0))
      throw ConfigError("grid needs n_x >= 1 and n_t >= 2");
    if (spec.dim == 1 && g.contains("n_y"))
      throw ConfigError("n_y given for a 1D run");
  }
  if (doc.contains("cfg")) {
    if (!doc["cfg"].is_object()) throw ConfigError("cfg must be an object");
    spec.cfg_overrides = doc["cfg"];
    SolverConfig probe;  // fail on unknown keys and bad types now, not mid-run
    apply_cfg_overrides(spec.cfg_overrides, probe);
  }
  if (doc.contains("reference")) spec.want_reference = doc["reference"].get<bool>();

  if (doc.contains("grids")) {
    if (!table_mode) throw ConfigError("\"grids\" only applies to the table command");
    spec.grids_given = true;
    for (const json& entry : doc["grids"]) {
      if (!entry.is_array() || (int)entry.size() != spec.dim + 1)
        throw ConfigError("each grids entry must list n_x(, n_y), n_t");
      std::array<int, 3> g{0, 0, 0};
      if (spec.dim == 1) g = {entry[0].get<int>(), 0, entry[1].get<int>()};
      else g = {entry[0].get<int>(), entry[1].get<int>(), entry[2].get<int>()};
      spec.grids.push_back(g);
    }
    if (spec.grids.empty()) throw ConfigError("grids list is empty");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// problem construction

std::function<double(double)> g0_1d(const std::string& name) {
  if (name == "paraboloid") return [](double x) { return 0.5 * (x - 1.0) * (x - 1.0); };
  if (name == "sines") return [](double x) { return std::sin(M_PI * x); };
  throw ConfigError("unknown g0 '" + name + "' (paraboloid or sines)");
}

Preset1D build_1d(const RunSpec& spec) {
  if (spec.preset_mode) return make_preset_1d(spec.name);
  Preset1D p;
  p.name = spec.name;
  p.grid = Grid1D{0.0, 2.0, 80, 1.0, 41, 0.0};
  p.g0 = g0_1d(spec.g0_name);
  if (spec.name == "quadratic") p.ham = make_quadratic_1d();
  else if (spec.name == "l1") p.ham = make_l1_1d();
  else throw ConfigError("unknown hamiltonian '" + spec.name + "' (quadratic or l1)");
  // same stopping convention as the presets
  p.cfg.stop_rule = StopRule::Avg;
  p.cfg.delta = 1e-6;
  p.cfg.n_outer = 1000000;
  return p;
}

Preset2D build_2d(const RunSpec& spec) {
  if (spec.preset_mode) return make_preset_2d(spec.name);
  Preset2D p;
  p.name = spec.name;
  p.grid = Grid2D{0.0, 2.0, 0.0, 2.0, 40, 40, 1.0, 21, 0.0};
  auto gx = g0_1d(spec.g0_name);
  p.g0 = [gx](double x, double y) { return gx(x) + gx(y); };
  p.g0x = gx;
  p.g0y = gx;
  if (spec.name == "quadratic") p.ham = make_quadratic_2d();
  else if (spec.name == "l1") p.ham = make_l1_2d();
  else throw ConfigError("unknown hamiltonian '" + spec.name + "' (quadratic or l1)");
  p.cfg.stop_rule = StopRule::Avg;
  p.cfg.delta = 1e-6;
  p.cfg.n_outer = 1000000;
  return p;
}

// Fill in resolution defaults and layer the user's cfg on top of the
// preset's, windows defaulting to one implicit step per window exactly like
// the table runner.
SolverConfig final_cfg(const RunSpec& spec, const SolverConfig& base, int n_t) {
  SolverConfig cfg = base;
  cfg.time_windows = n_t - 1;
  apply_cfg_overrides(spec.cfg_overrides, cfg);
  return cfg;
}

int resolve_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) omp_set_num_threads(requested);
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// ---------------------------------------------------------------------------
// solve

json base_summary(const RunSpec& spec, const SolveReport& rep, double residual,
                  double error, int threads, std::optional<long> seed) {
  json summary;
  summary["config"] = spec.echo;
  summary["resolved"] = {
      {"mode", spec.preset_mode ? "preset" : "explicit"},
      {"name", spec.name},
      {"dim", spec.dim},
      {"tau", rep.tau},
      {"sigma", rep.sigma},
      {"threads", threads},
  };
  if (seed) summary["resolved"]["seed"] = *seed;
  summary["residual"] = residual;
  if (error >= 0.0) summary["error"] = error;
  else summary["error"] = nullptr;
  summary["iterations"] = rep.outer_iterations;
  summary["converged"] = rep.converged;
  summary["status"] = rep.converged ? "converged" : "max_iterations";
  summary["wall_time_seconds"] = rep.wall_time;
  return summary;
}

int cmd_solve(const fs::path& config_path, const fs::path& out_dir, int threads_flag,
              std::optional<long> seed) {
  const json doc = load_config(config_path);
  RunSpec spec = parse_spec(doc, false);
  const int threads = resolve_threads(threads_flag);

  json summary;
  bool converged = false;
  if (spec.dim == 1) {
    Preset1D p = build_1d(spec);
    const int n_x = spec.n_x ? spec.n_x : p.grid.n_x;
    const int n_t = spec.n_t ? spec.n_t : p.grid.n_t;
    const SolverConfig cfg = final_cfg(spec, p.cfg, n_t);
    const bool want_ref = spec.want_reference
                              ? *spec.want_reference
                              : (p.ref == RefKind::HopfLaxQuadratic ||
                                 p.ref == RefKind::HopfLaxL1);
    PresetRun1D run = run_preset_1d(p, n_x, n_t, &cfg, want_ref);
    converged = run.report.converged;
    summary = base_summary(spec, run.report, run.residual, run.error, threads, seed);
    summary["resolved"]["n_x"] = n_x;
    summary["resolved"]["n_t"] = n_t;
    summary["resolved"]["time_windows"] = cfg.time_windows;
    fs::create_directories(out_dir);
    write_text(out_dir / "phi.csv", csv_from_field(run.phi));
    summary["outputs"] = {{"phi", "phi.csv"}};
  } else {
    Preset2D p = build_2d(spec);
    const int n_x = spec.n_x ? spec.n_x : p.grid.n_x;
    const int n_y = spec.n_y ? spec.n_y : p.grid.n_y;
    const int n_t = spec.n_t ? spec.n_t : p.grid.n_t;
    const SolverConfig cfg = final_cfg(spec, p.cfg, n_t);
    const bool want_ref = spec.want_reference
                              ? *spec.want_reference
                              : (p.ref == RefKind::HopfLaxQuadratic ||
                                 p.ref == RefKind::HopfLaxL1);
    PresetRun2D run = run_preset_2d(p, n_x, n_y, n_t, &cfg, want_ref);
    converged = run.report.converged;
    summary = base_summary(spec, run.report, run.residual, run.error, threads, seed);
    summary["resolved"]["n_x"] = n_x;
    summary["resolved"]["n_y"] = n_y;
    summary["resolved"]["n_t"] = n_t;
    summary["resolved"]["time_windows"] = cfg.time_windows;
    fs::create_directories(out_dir);
    json index = {{"dim", 2}, {"n_x", n_x}, {"n_y", n_y}, {"n_t", n_t}};
    json slices = json::array();
    for (int k = 0; k < n_t; ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "phi_k%03d.csv", k);
      write_text(out_dir / name, csv_from_slice(run.phi, k));
      slices.push_back(name);
    }
    index["slices"] = slices;
    write_text(out_dir / "index.json", index.dump(2) + "\n");
    summary["outputs"] = {{"index", "index.json"}};
  }

  write_text(out_dir / "summary.json", summary.dump(2) + "\n");
  if (!converged)
    std::fprintf(stderr, "hjsolve: iteration cap reached, outputs written anyway\n");
  return converged ? 0 : 2;
}

// ---------------------------------------------------------------------------
// table

int cmd_table(const fs::path& config_path, const fs::path& out_dir, int threads_flag) {
  const json doc = load_config(config_path);
  RunSpec spec = parse_spec(doc, true);
  resolve_threads(threads_flag);

  std::vector<TableRow> rows;
  if (spec.dim == 1) {
    Preset1D p = build_1d(spec);
    if (!spec.cfg_overrides.empty()) apply_cfg_overrides(spec.cfg_overrides, p.cfg);
    std::vector<std::pair<int, int>> grids;
    if (spec.grids_given)
      for (const auto& g : spec.grids) grids.emplace_back(g[0], g[2]);
    else
      grids = {{20, 11}, {40, 21}, {80, 41}};
    rows = run_table_1d(p, grids);
  } else {
    Preset2D p = build_2d(spec);
    if (!spec.cfg_overrides.empty()) apply_cfg_overrides(spec.cfg_overrides, p.cfg);
    std::vector<std::array<int, 3>> grids = spec.grids;
    if (!spec.grids_given) grids = {{20, 20, 11}, {40, 40, 21}};
    rows = run_table_2d(p, grids);
  }

  const std::string csv = table_to_csv(rows);
  fs::create_directories(out_dir);
  write_text(out_dir / "table.csv", csv);
  std::fputs(csv.c_str(), stdout);

  for (const TableRow& r : rows)
    if (!r.converged) return 2;
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct LoadedField {
  int dim = 1;
  Field1D f1;
  Field2D f2;
  int n_x() const { return dim == 1 ? f1.n_x : f2.n_x; }
  int n_t() const { return dim == 1 ? f1.n_k : f2.n_k; }
};

LoadedField load_solution(const fs::path& path) {
  LoadedField out;
  fs::path p = path;
  if (fs::is_directory(p)) p /= "index.json";
  if (p.extension() == ".json") {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open " + p.string());
    json index;
    try {
      index = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("bad index file: " + std::string(e.what()));
    }
    out.dim = 2;
    const int n_x = index.at("n_x").get<int>();
    const int n_y = index.at("n_y").get<int>();
    const int n_t = index.at("n_t").get<int>();
    out.f2 = Field2D(n_x, n_y, n_t);
    const auto& slices = index.at("slices");
    if ((int)slices.size() != n_t) throw ConfigError("index lists wrong slice count");
    for (int k = 0; k < n_t; ++k) {
      const auto rows = read_csv(p.parent_path() / slices[k].get<std::string>());
      if ((int)rows.size() != n_x || (int)rows.front().size() != n_y)
        throw ConfigError("slice shape does not match index");
      for (int i = 0; i < n_x; ++i)
        for (int j = 0; j < n_y; ++j) out.f2(i, j, k) = rows[i][j];
    }
    return out;
  }
  out.dim = 1;
  out.f1 = field_from_csv(p);
  return out;
}

// A reference is either another solution on disk or a named oracle evaluated
// on the grid the solution implies ([0,2]^d, T = 1).
LoadedField load_reference(const std::string& selector, const LoadedField& sol) {
  if (selector == "hopf_lax_quadratic" || selector == "hopf_lax_l1") {
    const std::string preset = selector == "hopf_lax_quadratic" ? "quad" : "l1";
    LoadedField out;
    out.dim = sol.dim;
    if (sol.dim == 1) {
      Grid1D g{0.0, 2.0, sol.f1.n_x, 1.0, sol.f1.n_k, 0.0};
      out.f1 = reference_field_1d(make_preset_1d(preset), g);
    } else {
      Grid2D g{0.0, 2.0, 0.0, 2.0, sol.f2.n_x, sol.f2.n_y, 1.0, sol.f2.n_k, 0.0};
      out.f2 = reference_field_2d(make_preset_2d(preset), g);
    }
    return out;
  }
  if (!fs::exists(selector))
    throw ConfigError("reference '" + selector +
                      "' is neither a file nor a known oracle "
                      "(hopf_lax_quadratic, hopf_lax_l1)");
  return load_solution(selector);
}

int cmd_compare(const std::string& solution, const std::string& reference) {
  const LoadedField sol = load_solution(solution);
  const LoadedField ref = load_reference(reference, sol);
  if (sol.dim != ref.dim) throw ConfigError("solution and reference dimensions differ");

  const std::vector<double>& a = sol.dim == 1 ? sol.f1.v : sol.f2.v;
  const std::vector<double>& b = sol.dim == 1 ? ref.f1.v : ref.f2.v;
  const double error = l1_relative_error(a, b);  // throws on shape mismatch

  // Slice numerators over the global reference mean, so the whole-field
  // error is exactly the average of the per-slice values.
  double ref_mean = 0.0;
  for (double v : b) ref_mean += std::abs(v);
  ref_mean /= (double)b.size();
  const int n_t = sol.n_t();
  const std::size_t per = a.size() / n_t;
  json per_slice = json::array();
  for (int k = 0; k < n_t; ++k) {
    double num = 0.0;
    for (std::size_t idx = 0; idx < per; ++idx)
      num += std::abs(a[k * per + idx] - b[k * per + idx]);
    num /= (double)per;
    per_slice.push_back(ref_mean == 0.0 ? (num == 0.0 ? 0.0 : INFINITY)
                                        : num / ref_mean);
  }

  json out = {{"error", error}, {"per_slice", per_slice},
              {"dim", sol.dim}, {"n_x", sol.n_x()}, {"n_t", n_t}};
  std::fputs((out.dump(2) + "\n").c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Hamilton-Jacobi solver: monotone implicit discretization via "
      "primal-dual iterations.\n"
      "CSV layout: 1D phi.csv has row i = space, column k = time; 2D runs "
      "write one such\nfile per time slice (row = x, column = y) plus "
      "index.json.  Doubles use shortest\nround-trip decimals."};
  app.require_subcommand(1);

  std::string config, out_dir = ".", solution, reference;
  int threads = 0;
  std::optional<long> seed;

  CLI::App* solve = app.add_subcommand("solve", "run one solve from a JSON config");
  solve->add_option("--config", config, "JSON config path")->required();
  solve->add_option("--out", out_dir, "output directory (default .)");
  solve->add_option("--threads", threads, "worker threads (default: all cores)");
  solve->add_option("--seed", seed, "recorded in the summary; solves are deterministic");

  CLI::App* table = app.add_subcommand("table", "grid refinement table for a preset");
  table->add_option("--config", config, "JSON config path")->required();
  table->add_option("--out", out_dir, "output directory (default .)");
  table->add_option("--threads", threads, "worker threads (default: all cores)");

  CLI::App* compare = app.add_subcommand(
      "compare", "l1 relative error between a solution file and a reference");
  compare->add_option("solution", solution, "phi.csv, index.json, or its directory")
      ->required();
  compare->add_option("reference", reference,
                      "another solution path, hopf_lax_quadratic, or hopf_lax_l1")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config, out_dir, threads, seed);
    if (table->parsed()) return cmd_table(config, out_dir, threads);
    return cmd_compare(solution, reference);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "hjsolve: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "hjsolve: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hjsolve: %s\n", e.what());
    return 2;
  }
}

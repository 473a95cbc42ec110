#include "psn/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace psn {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

InitKind init_kind(const std::string& s) {
  if (s == "gaussian") return InitKind::kGaussian;
  if (s == "scaled_soliton") return InitKind::kScaledSoliton;
  if (s == "file") return InitKind::kFile;
  if (s == "random_phase") return InitKind::kRandomPhase;
  throw ConfigError("unknown initializer '" + s + "'");
}

PotentialSpec parse_potential(const json& j) {
  only_keys(j, "potential",
            {"kind", "lambda", "s", "coefficient", "omega", "r", "v", "omega_star"});
  std::string kind = "harmonic";
  double lambda = 2.0, s = 2.0, coefficient = 1.0, omega = 0.0;
  double omega_star = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> r, v;
  read(j, "kind", kind, "potential");
  read(j, "lambda", lambda, "potential");
  read(j, "s", s, "potential");
  read(j, "coefficient", coefficient, "potential");
  read(j, "omega", omega, "potential");
  read(j, "r", r, "potential");
  read(j, "v", v, "potential");
  read(j, "omega_star", omega_star, "potential");
  try {
    if (kind == "harmonic") {
      if (!(lambda > 0.0)) throw ConfigError("potential.lambda must be positive");
      return harmonic_potential(lambda, omega);
    }
    if (kind == "power") return power_potential(s, coefficient, omega);
    if (kind == "tabulated") return tabulated_potential(r, v, omega, omega_star);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("unknown potential kind '" + kind + "'");
}

void parse_solver(const json& j, MinimizeConfig& c) {
  only_keys(j, "solver",
            {"dt", "dt_min", "dt_max", "residual_tol", "max_iters", "backtrack", "growth",
             "stagnation_window", "conjugate", "history_stride", "collapse_energy", "init"});
  read(j, "dt", c.dt, "solver");
  read(j, "dt_min", c.dt_min, "solver");
  read(j, "dt_max", c.dt_max, "solver");
  read(j, "residual_tol", c.residual_tol, "solver");
  read(j, "max_iters", c.max_iters, "solver");
  read(j, "backtrack", c.backtrack, "solver");
  read(j, "growth", c.growth, "solver");
  read(j, "stagnation_window", c.stagnation_window, "solver");
  read(j, "conjugate", c.conjugate, "solver");
  read(j, "history_stride", c.history_stride, "solver");
  read(j, "collapse_energy", c.collapse_energy, "solver");
  if (!(c.dt_min > 0.0 && c.dt_min <= c.dt && c.dt <= c.dt_max))
    throw ConfigError("solver step sizes must satisfy 0 < dt_min <= dt <= dt_max");
  if (!(c.residual_tol > 0.0)) throw ConfigError("solver.residual_tol must be positive");
  if (c.max_iters < 1) throw ConfigError("solver.max_iters must be at least 1");
  if (!(c.backtrack > 0.0 && c.backtrack < 1.0))
    throw ConfigError("solver.backtrack must lie in (0, 1)");
  if (!(c.growth >= 1.0)) throw ConfigError("solver.growth must be at least 1");
  if (c.stagnation_window < 1) throw ConfigError("solver.stagnation_window must be at least 1");
  if (j.contains("init")) {
    const json& i = j.at("init");
    only_keys(i, "solver.init", {"kind", "width", "tau", "path", "amplitude"});
    std::string kind = "gaussian";
    read(i, "kind", kind, "solver.init");
    c.init.kind = init_kind(kind);
    read(i, "width", c.init.width, "solver.init");
    read(i, "tau", c.init.tau, "solver.init");
    read(i, "path", c.init.path, "solver.init");
    read(i, "amplitude", c.init.amplitude, "solver.init");
    if (!(c.init.width > 0.0)) throw ConfigError("solver.init.width must be positive");
    if (c.init.tau < 0.0) throw ConfigError("solver.init.tau must be nonnegative");
    if (c.init.kind == InitKind::kFile && c.init.path.empty())
      throw ConfigError("solver.init.path is required for the file initializer");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"grid", "potential", "interactions", "solver", "a", "a_fraction", "sweep", "probe",
             "output", "seed"});
  RunConfig cfg;
  if (j.contains("grid")) {
    only_keys(j.at("grid"), "grid", {"n", "L"});
    read(j.at("grid"), "n", cfg.grid.n, "grid");
    read(j.at("grid"), "L", cfg.grid.half_width, "grid");
  }
  try {
    make_grid(cfg.grid.n, cfg.grid.half_width);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (j.contains("potential")) cfg.potential = parse_potential(j.at("potential"));
  if (j.contains("interactions")) {
    only_keys(j.at("interactions"), "interactions", {"log", "quartic"});
    read(j.at("interactions"), "log", cfg.solver.interactions.log_coeff, "interactions");
    read(j.at("interactions"), "quartic", cfg.solver.interactions.quartic_coeff, "interactions");
  }
  if (j.contains("solver")) parse_solver(j.at("solver"), cfg.solver);
  if (j.contains("a")) {
    double a = 0.0;
    read(j, "a", a, "config");
    if (!(a > 0.0)) throw ConfigError("a must be positive");
    cfg.a = a;
  }
  if (j.contains("a_fraction")) {
    double f = 0.0;
    read(j, "a_fraction", f, "config");
    if (!(f > 0.0)) throw ConfigError("a_fraction must be positive");
    cfg.a_fraction = f;
  }
  if (cfg.a && cfg.a_fraction) throw ConfigError("give either a or a_fraction, not both");
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    only_keys(s, "sweep", {"a_values", "a_fractions", "continuation", "adaptive_width", "jobs"});
    read(s, "a_values", cfg.sweep.a_values, "sweep");
    read(s, "a_fractions", cfg.sweep.a_fractions, "sweep");
    read(s, "continuation", cfg.sweep.continuation, "sweep");
    read(s, "adaptive_width", cfg.sweep.adaptive_width, "sweep");
    read(s, "jobs", cfg.sweep.jobs, "sweep");
    for (double f : cfg.sweep.a_fractions)
      if (!(f > 0.0 && f < 1.0)) throw ConfigError("sweep.a_fractions must lie in (0, 1)");
    for (double a : cfg.sweep.a_values)
      if (!(a > 0.0)) throw ConfigError("sweep.a_values must be positive");
    if (cfg.sweep.adaptive_width < 0.0) throw ConfigError("sweep.adaptive_width must be >= 0");
    if (cfg.sweep.jobs < 1) throw ConfigError("sweep.jobs must be at least 1");
  }
  if (j.contains("probe")) {
    only_keys(j.at("probe"), "probe", {"taus"});
    read(j.at("probe"), "taus", cfg.probe_taus, "probe");
    for (std::size_t k = 0; k < cfg.probe_taus.size(); ++k)
      if (!(cfg.probe_taus[k] > 0.0) || (k > 0 && !(cfg.probe_taus[k] > cfg.probe_taus[k - 1])))
        throw ConfigError("probe.taus must be positive and increasing");
  }
  if (j.contains("output")) {
    only_keys(j.at("output"), "output", {"field", "report", "csv"});
    read(j.at("output"), "field", cfg.output.field, "output");
    read(j.at("output"), "report", cfg.output.report, "output");
    read(j.at("output"), "csv", cfg.output.csv, "output");
  }
  read(j, "seed", cfg.seed, "config");
  cfg.solver.init.seed = cfg.seed;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<double> sweep_masses(const RunConfig& cfg, double a_star) {
  std::vector<double> out = cfg.sweep.a_values;
  for (double f : cfg.sweep.a_fractions) out.push_back(f * a_star);
  std::sort(out.begin(), out.end());
  return out;
}

double single_mass(const RunConfig& cfg, double a_star) {
  if (cfg.a) return *cfg.a;
  if (cfg.a_fraction) return *cfg.a_fraction * a_star;
  throw ConfigError("no mass given: set a or a_fraction in the config, or pass --a");
}

void check_writable(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("output directory does not exist: " + dir.string());
  if (fs::is_directory(p, ec)) throw ConfigError("output path is a directory: " + path);
}

}  // namespace psn

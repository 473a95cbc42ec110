#include "psn/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "psn/asymptotics.hpp"
#include "psn/config.hpp"
#include "psn/io.hpp"
#include "psn/log.hpp"
#include "psn/report.hpp"

namespace psn {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string in;
  std::optional<double> a;
  std::optional<double> tau;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  bool allow_supercritical = false;
};

/// Numerical failure that still produced output.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig configured(const Flags& f, bool required) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = load_config(f.config);
  else if (required) throw ConfigError("--config is required for this command");
  if (f.seed) {
    cfg.seed = *f.seed;
    cfg.solver.init.seed = *f.seed;
  }
  if (f.a) {
    if (!(*f.a > 0.0)) throw ConfigError("--a must be positive");
    cfg.a = *f.a;
    cfg.a_fraction.reset();
  }
  if (f.jobs) {
    if (*f.jobs < 1) throw ConfigError("--jobs must be at least 1");
    cfg.sweep.jobs = *f.jobs;
  }
  return cfg;
}

void reject_supercritical(const RunConfig& cfg, const Flags& f) {
  if (f.allow_supercritical) return;
  if (cfg.potential.omega >= cfg.potential.omega_star())
    throw ConfigError("rotation speed " + format_double(cfg.potential.omega) +
                      " is not below the critical velocity " +
                      format_double(cfg.potential.omega_star()) +
                      "; pass --allow-supercritical to run a divergence probe");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) throw std::runtime_error("cannot write " + path);
  o << text;
  if (!o) throw std::runtime_error("write failed for " + path);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_text(path, text);
}

Grid2D config_grid(const RunConfig& cfg) { return make_grid(cfg.grid.n, cfg.grid.half_width); }

int cmd_ground_state(const Flags& f, std::ostream& out) {
  if (!f.out.empty()) check_writable(f.out);
  const RadialProfile p = solve_radial_ground_state();
  if (!f.out.empty()) {
    std::ostringstream csv;
    csv << "r,q,dq\n";
    for (std::size_t k = 0; k < p.r.size(); ++k)
      csv << format_double(p.r[k]) << ',' << format_double(p.q[k]) << ','
          << format_double(p.dq[k]) << '\n';
    write_text(f.out, csv.str());
  }
  out << dump_json(ground_state_summary(p));
  return kExitOk;
}

int cmd_energy(const Flags& f, std::ostream& out) {
  RunConfig cfg = configured(f, true);
  if (!f.out.empty()) check_writable(f.out);
  const RadialProfile p = solve_radial_ground_state();
  ComplexField2D u;
  if (!f.in.empty()) {
    u = load_field(f.in).field;
  } else {
    u = init_state(cfg.solver.init, p, config_grid(cfg), single_mass(cfg, p.a_star));
  }
  const LogKernelPlan plan(u.grid());
  const auto e = energy_breakdown(u, cfg.potential, plan, cfg.solver.interactions);
  emit(f.out, dump_json(to_json(e)), out);
  return kExitOk;
}

int cmd_minimize(const Flags& f, std::ostream& out) {
  RunConfig cfg = configured(f, true);
  reject_supercritical(cfg, f);
  const std::string field_path = f.out.empty() ? cfg.output.field : f.out;
  if (!field_path.empty()) check_writable(field_path);
  if (!cfg.output.report.empty()) check_writable(cfg.output.report);
  const RadialProfile p = solve_radial_ground_state();
  const double a = single_mass(cfg, p.a_star);
  const LogKernelPlan plan(config_grid(cfg));
  const auto r = minimize(cfg.solver, cfg.potential, a, plan, p);
  nlohmann::json j = to_json(r.report);
  j["regime"] = cfg.potential.omega > 0.0 ? "rotating" : "extrapolation: no rotation";
  if (r.report.converged && a < p.a_star) {
    try {
      j["blowup"] = to_json(blowup_diagnostics(r.field, a, p, cfg.potential, r.report.mu_a));
    } catch (const std::domain_error& e) {
      warn(std::string("minimize: no blow-up diagnostics: ") + e.what());
    }
  }
  if (!field_path.empty()) save_field(field_path, r.field, {a, cfg.potential.omega});
  emit(cfg.output.report, dump_json(j), out);
  if (!r.report.converged)
    throw NumericalFailure(std::string("minimize did not converge: ") + to_string(r.report.status));
  return kExitOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  RunConfig cfg = configured(f, true);
  reject_supercritical(cfg, f);
  const std::string csv_path = f.out.empty() ? cfg.output.csv : f.out;
  if (!csv_path.empty()) check_writable(csv_path);
  const RadialProfile p = solve_radial_ground_state();
  const auto masses = sweep_masses(cfg, p.a_star);
  if (masses.empty()) throw ConfigError("sweep needs sweep.a_values or sweep.a_fractions");
  const LogKernelPlan plan(config_grid(cfg));
  SweepOptions opts;
  opts.continuation = cfg.sweep.continuation;
  opts.jobs = cfg.sweep.jobs;
  opts.adaptive_width = cfg.sweep.adaptive_width;
  const auto records = sweep(masses, cfg.potential, cfg.solver, plan, p, opts);
  std::ostringstream csv;
  write_sweep_csv(csv, records);
  emit(csv_path, csv.str(), out);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.converged ? 0 : 1;
  if (failed > 0)
    throw NumericalFailure(std::to_string(failed) + " of " + std::to_string(records.size()) +
                           " sweep points did not converge");
  return kExitOk;
}

int cmd_trial(const Flags& f, std::ostream& out) {
  RunConfig cfg = configured(f, true);
  if (!f.out.empty()) check_writable(f.out);
  const RadialProfile p = solve_radial_ground_state();
  const double a = single_mass(cfg, p.a_star);
  const LogKernelPlan plan(config_grid(cfg));
  nlohmann::json j;
  j["a"] = a;
  bool ok = true;
  if (f.tau || a < p.a_star) {
    const double tau = f.tau ? *f.tau : optimal_trial_scale(a, p.a_star);
    if (!(tau > 0.0)) throw ConfigError("--tau must be positive");
    try {
      const auto b = trial_upper_bound(a, tau, p, cfg.potential, plan);
      j["bound"] = to_json(b);
      ok = b.agrees;
    } catch (const std::domain_error& e) {
      throw NumericalFailure(std::string("trial state: ") + e.what());
    }
    if (a < p.a_star) j["expansion"] = trial_bound_expansion(a, p);
  }
  if (!cfg.probe_taus.empty()) {
    nlohmann::json probe = nlohmann::json::array();
    for (const auto& pt : nonexistence_probe(a, cfg.potential, cfg.probe_taus, p, plan,
                                             cfg.solver.interactions))
      probe.push_back({{"tau", pt.tau}, {"energy", pt.energy}, {"evaluated", pt.evaluated}});
    j["probe"] = probe;
  }
  emit(f.out, dump_json(j), out);
  if (!ok) throw NumericalFailure("closed-form and gridded trial energies disagree");
  return kExitOk;
}

int cmd_fit(const Flags& f, std::ostream& out) {
  if (f.in.empty()) throw ConfigError("fit needs --in <sweep.csv>");
  if (!f.out.empty()) check_writable(f.out);
  std::ifstream in(f.in);
  if (!in) throw ConfigError("cannot read " + f.in);
  std::vector<SweepRecord> records;
  try {
    records = read_sweep_csv(in);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  const RadialProfile p = solve_radial_ground_state();
  emit(f.out, dump_json(to_json(fit_verdicts(records, p))), out);
  return kExitOk;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar rotating Schrodinger-Newton minimization lab", "psn"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&f](CLI::App* c, bool config) {
    if (config) c->add_option("--config", f.config, "JSON run configuration");
    c->add_option("--out", f.out, "Output path");
    c->add_option("--seed", f.seed, "Seed of the random-phase initializer");
    c->add_flag("--quiet", f.quiet, "Suppress warnings");
  };
  auto* gs = app.add_subcommand("ground-state", "Radial ground state and critical mass");
  common(gs, false);
  auto* en = app.add_subcommand("energy", "Energy breakdown of an initial state or a field file");
  common(en, true);
  en->add_option("--a", f.a, "Mass");
  en->add_option("--in", f.in, "PSN1 field file");
  auto* mn = app.add_subcommand("minimize", "Constrained minimizer at one mass");
  common(mn, true);
  mn->add_option("--a", f.a, "Mass");
  mn->add_flag("--allow-supercritical", f.allow_supercritical, "Permit rotation at or above the critical velocity");
  auto* sw = app.add_subcommand("sweep", "Minimizers over a list of masses, as CSV");
  common(sw, true);
  sw->add_option("--jobs", f.jobs, "Parallel sweep points");
  sw->add_flag("--allow-supercritical", f.allow_supercritical, "Permit rotation at or above the critical velocity");
  auto* tr = app.add_subcommand("trial", "Trial-state upper bound and nonexistence probe");
  common(tr, true);
  tr->add_option("--a", f.a, "Mass");
  tr->add_option("--tau", f.tau, "Trial scale (default: optimal)");
  auto* ft = app.add_subcommand("fit", "Asymptotic-law verdicts for a sweep CSV");
  common(ft, false);
  ft->add_option("--in", f.in, "Sweep CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "psn: " << e.what() << '\n';
    return kExitUsage;
  }
  set_quiet(f.quiet);
  try {
    if (gs->parsed()) return cmd_ground_state(f, out);
    if (en->parsed()) return cmd_energy(f, out);
    if (mn->parsed()) return cmd_minimize(f, out);
    if (sw->parsed()) return cmd_sweep(f, out);
    if (tr->parsed()) return cmd_trial(f, out);
    if (ft->parsed()) return cmd_fit(f, out);
  } catch (const ConfigError& e) {
    err << "psn: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FieldFileError& e) {
    err << "psn: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "psn: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "psn: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace psn

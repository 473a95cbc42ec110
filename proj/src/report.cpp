#include "psn/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "psn/asymptotics.hpp"

namespace psn {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void emit(std::ostream& os, const json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      os << (std::isfinite(x) ? format_double(x) : "null");
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        break;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        os << pad;
        emit(os, j[k], depth + 1);
        os << (k + 1 < j.size() ? ",\n" : "\n");
      }
      os << close << ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        break;
      }
      os << "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        os << pad << json(it.key()).dump() << ": ";
        emit(os, it.value(), depth + 1);
        os << (k + 1 < j.size() ? ",\n" : "\n");
      }
      os << close << '}';
      break;
    }
    default:
      os << j.dump();
  }
}

json point(Point p) { return json::array({p.x1, p.x2}); }

}  // namespace

std::string dump_json(const json& j) {
  std::ostringstream os;
  emit(os, j, 0);
  os << '\n';
  return os.str();
}

json to_json(const EnergyBreakdown& e) {
  return {{"mass", e.mass},
          {"kinetic", e.kinetic},
          {"potential", e.potential},
          {"log", e.log},
          {"quartic", e.quartic},
          {"rotation", e.rotation},
          {"total", e.total},
          {"magnetic_kinetic", e.magnetic_kinetic},
          {"v_omega_potential", e.v_omega_potential},
          {"second_moment", e.second_moment}};
}

json to_json(const MinimizeReport& r) {
  return {{"a", r.a},
          {"omega", r.omega},
          {"e_a", r.e_a},
          {"mu_a", r.mu_a},
          {"mu_rayleigh", r.mu_rayleigh},
          {"iters", r.iters},
          {"residual", r.residual},
          {"epsilon_a", r.epsilon_a},
          {"x_a", point(r.x_a)},
          {"boundary_mass_fraction", r.boundary_mass_fraction},
          {"energy_history", r.energy_history},
          {"breakdown", to_json(r.breakdown)},
          {"status", to_string(r.status)},
          {"converged", r.converged},
          {"supercritical", r.supercritical}};
}

json to_json(const BlowupReport& b) {
  return {{"a", b.a},
          {"epsilon_a", b.epsilon_a},
          {"x_a", point(b.x_a)},
          {"theta_a", b.theta_a},
          {"l2_distance", b.l2_distance},
          {"l2_relative", b.l2_relative},
          {"linf_distance", b.linf_distance},
          {"linf_relative", b.linf_relative},
          {"orthogonality", b.orthogonality},
          {"mu_eps2", b.mu_eps2},
          {"v_omega_at_xa", b.v_omega_at_xa},
          {"gradient_normalization", b.gradient_normalization},
          {"decay_constant", b.decay_constant},
          {"decay_checked_to", b.decay_checked_to},
          {"decay_ok", b.decay_ok},
          {"frame_half_width", b.frame_half_width}};
}

json to_json(const TrialBound& b) {
  return {{"tau", b.tau},
          {"closed_form", b.closed_form},
          {"gridded", b.gridded},
          {"relative_gap", b.relative_gap},
          {"agrees", b.agrees}};
}

json ground_state_summary(const RadialProfile& p) {
  const auto id = identity_residuals(p);
  return {{"a_star", p.a_star},
          {"q0", p.q0},
          {"moment2", radial_moment(p, 2)},
          {"log_self_energy", profile_log_energy(p)},
          {"energy_constant", energy_constant(p)},
          {"gradient_identity_residual", id.gradient},
          {"quartic_identity_residual", id.quartic},
          {"ode_residual", p.ode_residual},
          {"matched_radius", p.matched_radius},
          {"r_max", p.r_max()}};
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.a) << ',' << format_double(r.e_a) << ',' << format_double(r.epsilon_a)
        << ',' << format_double(r.mu_a) << ',' << format_double(r.mu_eps2) << ','
        << format_double(r.x_a.x1) << ',' << format_double(r.x_a.x2) << ','
        << format_double(r.l2_distance) << ',' << format_double(r.v_omega_xa) << ','
        << (r.converged ? 1 : 0) << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw std::runtime_error("sweep CSV: unexpected header");
  std::vector<SweepRecord> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty())
        throw std::runtime_error("sweep CSV: bad number '" + cell + "' on line " +
                                 std::to_string(row));
      v.push_back(x);
    }
    if (v.size() != 10)
      throw std::runtime_error("sweep CSV: expected 10 columns on line " + std::to_string(row));
    SweepRecord r;
    r.a = v[0];
    r.e_a = v[1];
    r.epsilon_a = v[2];
    r.mu_a = v[3];
    r.mu_eps2 = v[4];
    r.x_a = {v[5], v[6]};
    r.l2_distance = v[7];
    r.v_omega_xa = v[8];
    r.converged = v[9] != 0.0;
    r.status = r.converged ? MinimizeStatus::kConverged : MinimizeStatus::kMaxIters;
    out.push_back(r);
  }
  return out;
}

std::vector<FitVerdict> fit_verdicts(const std::vector<SweepRecord>& records,
                                     const RadialProfile& p) {
  const double s = p.a_star;
  auto verdict = [](std::string law, double est, double target, double err) {
    return FitVerdict{std::move(law), est, target, err, std::isfinite(err) && err <= 0.1};
  };
  std::vector<FitVerdict> out;
  try {
    const auto fit = fit_energy_asymptotics(records, s);
    const double c = energy_constant(p);
    out.push_back(verdict("energy_constant", fit.constant_estimate, c,
                          std::abs(fit.constant_estimate - c) / std::abs(c)));
    out.push_back(verdict("energy_drift", fit.drift, 0.0,
                          std::abs(fit.drift) / std::abs(fit.constant_estimate)));
  } catch (const std::invalid_argument&) {
    out.push_back(verdict("energy_constant", kNaN, energy_constant(p), kNaN));
    out.push_back(verdict("energy_drift", kNaN, 0.0, kNaN));
  }
  try {
    const double slope = fit_epsilon_scaling(records, s);
    out.push_back(verdict("blowup_rate", slope, 2.0 / s, std::abs(slope - 2.0 / s) / (2.0 / s)));
  } catch (const std::invalid_argument&) {
    out.push_back(verdict("blowup_rate", kNaN, 2.0 / s, kNaN));
  }
  const SweepRecord* last = nullptr;
  for (const auto& r : records)
    if (r.converged && r.a < s && (!last || r.a > last->a)) last = &r;
  if (last)
    out.push_back(verdict("multiplier", last->mu_eps2, -1.0 / s,
                          std::abs(last->mu_eps2 + 1.0 / s) / (1.0 / s)));
  else
    out.push_back(verdict("multiplier", kNaN, -1.0 / s, kNaN));
  return out;
}

json to_json(const std::vector<FitVerdict>& v) {
  json arr = json::array();
  for (const auto& f : v)
    arr.push_back({{"law", f.law},
                   {"estimate", f.estimate},
                   {"target", f.target},
                   {"rel_err", f.rel_err},
                   {"pass", f.pass}});
  return arr;
}

}  // namespace psn

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psn/asymptotics.hpp"
#include "psn/energy.hpp"
#include "psn/io.hpp"
#include "psn/log.hpp"
#include "psn/report.hpp"

using namespace psn;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

template <typename F>
ComplexSamples tabulate(const Grid2D& grid, F&& f) {
  ComplexSamples out(grid.size());
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      out[static_cast<std::size_t>(i) * grid.n + j] = f(grid.x(i), grid.x(j));
  return out;
}

ComplexField2D random_bumps(const Grid2D& grid, std::mt19937_64& rng, bool complex_phase) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int bumps = 1 + static_cast<int>(rng() % 3);
  std::vector<std::array<double, 6>> c(bumps);
  for (auto& b : c) {
    b = {2.0 * U(rng), 2.0 * U(rng), 0.9 + 0.4 * U(rng), U(rng), 2.0 * U(rng), 2.0 * U(rng)};
    if (!complex_phase) b[4] = b[5] = 0.0;
  }
  return ComplexField2D(grid, tabulate(grid, [&](double x, double y) {
    cplx v = 0.0;
    for (auto& b : c) {
      const double dx = x - b[0], dy = y - b[1];
      v += b[3] * std::exp(-(dx * dx + dy * dy) / (b[2] * b[2])) *
           std::polar(1.0, b[4] * x + b[5] * y);
    }
    return v;
  }));
}

RealSamples real_part(const ComplexField2D& u) {
  RealSamples out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k].real();
  return out;
}

MinimizeConfig tail_config() {
  MinimizeConfig cfg;
  cfg.residual_tol = 1e-6;
  cfg.init.kind = InitKind::kScaledSoliton;
  cfg.init.seed = 7;
  return cfg;
}

std::string sweep_csv(const std::vector<SweepRecord>& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  return os.str();
}

}  // namespace

int main() {
  set_quiet(true);
  const auto start = std::chrono::steady_clock::now();

  // 1. ground-state identities
  auto t0 = std::chrono::steady_clock::now();
  const RadialProfile p = solve_radial_ground_state(1e-10, 20.0);
  const IdentityResiduals id = identity_residuals(p);
  const double t_gs = seconds_since(t0);
  verdict(1, std::abs(id.gradient) <= 1e-6 && std::abs(id.quartic) <= 1e-6 && t_gs < 5.0,
          "ground-state identities: gradient " + g(id.gradient) + ", quartic " + g(id.quartic) +
              ", " + g(t_gs) + " s");
  const double s = p.a_star;

  // 2. critical mass: shooting, step halving, grid optimizer
  {
    ShootingOptions half;
    half.mesh_step *= 0.5;
    const RadialProfile q = solve_radial_ground_state(1e-10, 20.0, half);
    const auto gn = minimize_gn_quotient(make_grid(256, 16.0));
    const double step_rel = rel(q.a_star, s), grid_rel = rel(gn.quotient, s);
    verdict(2, gn.converged && grid_rel <= 1e-3 && step_rel <= 1e-8,
            "critical mass " + g(s) + ": grid optimizer rel " + g(grid_rel) +
                ", step halving rel " + g(step_rel));
  }

  // 3. Gagliardo-Nirenberg inequality and equality
  {
    t0 = std::chrono::steady_clock::now();
    const Grid2D grid = make_grid(128, 10.0);
    std::mt19937_64 rng(2024);
    double worst = 1e300;
    for (int k = 0; k < 200; ++k)
      worst = std::min(worst, gn_quotient(grid, real_part(random_bumps(grid, rng, false))) / s);
    double eq = 0.0;
    for (double m : {0.5, 1.0, 2.0})
      eq = std::max(eq, std::abs(gn_quotient(grid, sample_scaled(p, grid, m)) / s - 1.0));
    const double t = seconds_since(t0);
    verdict(3, worst >= 1.0 && eq <= 1e-3 && t < 30.0,
            "GN inequality: smallest ratio " + g(worst) + ", equality defect " + g(eq) + ", " +
                g(t) + " s");
  }

  // 4. diamagnetic inequality and magnetic identity
  {
    const Grid2D grid = make_grid(64, 6.0);
    const LogKernelPlan plan(grid);
    std::mt19937_64 rng(17);
    double violation = -1e300, ident = 0.0;
    for (int k = 0; k < 200; ++k) {
      const ComplexField2D u = random_bumps(grid, rng, true);
      const double m = mass(u), mod = modulus_gradient_energy(u);
      for (double omega : {0.5, 1.0, 1.9}) {
        const auto e = energy_breakdown(u, harmonic_potential(2.0, omega), plan, {0.0, 0.0});
        const double alg = e.kinetic + e.rotation + 0.25 * omega * omega * e.second_moment;
        ident = std::max(ident, rel(e.magnetic_kinetic, alg));
        violation = std::max(violation, (mod - e.magnetic_kinetic) / m);
      }
    }
    verdict(4, violation <= 1e-8 && ident <= 1e-10,
            "diamagnetic: worst (modulus - magnetic)/mass " + g(violation) +
                ", identity rel " + g(ident));
  }

  // 5. logarithmic convolution
  {
    const Grid2D small = make_grid(32, 3.0);
    const LogKernelPlan sp(small);
    std::mt19937_64 rng(7);
    const RealSamples w = real_part(random_bumps(small, rng, false));
    const RealSamples fast = sp.convolve(KernelKind::kLog, w);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < small.n; ++i)
      for (int j = 0; j < small.n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < small.n; ++k)
          for (int l = 0; l < small.n; ++l)
            acc += sp.kernel_sample(KernelKind::kLog, i - k, j - l) * w[k * small.n + l];
        acc *= small.cell_area();
        worst = std::max(worst, std::abs(acc - fast[i * small.n + j]));
        scale = std::max(scale, std::abs(acc));
      }
    const double direct_rel = worst / scale;

    const Grid2D grid = make_grid(256, 8.0);
    const LogKernelPlan plan(grid);
    const double sigma2 = 0.5;
    RealSamples rho(grid.size());
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) {
        const double r2 = grid.x(i) * grid.x(i) + grid.x(j) * grid.x(j);
        rho[static_cast<std::size_t>(i) * grid.n + j] =
            std::exp(-r2 / (2.0 * sigma2)) / (2.0 * std::numbers::pi * sigma2);
      }
    const double phi0 =
        log_potential(plan, rho)[static_cast<std::size_t>(grid.n / 2) * grid.n + grid.n / 2];
    const double want = 0.5 * (std::log(2.0 * sigma2) - std::numbers::egamma);
    const double phi_err = std::abs(phi0 - want);

    const RealSamples f = real_part(random_bumps(grid, rng, false));
    RealSamples f2(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) f2[k] = f[k] * f[k];
    const double split = rel(b0(plan, f2, rho), b1(plan, f2, rho) - b2(plan, f2, rho));
    verdict(5, direct_rel <= 1e-10 && phi_err <= 1e-3 && split <= 1e-10,
            "log convolution: direct rel " + g(direct_rel) + ", Gaussian potential err " +
                g(phi_err) + ", splitting rel " + g(split));
  }

  // 6. linear oracle
  {
    const Grid2D grid = make_grid(256, 8.0);
    const LogKernelPlan plan(grid);
    MinimizeConfig cfg;
    cfg.interactions = {0.0, 0.0};
    cfg.init.width = 0.7;
    double err = 0.0, slowest = 0.0;
    bool conv = true;
    for (double omega : {0.0, 1.0}) {
      t0 = std::chrono::steady_clock::now();
      const auto r = minimize(cfg, harmonic_potential(2.0, omega), 1.0, plan, p);
      slowest = std::max(slowest, seconds_since(t0));
      conv = conv && r.report.converged;
      err = std::max(err, rel(r.report.e_a, 2.0));
    }
    const ComplexField2D gauss(grid, tabulate(grid, [](double x, double y) {
      return std::exp(-(x * x + y * y) / 2) / std::sqrt(std::numbers::pi);
    }));
    const double res = el_residual(gauss, 2.0, harmonic_potential(2.0, 0.0), plan, {0.0, 0.0});
    verdict(6, conv && err <= 1e-4 && res < 1e-8 && slowest < 120.0,
            "linear oracle: e(a)/2a rel err " + g(err) + ", eigenpair residual " + g(res) +
                ", slowest point " + g(slowest) + " s");
  }

  // Sweep over 0.90..0.99 a* on adaptive domains (n = 256).
  const PotentialSpec trap = harmonic_potential(2.0, 1.0);
  const MinimizeConfig cfg = tail_config();
  const LogKernelPlan base(make_grid(256, 1.5));
  SweepOptions opts;
  opts.adaptive_width = 12.0;
  opts.jobs = 4;
  std::vector<double> masses;
  for (int k = 90; k <= 99; ++k) masses.push_back(0.01 * k * s);
  t0 = std::chrono::steady_clock::now();
  const auto records = sweep(masses, trap, cfg, base, p, opts);
  const double t_sweep = seconds_since(t0);
  bool all_converged = true;
  for (const auto& r : records) all_converged = all_converged && r.converged;
  std::printf("# sweep: %zu points, %s, %.3g s\n", records.size(),
              all_converged ? "all converged" : "NOT all converged", t_sweep);
  for (const auto& r : records)
    std::printf("#   a/a* %.2f  e %.10g  eps %.6g  mu eps^2 a* %.6g  L %.4g  %s\n", r.a / s, r.e_a,
                r.epsilon_a, r.mu_eps2 * s, r.half_width, to_string(r.status));

  // 7. upper bound
  {
    double margin = 1e300;
    for (const auto& r : records)
      for (double f : {0.90, 0.95, 0.99})
        if (std::abs(r.a - f * s) < 1e-9 * s) {
          const double bound = trial_bound_closed_form(r.a, optimal_trial_scale(r.a, s), p, trap);
          margin = std::min(margin, bound + 1e-6 - r.e_a);
        }
    verdict(7, all_converged && margin >= 0.0,
            "upper bound: smallest (bound + 1e-6 - e(a)) " + g(margin));
  }

  // 8. energy asymptotics
  {
    const auto fit = fit_energy_asymptotics(records, s);
    const double c = energy_constant(p);
    const double c_rel = rel(fit.constant_estimate, c);
    const double drift = std::abs(fit.drift) / std::abs(fit.constant_estimate);
    verdict(8, all_converged && c_rel <= 0.1 && drift <= 0.1 && t_sweep <= 3600.0,
            "energy remainder: constant " + g(fit.constant_estimate) + " vs " + g(c) + " (rel " +
                g(c_rel) + "), drift " + g(drift) + ", sweep " + g(t_sweep) + " s");
  }

  // 9. blow-up rate and multiplier
  {
    const double slope = fit_epsilon_scaling(records, s);
    const double slope_rel = rel(slope, 2.0 / s);
    const double mu = records.back().mu_eps2;
    const double mu_rel = rel(mu, -1.0 / s);
    verdict(9, slope_rel <= 0.1 && mu_rel <= 0.1,
            "blow-up rate: slope " + g(slope) + " vs " + g(2.0 / s) + " (rel " + g(slope_rel) +
                "), mu eps^2 at 0.99 a* " + g(mu) + " vs " + g(-1.0 / s) + " (rel " + g(mu_rel) +
                ")");
  }

  // 10, 11. the minimizer at 0.99 a*
  {
    const double a = 0.99 * s;
    const LogKernelPlan plan(make_grid(256, sweep_half_width(a, p, base, opts)));
    const auto r = minimize(cfg, trap, a, plan, p);
    const auto b = blowup_diagnostics(r.field, a, p, trap, r.report.mu_a);
    verdict(10,
            r.report.converged && b.l2_relative <= 0.1 && b.linf_relative <= 0.15 &&
                b.orthogonality <= 1e-8 && b.decay_ok,
            "profile: L2 rel " + g(b.l2_relative) + ", Linf rel " + g(b.linf_relative) +
                ", orthogonality " + g(b.orthogonality) + ", decay " +
                (b.decay_ok ? "holds" : "fails") + " to r = " + g(b.decay_checked_to));

    // V_Omega vanishes at the origin; values below its size at a 1e-9 h
    // offset are roundoff and count as equal.
    const double h = plan.grid().spacing;
    const double dist = std::hypot(b.x_a.x1, b.x_a.x2);
    const double floor = trap.v_omega({1e-9 * h, 0.0});
    bool monotone = true;
    for (std::size_t k = 1; k < records.size(); ++k)
      monotone = monotone && records[k].v_omega_xa <= records[k - 1].v_omega_xa + floor;
    verdict(11, dist <= 2.0 * h && monotone,
            "concentration point: |x_a| " + g(dist) + " (" + g(dist / h) +
                " cells), V_Omega along the tail " + (monotone ? "non-increasing" : "increasing") +
                " above roundoff floor " + g(floor));
  }

  // 12. nonexistence probe
  {
    const LogKernelPlan plan(make_grid(256, 2.5));
    const PotentialSpec still = harmonic_potential(2.0, 0.0);
    const std::vector<double> taus{2.0, 4.0, 8.0, 16.0};
    const double a_hi = 1.05 * s, a_lo = 0.5 * s;
    const auto hi = nonexistence_probe(a_hi, still, taus, p, plan);
    const auto lo = nonexistence_probe(a_lo, still, taus, p, plan);
    bool decreasing = true, evaluated = true;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < hi.size(); ++k) {
      evaluated = evaluated && hi[k].evaluated && lo[k].evaluated;
      if (k > 0) decreasing = decreasing && hi[k].energy < hi[k - 1].energy;
      const double x = std::log(hi[k].tau);
      sx += x;
      sy += hi[k].energy;
      sxx += x * x;
      sxy += x * hi[k].energy;
    }
    const double m = static_cast<double>(hi.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double want = -0.25 * a_hi * a_hi;
    const double slope_rel = rel(slope, want);
    double lo_min = 1e300;
    for (const auto& q : lo) lo_min = std::min(lo_min, q.energy);
    const bool bounded = lo_min > 0.0 && lo_min == lo.front().energy;
    verdict(12, evaluated && decreasing && slope_rel <= 0.25 && bounded,
            std::string("probe: 1.05 a* ") + (decreasing ? "strictly decreasing" : "not decreasing") +
                ", log-slope " + g(slope) + " vs " + g(want) + " (rel " + g(slope_rel) +
                "); 0.5 a* min " + g(lo_min));
  }

  // 13. determinism and I/O
  {
    const auto again = sweep(masses, trap, cfg, base, p, opts);
    const bool same_csv = sweep_csv(records) == sweep_csv(again);
    const LogKernelPlan plan(make_grid(64, 4.0));
    MinimizeConfig rp = cfg;
    rp.init.kind = InitKind::kRandomPhase;
    rp.init.tau = 1.0;
    const auto u = init_state(rp.init, p, plan.grid(), 0.5 * s);
    const auto path = (std::filesystem::temp_directory_path() / "psn_acceptance.psn").string();
    save_field(path, u, {0.5 * s, 1.0});
    const auto back = load_field(path);
    std::filesystem::remove(path);
    const bool exact =
        back.field.size() == u.size() &&
        std::memcmp(back.field.values().data(), u.values().data(), u.size() * sizeof(cplx)) == 0 &&
        back.meta.a == 0.5 * s && back.meta.omega == 1.0;
    verdict(13, same_csv && exact,
            std::string("determinism: repeated sweep CSV ") + (same_csv ? "identical" : "differs") +
                ", field file round trip " + (exact ? "bit-exact" : "differs"));
  }

  std::printf("# %d of 13 criteria failed, %.3g s total\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}

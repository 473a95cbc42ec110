#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "psn/asymptotics.hpp"

using namespace psn;
using psn::test::profile;
using psn::test::rel;

namespace {

// Frozen from tests/oracles/radial_oracle.py.
constexpr double kOracleEnergyConstant = -128.47333716015663;

ComplexField2D reference_profile(const Grid2D& g, Point c, double s, double omega, double phase) {
  const auto& p = profile();
  const double sa = std::sqrt(p.a_star);
  return ComplexField2D(g, psn::test::tabulate(g, [&](double x, double y) {
    const double r = std::hypot(x - c.x1, y - c.x2) / s;
    const double gauge = 0.5 * omega * (-x * c.x2 + y * c.x1);
    return std::polar(p.value(r / sa) / (sa * s), gauge + phase);
  }));
}

SweepRecord synthetic(double a, double e, double eps) {
  SweepRecord r;
  r.a = a;
  r.e_a = e;
  r.epsilon_a = eps;
  r.converged = true;
  r.status = MinimizeStatus::kConverged;
  return r;
}

double angle_gap(double x, double y) {
  const double d = std::fmod(std::abs(x - y), 2.0 * std::numbers::pi);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

}  // namespace

TEST_CASE("log self-energy of the ground profile and the energy constant") {
  const auto& p = profile();
  CHECK(rel(profile_log_energy(p), psn::test::kOracleB0QQ) < 1e-6);
  CHECK(rel(energy_constant(p), kOracleEnergyConstant) < 1e-7);
  CHECK(predicted_blowup_scale(0.99 * p.a_star, p.a_star) ==
        doctest::Approx(2.0 / p.a_star * std::sqrt(0.01)));
}

TEST_CASE("blowup diagnostics on exact reference profiles") {
  const auto& p = profile();
  const Grid2D g = make_grid(512, 64.0);
  const auto pot = harmonic_potential(2.0, 1.0);

  SUBCASE("self-alignment") {
    const auto u = reference_profile(g, {}, 1.0, 0.0, 0.0);
    CHECK(rel(mass(u), p.a_star) < 1e-6);
    const auto b = blowup_diagnostics(u, p.a_star, p, pot);
    CHECK(b.l2_distance < 1e-6);
    CHECK(angle_gap(b.theta_a, 0.0) < 1e-10);
    CHECK(std::abs(b.x_a.x1) < g.spacing);
    CHECK(std::abs(b.x_a.x2) < g.spacing);
    CHECK(b.orthogonality <= 1e-8);
    CHECK(b.decay_ok);
    CHECK(b.decay_checked_to == doctest::Approx(10.0 * std::sqrt(p.a_star)));
    CHECK(std::abs(b.gradient_normalization - 1.0) < 1e-2);
    CHECK(std::isnan(b.mu_eps2));
  }

  SUBCASE("phase recovery") {
    const auto u = reference_profile(g, {}, 1.0, 0.0, 1.3);
    const auto b = blowup_diagnostics(u, p.a_star, p, pot, -0.5);
    CHECK(b.theta_a == doctest::Approx(2.0 * std::numbers::pi - 1.3).epsilon(1e-10));
    CHECK(b.l2_distance < 1e-6);
    CHECK(b.mu_eps2 == doctest::Approx(-0.5 * b.epsilon_a * b.epsilon_a));
  }

  SUBCASE("alignment is optimal over constant phases") {
    const auto u = reference_profile(g, {}, 1.0, 0.0, 2.2);
    ComplexSamples v(u.values());
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] += cplx(0.0, 0.02) * std::abs(v[k]) * std::sin(g.x(static_cast<int>(k % g.n)));
    const auto b = blowup_diagnostics(ComplexField2D(g, v), p.a_star, p, pot);
    const auto& w = b.rescaled.values();
    const auto& f = b.rescaled.grid();
    const double sa = std::sqrt(p.a_star);
    for (int t = 0; t < 100; ++t) {
      const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi * t / 100.0);
      double d2 = 0.0;
      for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) {
          const double q = p.value(std::hypot(f.x(i), f.x(j)) / sa) / sa;
          d2 += std::norm(rot * w[static_cast<std::size_t>(i) * f.n + j] - q);
        }
      CHECK(std::sqrt(f.cell_area() * d2) >= b.l2_distance * (1.0 - 1e-12));
    }
  }

  SUBCASE("shift and scale with the rotation gauge") {
    const Point c{8 * g.spacing, -12 * g.spacing};
    const double s = 0.5;
    const auto u = reference_profile(g, c, s, pot.omega, 0.0);
    const auto b = blowup_diagnostics(u, p.a_star, p, pot);
    CHECK(b.epsilon_a == doctest::Approx(s).epsilon(1e-4));
    CHECK(std::abs(b.x_a.x1 - c.x1) < g.spacing);
    CHECK(std::abs(b.x_a.x2 - c.x2) < g.spacing);
    CHECK(b.l2_distance <= 1e-3);
    CHECK(b.v_omega_at_xa == doctest::Approx(pot.v_omega(b.x_a)));
  }

  SUBCASE("frame outside the domain") {
    const auto u = reference_profile(g, {}, 1.0, 0.0, 0.0);
    BlowupOptions o;
    o.frame_half_width = 80.0;
    CHECK_THROWS_AS(blowup_diagnostics(u, p.a_star, p, pot, kNaN, o), std::domain_error);
  }
}

TEST_CASE("asymptotic fits on synthetic records") {
  const double s = profile().a_star;
  const double c0 = -128.5;
  std::vector<SweepRecord> recs;
  for (int k = 0; k < 10; ++k) {
    const double a = (0.90 + 0.01 * k) * s;
    recs.push_back(synthetic(a, c0 + 0.25 * a * a * std::log(4.0 * (s - a)),
                             predicted_blowup_scale(a, s)));
  }
  const auto fit = fit_energy_asymptotics(recs, s);
  CHECK(std::abs(fit.constant_estimate - c0) < 1e-12 * std::abs(c0));
  CHECK(std::abs(fit.drift) < 1e-12);
  CHECK(fit.used == 10);
  CHECK(fit_epsilon_scaling(recs, s) == doctest::Approx(2.0 / s).epsilon(1e-12));

  SUBCASE("unconverged and low-mass records are skipped") {
    auto more = recs;
    more.push_back(synthetic(0.5 * s, 1e3, 1.0));
    more.push_back(synthetic(0.995 * s, -1e6, 0.1));
    more.back().converged = false;
    CHECK(fit_energy_asymptotics(more, s).used == 10);
  }
  SUBCASE("too few records") {
    const std::vector<SweepRecord> two(recs.begin(), recs.begin() + 2);
    CHECK_THROWS_AS(fit_energy_asymptotics(two, s), std::invalid_argument);
    CHECK_THROWS_AS(fit_epsilon_scaling(two, s), std::invalid_argument);
  }
  SUBCASE("degenerate regressor") {
    const std::vector<SweepRecord> same(3, recs[4]);
    CHECK_THROWS_AS(fit_epsilon_scaling(same, s), std::invalid_argument);
  }
}

TEST_CASE("trial-state upper bound") {
  const auto& p = profile();
  const auto pot = harmonic_potential(2.0, 1.0);

  SUBCASE("closed form against the gridded trial state") {
    const Grid2D g = make_grid(256, 4.0);
    const LogKernelPlan plan(g);
    const auto b = trial_upper_bound(0.95 * p.a_star, 4.0, p, pot, plan);
    CHECK(b.relative_gap <= 1e-2);
    CHECK(b.agrees);
  }

  SUBCASE("harmonic closed form term by term") {
    const double a = 0.9 * p.a_star, tau = 3.0, s = p.a_star;
    const double m2 = radial_moment(p, 2);
    const double want = a * (s - a) * tau * tau / s + a / (4.0 * s * tau * tau) * m2 +
                        (a / s) * 0.75 * m2 / (tau * tau) +
                        0.5 * (a / s) * (a / s) * psn::test::kOracleB0QQ -
                        0.5 * a * a * std::log(tau);
    CHECK(trial_bound_closed_form(a, tau, p, pot) == doctest::Approx(want).epsilon(1e-6));
  }

  SUBCASE("remainder of the expansion at the optimal scale") {
    // Exact difference between the bound at the optimal tau and its leading
    // terms; it vanishes linearly in a* - a.
    const double s = p.a_star;
    auto remainder = [&](double a) {
      const double tau2 = a * s / (4.0 * (s - a));
      return 0.25 * (a * a - s * s) - 0.25 * a * a * std::log(a * s) + 0.5 * s * s * std::log(s) +
             0.5 * ((a / s) * (a / s) - 1.0) * profile_log_energy(p) +
             (a / s) * radial_moment(p, 2) / tau2;
    };
    for (double f : {0.9, 0.99, 0.999, 0.9999}) {
      const double a = f * s;
      const double gap = trial_bound_closed_form(a, optimal_trial_scale(a, s), p, pot) -
                         trial_bound_expansion(a, p);
      CHECK(gap == doctest::Approx(remainder(a)).epsilon(1e-9));
    }
    const double g99 = trial_bound_closed_form(0.99 * s, optimal_trial_scale(0.99 * s, s), p, pot) -
                       trial_bound_expansion(0.99 * s, p);
    CHECK(g99 == doctest::Approx(2.94).epsilon(1e-2));
    const double g9999 =
        trial_bound_closed_form(0.9999 * s, optimal_trial_scale(0.9999 * s, s), p, pot) -
        trial_bound_expansion(0.9999 * s, p);
    CHECK(g9999 < 0.1);
    CHECK(g9999 == doctest::Approx(g99 / 100.0).epsilon(0.05));
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(trial_bound_closed_form(1.0, 0.0, p, pot), std::invalid_argument);
    CHECK_THROWS_AS(optimal_trial_scale(p.a_star, p.a_star), std::invalid_argument);
    const Grid2D coarse = make_grid(64, 4.0);
    const LogKernelPlan plan(coarse);
    CHECK_THROWS_AS(trial_upper_bound(0.95 * p.a_star, 40.0, p, pot, plan), std::domain_error);
  }
}

TEST_CASE("nonexistence probe") {
  const auto& p = profile();
  const Grid2D g = make_grid(256, 2.5);
  const LogKernelPlan plan(g);
  const auto pot = harmonic_potential(2.0, 0.0);
  const std::vector<double> taus{2.0, 4.0, 8.0, 16.0};

  SUBCASE("supercritical mass diverges") {
    const double a = 1.05 * p.a_star;
    const auto r = nonexistence_probe(a, pot, taus, p, plan);
    REQUIRE(r.size() == 4);
    for (std::size_t k = 0; k < r.size(); ++k) {
      REQUIRE(r[k].evaluated);
      if (k > 0) CHECK(r[k].energy < r[k - 1].energy);
    }
    CHECK(r.back().energy < r.front().energy - 0.25 * a * a * std::log(8.0) * 0.5);
  }

  SUBCASE("subcritical mass stays bounded") {
    const double a = 0.5 * p.a_star;
    const auto r = nonexistence_probe(a, pot, taus, p, plan);
    double lo = 1e300;
    for (const auto& q : r) {
      REQUIRE(q.evaluated);
      lo = std::min(lo, q.energy);
    }
    CHECK(lo == r.front().energy);
    CHECK(lo > 0.0);
  }

  SUBCASE("single scale matches a direct evaluation") {
    const double a = 0.7 * p.a_star;
    const auto r = nonexistence_probe(a, pot, {1.0}, p, plan);
    const auto trial = make_trial_cutoff_state(p, g, a, 1.0, {}, 0.0);
    CHECK(r[0].energy == energy_breakdown(trial.field, pot, plan).total);
  }

  SUBCASE("unusable scales are reported") {
    const auto r = nonexistence_probe(p.a_star, pot, {2.0, 1000.0}, p, plan);
    CHECK(r[0].evaluated);
    CHECK_FALSE(r[1].evaluated);
    const auto fast = nonexistence_probe(1.0, harmonic_potential(2.0, 3.0), {0.25, 4.0}, p, plan);
    CHECK(fast[0].evaluated);
    CHECK_FALSE(fast[1].evaluated);
  }
}

TEST_CASE("sweep orchestration") {
  const auto& p = profile();
  const Grid2D g = make_grid(64, 6.0);
  const LogKernelPlan plan(g);
  const auto pot = harmonic_potential(2.0, 1.0);
  MinimizeConfig cfg;
  cfg.init.kind = InitKind::kScaledSoliton;
  cfg.init.tau = 1.0;

  CHECK(sweep({}, pot, cfg, plan, p).empty());

  const double a = 0.5 * p.a_star;
  const auto one = sweep({a}, pot, cfg, plan, p);
  const auto direct = minimize(cfg, pot, a, plan, p);
  REQUIRE(one.size() == 1);
  CHECK(one[0].e_a == direct.report.e_a);
  CHECK(one[0].mu_a == direct.report.mu_a);
  CHECK(one[0].converged == direct.report.converged);
  CHECK(one[0].half_width == 6.0);

  const std::vector<double> as{0.6 * p.a_star, 0.4 * p.a_star, 0.5 * p.a_star};
  SweepOptions serial;
  SweepOptions parallel;
  parallel.jobs = 3;
  const auto r1 = sweep(as, pot, cfg, plan, p, serial);
  const auto r3 = sweep(as, pot, cfg, plan, p, parallel);
  REQUIRE(r1.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    if (k > 0) CHECK(r1[k].a > r1[k - 1].a);
    CHECK(r1[k].e_a == r3[k].e_a);
    CHECK(r1[k].epsilon_a == r3[k].epsilon_a);
  }
  CHECK(r1[1].e_a == one[0].e_a);

  SUBCASE("continuation agrees with independent starts") {
    SweepOptions cont;
    cont.continuation = true;
    const auto rc = sweep(as, pot, cfg, plan, p, cont);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(rc[k].converged);
      CHECK(rc[k].e_a == doctest::Approx(r1[k].e_a).epsilon(1e-6));
    }
  }

  SUBCASE("adaptive domains") {
    SweepOptions ad;
    ad.adaptive_width = 12.0;
    const std::vector<double> near{0.95 * p.a_star, 0.97 * p.a_star};
    const LogKernelPlan fine(make_grid(128, 1.0));
    MinimizeConfig optimal = cfg;
    optimal.init.tau = 0.0;
    const auto rs = sweep(near, pot, optimal, fine, p, ad);
    for (const auto& r : rs) {
      CHECK(r.half_width == doctest::Approx(sweep_half_width(r.a, p, fine, ad)));
      CHECK(r.converged);
      CHECK(r.l2_distance / std::sqrt(p.a_star) < 0.1);
    }
    CHECK(rs[1].epsilon_a < rs[0].epsilon_a);
    CHECK_THROWS_AS(sweep_half_width(p.a_star, p, fine, ad), std::invalid_argument);
  }
}

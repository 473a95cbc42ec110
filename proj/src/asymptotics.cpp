#include "psn/asymptotics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "psn/log.hpp"

namespace psn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool usable(const SweepRecord& r) { return r.converged && std::isfinite(r.e_a); }

}  // namespace

double profile_log_energy(const RadialProfile& p) {
  // Phi(r) = 2 pi [ln r int_0^r f s ds + int_r^inf f(s) ln(s) s ds] for radial f = Q^2.
  const std::size_t m = p.r.size();
  std::vector<double> inner(m, 0.0), outer(m, 0.0);
  auto f = [&](std::size_t i) { return p.q[i] * p.q[i]; };
  for (std::size_t i = 1; i < m; ++i) {
    const double h = p.r[i] - p.r[i - 1];
    inner[i] = inner[i - 1] + 0.5 * h * (f(i - 1) * p.r[i - 1] + f(i) * p.r[i]);
  }
  auto g = [&](std::size_t i) { return p.r[i] > 0.0 ? f(i) * std::log(p.r[i]) * p.r[i] : 0.0; };
  for (std::size_t i = m - 1; i-- > 0;) {
    const double h = p.r[i + 1] - p.r[i];
    outer[i] = outer[i + 1] + 0.5 * h * (g(i) + g(i + 1));
  }
  auto integrand = [&](std::size_t i) {
    if (p.r[i] == 0.0) return 0.0;
    const double phi = kTwoPi * (std::log(p.r[i]) * inner[i] + outer[i]);
    return f(i) * phi * p.r[i];
  };
  double s = 0.0;
  for (std::size_t i = 1; i < m; ++i)
    s += 0.5 * (p.r[i] - p.r[i - 1]) * (integrand(i - 1) + integrand(i));
  return kTwoPi * s;
}

double energy_constant(const RadialProfile& p) {
  const double s = p.a_star;
  return 0.25 * s * s - 0.5 * s * s * std::log(s) + 0.5 * profile_log_energy(p);
}

double predicted_blowup_scale(double a, double a_star) {
  return (2.0 / a_star) * std::sqrt((a_star - a) / a_star);
}

double optimal_trial_scale(double a, double a_star) {
  if (!(a > 0.0 && a < a_star))
    throw std::invalid_argument("optimal trial scale needs 0 < a < a*");
  return std::sqrt(a * a_star / (4.0 * (a_star - a)));
}

BlowupReport blowup_diagnostics(const ComplexField2D& u, double a, const RadialProfile& p,
                                const PotentialSpec& pot, double mu, const BlowupOptions& opts) {
  const Grid2D& g = u.grid();
  const double sa = std::sqrt(p.a_star);
  BlowupReport rep;
  rep.a = a;
  rep.epsilon_a = blowup_scale(u);
  rep.x_a = refined_argmax(u);
  const double eps = rep.epsilon_a;
  const Point xa = rep.x_a;

  const double room = (g.half_width - std::max(std::abs(xa.x1), std::abs(xa.x2))) / eps;
  double W = opts.frame_half_width;
  if (W <= 0.0) W = std::min(12.0 * sa, room);
  if (!(W > 0.0) || W > room) {
    std::ostringstream os;
    os << "rescaled frame of half-width " << W << " needs " << W * eps
       << " around the maximum point but only " << room * eps
       << " fits in the domain; enlarge L for this a";
    throw std::domain_error(os.str());
  }
  rep.frame_half_width = W;
  const Grid2D f = make_grid(opts.frame_n > 0 ? opts.frame_n : g.n, W);
  const int n = f.n;
  std::vector<double> c1(n), c2(n);
  for (int i = 0; i < n; ++i) {
    c1[i] = xa.x1 + eps * f.x(i);
    c2[i] = xa.x2 + eps * f.x(i);
  }
  ComplexSamples w = fourier_resample(g, u.span(), c1, c2, OutsidePolicy::kError);
  RealSamples qref(f.size());
  const double omega = pot.omega;
  cplx overlap(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n + j;
      const double x1 = f.x(i), x2 = f.x(j);
      const double gauge = -0.5 * eps * omega * (-x1 * xa.x2 + x2 * xa.x1);
      w[k] *= eps * std::polar(1.0, gauge);
      qref[k] = p.value(std::hypot(x1, x2) / sa) / sa;
      overlap += w[k] * qref[k];
    }
  double theta = -std::arg(overlap);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta -= kTwoPi;
  rep.theta_a = theta;
  const cplx rot = std::polar(1.0, theta);

  const double area = f.cell_area();
  double d2 = 0.0, dmax = 0.0, wn2 = 0.0, im = 0.0, wmax = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    w[k] *= rot;
    const double d = std::abs(w[k] - qref[k]);
    d2 += d * d;
    dmax = std::max(dmax, d);
    wn2 += std::norm(w[k]);
    im += qref[k] * w[k].imag();
    wmax = std::max(wmax, std::abs(w[k]));
  }
  const double qnorm = sa;
  const double qmax = p.q0 / sa;
  rep.l2_distance = std::sqrt(area * d2);
  rep.l2_relative = rep.l2_distance / qnorm;
  rep.linf_distance = dmax;
  rep.linf_relative = dmax / qmax;
  rep.orthogonality = wn2 > 0.0 ? std::abs(area * im) / (qnorm * std::sqrt(area * wn2)) : 0.0;
  rep.mu_eps2 = mu * eps * eps;
  rep.v_omega_at_xa = pot.v_omega(xa);

  // Envelope C exp(-|x| / (3 sqrt(a*))) with C fit on the ring |x| = R.
  const double R = 5.0 * sa;
  const double decay_len = 3.0 * sa;
  if (W >= R + f.spacing) {
    const double outer = std::min(2.0 * R, W);
    double C = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double r = std::hypot(f.x(i), f.x(j));
        if (std::abs(r - R) <= f.spacing)
          C = std::max(C, std::abs(w[static_cast<std::size_t>(i) * n + j]) * std::exp(r / decay_len));
      }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n; ++j) {
        const double r = std::hypot(f.x(i), f.x(j));
        if (r < R || r > outer) continue;
        const double env = C * std::exp(-r / decay_len) + 1e-12 * wmax;
        if (std::abs(w[static_cast<std::size_t>(i) * n + j]) > env) {
          ok = false;
          break;
        }
      }
    rep.decay_constant = C;
    rep.decay_checked_to = outer;
    rep.decay_ok = ok;
  }
  rep.rescaled = ComplexField2D(f, std::move(w));
  rep.gradient_normalization = modulus_gradient_energy(rep.rescaled);
  if (rep.orthogonality > 1e-8)
    warn("blowup_diagnostics: orthogonality residual " + std::to_string(rep.orthogonality));
  return rep;
}

namespace {

SweepRecord make_record(const MinimizeResult& r, double a, const RadialProfile& p,
                        const PotentialSpec& pot, const BlowupOptions& bopts) {
  SweepRecord rec;
  const auto& rep = r.report;
  rec.a = a;
  rec.e_a = rep.e_a;
  rec.epsilon_a = rep.epsilon_a;
  rec.mu_a = rep.mu_a;
  rec.mu_eps2 = rep.mu_a * rep.epsilon_a * rep.epsilon_a;
  rec.x_a = rep.x_a;
  rec.v_omega_xa = pot.v_omega(rep.x_a);
  rec.residual = rep.residual;
  rec.iters = rep.iters;
  rec.status = rep.status;
  rec.converged = rep.converged;
  rec.runtime_seconds = rep.runtime_seconds;
  rec.half_width = r.field.grid().half_width;
  if (rep.converged) {
    try {
      rec.l2_distance = blowup_diagnostics(r.field, a, p, pot, rep.mu_a, bopts).l2_distance;
    } catch (const std::domain_error& e) {
      warn(std::string("sweep: no profile distance: ") + e.what());
    }
  }
  return rec;
}

ComplexField2D rescale_onto(const ComplexField2D& u, Point center, double s, const Grid2D& target) {
  // u(center + (x - center)/s) / s sampled on the target grid.
  std::vector<double> c1(target.n), c2(target.n);
  for (int i = 0; i < target.n; ++i) {
    c1[i] = center.x1 + (target.x(i) - center.x1) / s;
    c2[i] = center.x2 + (target.x(i) - center.x2) / s;
  }
  ComplexSamples v = fourier_resample(u.grid(), u.span(), c1, c2, OutsidePolicy::kZero);
  for (auto& z : v) z /= s;
  return ComplexField2D(target, std::move(v));
}

}  // namespace

double sweep_half_width(double a, const RadialProfile& p, const LogKernelPlan& plan,
                        const SweepOptions& opts) {
  if (!(opts.adaptive_width > 0.0)) return plan.grid().half_width;
  if (!(a > 0.0 && a < p.a_star))
    throw std::invalid_argument("adaptive sweep domains need 0 < a < a*");
  return opts.adaptive_width * std::sqrt(p.a_star) * predicted_blowup_scale(a, p.a_star);
}

std::vector<SweepRecord> sweep(std::vector<double> a_values, const PotentialSpec& pot,
                               const MinimizeConfig& cfg, const LogKernelPlan& plan,
                               const RadialProfile& p, const SweepOptions& opts) {
  std::sort(a_values.begin(), a_values.end());
  std::vector<SweepRecord> out(a_values.size());
  if (a_values.empty()) return out;

  auto plan_for = [&](double a) -> std::shared_ptr<const LogKernelPlan> {
    if (!(opts.adaptive_width > 0.0)) return borrow(plan);
    return std::make_shared<const LogKernelPlan>(
        make_grid(plan.grid().n, sweep_half_width(a, p, plan, opts)));
  };

  if (opts.continuation) {
    std::optional<MinimizeResult> prev;
    double prev_a = 0.0;
    for (std::size_t k = 0; k < a_values.size(); ++k) {
      const double a = a_values[k];
      const auto local = plan_for(a);
      const EnergyModel model(local, pot, cfg.interactions);
      ComplexField2D start;
      if (prev && prev->report.converged && a < p.a_star && prev_a < p.a_star) {
        const double s =
            predicted_blowup_scale(a, p.a_star) / predicted_blowup_scale(prev_a, p.a_star);
        start = rescale_onto(prev->field, prev->report.x_a, s, local->grid());
      } else {
        start = init_state(cfg.init, p, local->grid(), a);
      }
      auto r = minimize_from(cfg, model, a, start, p.a_star);
      out[k] = make_record(r, a, p, pot, opts.blowup);
      prev = std::move(r);
      prev_a = a;
    }
    return out;
  }

  const int jobs = std::clamp(opts.jobs, 1, static_cast<int>(a_values.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < a_values.size(); k = next++) {
      try {
        const double a = a_values[k];
        const auto local = plan_for(a);
        const EnergyModel model(local, pot, cfg.interactions);
        const auto r = minimize_from(cfg, model, a, init_state(cfg.init, p, local->grid(), a),
                                     p.a_star);
        out[k] = make_record(r, a, p, pot, opts.blowup);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

EnergyFit fit_energy_asymptotics(const std::vector<SweepRecord>& records, double a_star) {
  std::vector<std::pair<double, double>> c;
  for (const auto& r : records)
    if (usable(r) && r.a >= 0.9 * a_star && r.a < a_star)
      c.emplace_back(r.a, r.e_a - 0.25 * r.a * r.a * std::log(4.0 * (a_star - r.a)));
  if (c.size() < 3)
    throw std::invalid_argument("energy fit needs at least 3 converged records with a >= 0.9 a*");
  std::sort(c.begin(), c.end());
  EnergyFit fit;
  fit.used = c.size();
  const std::size_t half = c.size() / 2;
  double s = 0.0;
  for (std::size_t k = half; k < c.size(); ++k) s += c[k].second;
  fit.constant_estimate = s / static_cast<double>(c.size() - half);
  fit.drift = c.back().second - c.front().second;
  return fit;
}

double fit_epsilon_scaling(const std::vector<SweepRecord>& records, double a_star) {
  double sxy = 0.0, sxx = 0.0;
  std::size_t used = 0;
  double first_a = kNaN;
  bool distinct = false;
  for (const auto& r : records) {
    if (!usable(r) || !(r.a < a_star)) continue;
    const double x = std::sqrt((a_star - r.a) / a_star);
    sxy += x * r.epsilon_a;
    sxx += x * x;
    if (used == 0) first_a = r.a;
    else if (r.a != first_a) distinct = true;
    ++used;
  }
  if (used < 3) throw std::invalid_argument("scaling fit needs at least 3 converged records");
  if (!distinct || sxx == 0.0) throw std::invalid_argument("scaling fit: degenerate regressor");
  return sxy / sxx;
}

double trial_bound_closed_form(double a, double tau, const RadialProfile& p,
                               const PotentialSpec& pot) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const double s = p.a_star;
  const double om = pot.omega;
  const double moment2 = radial_moment(p, 2);
  const double v_term = radial_weighted_mass(p, [&](double r) { return pot.v_omega({r / tau, 0.0}); });
  return a * (s - a) * tau * tau / s + a * om * om / (4.0 * s * tau * tau) * moment2 +
         (a / s) * v_term + 0.5 * (a / s) * (a / s) * profile_log_energy(p) -
         0.5 * a * a * std::log(tau);
}

double trial_bound_expansion(double a, const RadialProfile& p) {
  return energy_constant(p) + 0.25 * a * a * std::log(4.0 * (p.a_star - a));
}

TrialBound trial_upper_bound(double a, double tau, const RadialProfile& p,
                             const PotentialSpec& pot, const LogKernelPlan& plan, double tol) {
  TrialBound b;
  b.tau = tau;
  b.closed_form = trial_bound_closed_form(a, tau, p, pot);
  const auto trial = make_trial_cutoff_state(p, plan.grid(), a, tau, {}, pot.omega);
  const EnergyModel model(borrow(plan), pot, Interactions{});
  b.gridded = model.breakdown(trial.field.span()).total;
  b.relative_gap = std::abs(b.gridded - b.closed_form) / std::abs(b.closed_form);
  b.agrees = b.relative_gap <= tol;
  if (!b.agrees) {
    std::ostringstream os;
    os << "trial bound: closed form " << b.closed_form << " and gridded " << b.gridded
       << " differ by " << b.relative_gap << " relative";
    warn(os.str());
  }
  return b;
}

std::vector<ProbePoint> nonexistence_probe(double a, const PotentialSpec& pot,
                                           const std::vector<double>& tau_values,
                                           const RadialProfile& p, const LogKernelPlan& plan,
                                           Interactions interactions) {
  const EnergyModel model(borrow(plan), pot, interactions);
  const bool fast = pot.supercritical();
  std::vector<ProbePoint> out;
  out.reserve(tau_values.size());
  for (double tau : tau_values) {
    ProbePoint pt;
    pt.tau = tau;
    const double c = fast ? tau * std::sqrt(2.0 * tau) : 0.0;
    try {
      const auto trial = make_trial_cutoff_state(p, plan.grid(), a, tau, {c, c}, pot.omega);
      pt.energy = model.breakdown(trial.field.span()).total;
      pt.evaluated = true;
    } catch (const std::domain_error& e) {
      warn_once(std::string("nonexistence_probe: ") + e.what());
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace psn

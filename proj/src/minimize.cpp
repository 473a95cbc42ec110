#include "psn/minimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "psn/io.hpp"
#include "psn/log.hpp"

namespace psn {

const char* to_string(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::kConverged:
      return "converged";
    case MinimizeStatus::kMaxIters:
      return "max_iters";
    case MinimizeStatus::kStagnated:
      return "stagnated";
    case MinimizeStatus::kCollapse:
      return "collapse";
  }
  return "unknown";
}

namespace {

double raw_mass(const Grid2D& g, std::span<const cplx> u) {
  double s = 0.0;
  for (const auto& c : u) s += std::norm(c);
  return g.cell_area() * s;
}

// Real inner product Re <f, g> with the grid quadrature weight.
double dot(const Grid2D& g, std::span<const cplx> f, std::span<const cplx> h) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k].real() * h[k].real() + f[k].imag() * h[k].imag();
  return g.cell_area() * s;
}

void rescale_to_mass(const Grid2D& g, ComplexSamples& u, double a) {
  const double m = raw_mass(g, u);
  if (!(m > 0.0)) throw std::invalid_argument("cannot normalize a field with zero mass");
  const double s = std::sqrt(a / m);
  for (auto& c : u) c *= s;
}

RealSamples smooth_random(const Grid2D& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  constexpr int kModes = 6;
  double k1[kModes], k2[kModes], ph[kModes], amp[kModes];
  for (int m = 0; m < kModes; ++m) {
    k1[m] = 1.5 * U(rng);
    k2[m] = 1.5 * U(rng);
    ph[m] = 3.14159 * U(rng);
    amp[m] = U(rng);
  }
  RealSamples out(g.size());
  double peak = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double v = 0.0;
      for (int m = 0; m < kModes; ++m) v += amp[m] * std::cos(k1[m] * g.x(i) + k2[m] * g.x(j) + ph[m]);
      out[static_cast<std::size_t>(i) * g.n + j] = v;
      peak = std::max(peak, std::abs(v));
    }
  if (peak > 0.0)
    for (auto& v : out) v /= peak;
  return out;
}

double optimal_tau(double a, double a_star) {
  if (!(a < a_star)) throw std::invalid_argument("the optimal soliton scale needs a < a*");
  return std::sqrt(a * a_star / (4.0 * (a_star - a)));
}

}  // namespace

ComplexField2D init_state(const InitSpec& init, const RadialProfile& p, const Grid2D& g, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("mass a must be positive");
  ComplexSamples u;
  auto gaussian = [&](double w) {
    if (!(w > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    ComplexSamples v(g.size());
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        v[static_cast<std::size_t>(i) * g.n + j] =
            std::exp(-(g.x(i) * g.x(i) + g.x(j) * g.x(j)) / (2.0 * w * w));
    return v;
  };
  auto soliton = [&](double tau) {
    const double t = tau > 0.0 ? tau : optimal_tau(a, p.a_star);
    const ComplexField2D s = make_scaled_soliton(p, g, a, t);
    return s.values();
  };
  switch (init.kind) {
    case InitKind::kGaussian:
      u = gaussian(init.width);
      break;
    case InitKind::kScaledSoliton:
      u = soliton(init.tau);
      break;
    case InitKind::kFile: {
      LoadedField f = load_field(init.path);
      if (!f.field.grid().same_as(g)) {
        std::ostringstream os;
        os << "initial field grid (n=" << f.field.grid().n << ", L=" << f.field.grid().half_width
           << ") does not match the run grid (n=" << g.n << ", L=" << g.half_width << ")";
        throw std::invalid_argument(os.str());
      }
      u = f.field.values();
      break;
    }
    case InitKind::kRandomPhase: {
      u = init.tau > 0.0 ? soliton(init.tau) : gaussian(init.width);
      std::mt19937_64 rng(init.seed);
      const RealSamples eta = smooth_random(g, rng);
      const RealSamples phi = smooth_random(g, rng);
      for (std::size_t k = 0; k < u.size(); ++k)
        u[k] *= (1.0 + 0.5 * init.amplitude * eta[k]) * std::polar(1.0, init.amplitude * phi[k]);
      break;
    }
    default:
      throw std::invalid_argument("unknown initializer");
  }
  rescale_to_mass(g, u, a);
  return ComplexField2D(g, std::move(u));
}

Point refined_argmax(const ComplexField2D& u) {
  const Grid2D& g = u.grid();
  const int n = g.n;
  RealSamples mod(u.size());
  double peak = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    mod[k] = std::abs(u[k]);
    peak = std::max(peak, mod[k]);
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (mod[k] >= peak * (1.0 - 1e-12)) {
      best = k;
      break;
    }
  }
  const int i = static_cast<int>(best / n);
  const int j = static_cast<int>(best % n);
  auto at = [&](int a, int b) { return mod[static_cast<std::size_t>((a + n) % n) * n + (b + n) % n]; };
  auto offset = [](double m, double c, double p) {
    const double curv = m - 2.0 * c + p;
    if (curv >= 0.0) return 0.0;
    return std::clamp(0.5 * (m - p) / curv, -0.5, 0.5);
  };
  const double c = at(i, j);
  return {g.x(i) + g.spacing * offset(at(i - 1, j), c, at(i + 1, j)),
          g.x(j) + g.spacing * offset(at(i, j - 1), c, at(i, j + 1))};
}

ComplexField2D align_global_phase(const ComplexField2D& u) {
  cplx s = 0.0;
  for (const auto& c : u.values()) s += std::abs(c) * c;
  if (std::abs(s) == 0.0) return u;
  const cplx rot = std::conj(s) / std::abs(s);
  ComplexSamples v(u.values());
  for (auto& c : v) c *= rot;
  return ComplexField2D(u.grid(), std::move(v));
}

MinimizeResult minimize_from(const MinimizeConfig& cfg, const EnergyModel& model, double a,
                             const ComplexField2D& start, double a_star) {
  if (!(cfg.dt_min > 0.0 && cfg.dt_min <= cfg.dt && cfg.dt <= cfg.dt_max))
    throw std::invalid_argument("step sizes must satisfy 0 < dt_min <= dt <= dt_max");
  if (!(cfg.residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("mass a must be positive");
  if (!start.grid().same_as(model.grid()))
    throw std::invalid_argument("initial field grid does not match the energy grid");

  const auto t_start = std::chrono::steady_clock::now();
  const Grid2D& g = model.grid();
  const int n = g.n;
  const std::size_t size = g.size();
  const bool supercritical = a >= a_star || model.potential().supercritical();
  if (supercritical)
    warn("minimize: supercritical parameters (a >= a* or omega > omega*); expecting collapse");

  ComplexSamples u(start.values());
  rescale_to_mass(g, u, a);
  EnergyBreakdown parts;
  ComplexSamples hu = model.apply(u, &parts);

  MinimizeReport rep;
  rep.a = a;
  rep.omega = model.potential().omega;
  rep.supercritical = supercritical;
  rep.energy_history.push_back(parts.total);

  auto scale_of = [](const EnergyBreakdown& e) {
    return std::abs(e.kinetic) + std::abs(e.potential) + std::abs(e.log) + std::abs(e.quartic) +
           std::abs(e.rotation);
  };
  auto identity_mu = [&](const EnergyBreakdown& e) { return (e.total + e.log + e.quartic) / e.mass; };

  ComplexSamples grad(size), z(size), dir(size), z_prev, dir_prev;
  double gz_prev = 0.0;
  double t_guess = cfg.dt;
  double best_residual = std::numeric_limits<double>::infinity();
  int since_best = 0;
  int failures = 0;
  MinimizeStatus status = MinimizeStatus::kMaxIters;
  int it = 0;
  double residual = 0.0;

  for (;; ++it) {
    const double mu = identity_mu(parts);
    double rnum = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      grad[k] = hu[k] - mu * u[k];
      rnum += std::norm(grad[k]);
    }
    residual = std::sqrt(g.cell_area() * rnum / a);
    if (!std::isfinite(parts.total) || parts.total < cfg.collapse_energy) {
      status = MinimizeStatus::kCollapse;
      break;
    }
    if (residual <= cfg.residual_tol) {
      status = MinimizeStatus::kConverged;
      break;
    }
    if (it >= cfg.max_iters) break;

    // Preconditioned gradient z = K^{-1/2} (alpha / (alpha + V)) K^{-1/2} grad with
    // K = alpha - Lap, projected on the tangent space.
    const double alpha = std::max(1.0, parts.kinetic / parts.mass);
    auto half_kinetic_inverse = [&](ComplexSamples& f) {
      g.fft.forward(f);
      for (int i = 0; i < n; ++i) {
        const double k1 = g.deriv_freq[i];
        for (int j = 0; j < n; ++j) {
          const double k2 = g.deriv_freq[j];
          f[static_cast<std::size_t>(i) * n + j] /= std::sqrt(alpha + k1 * k1 + k2 * k2);
        }
      }
      g.fft.inverse(f);
    };
    std::copy(grad.begin(), grad.end(), z.begin());
    half_kinetic_inverse(z);
    for (std::size_t k = 0; k < size; ++k) z[k] *= alpha / (alpha + model.v()[k]);
    half_kinetic_inverse(z);
    {
      const double c = dot(g, u, z) / a;
      for (std::size_t k = 0; k < size; ++k) z[k] -= c * u[k];
    }
    const double gz = dot(g, grad, z);

    bool restarted = true;
    if (cfg.conjugate && !dir_prev.empty() && gz_prev > 0.0) {
      const double beta = std::max(0.0, (gz - dot(g, grad, z_prev)) / gz_prev);
      for (std::size_t k = 0; k < size; ++k) dir[k] = -z[k] + beta * dir_prev[k];
      const double c = dot(g, u, dir) / a;
      for (std::size_t k = 0; k < size; ++k) dir[k] -= c * u[k];
      restarted = !(dot(g, grad, dir) < 0.0);
    }
    if (restarted)
      for (std::size_t k = 0; k < size; ++k) dir[k] = -z[k];
    const double slope = 2.0 * dot(g, grad, dir);

    const double tol_e = 1e-13 * std::max(1.0, scale_of(parts));
    // One evaluation along the normalized path u(t) = sqrt(a) (u + t d) / |u + t d|,
    // returning E(t) and dE/dt.
    struct Probe {
      double t = 0.0;
      double energy = 0.0;
      double slope = 0.0;
      EnergyBreakdown parts;
      ComplexSamples u, hu;
    };
    auto probe = [&](double t) {
      Probe pr;
      pr.t = t;
      pr.u.resize(size);
      for (std::size_t k = 0; k < size; ++k) pr.u[k] = u[k] + t * dir[k];
      const double norm = std::sqrt(raw_mass(g, pr.u));
      const double s = std::sqrt(a) / norm;
      for (auto& c : pr.u) c *= s;
      pr.hu = model.apply(pr.u, &pr.parts);
      pr.energy = pr.parts.total;
      const double mu_t = dot(g, pr.u, pr.hu) / a;
      double acc = 0.0;
      for (std::size_t k = 0; k < size; ++k) {
        const cplx r = pr.hu[k] - mu_t * pr.u[k];
        acc += r.real() * dir[k].real() + r.imag() * dir[k].imag();
      }
      pr.slope = 2.0 * s * g.cell_area() * acc;
      return pr;
    };
    auto ok = [&](const Probe& pr) {
      return std::isfinite(pr.energy) && pr.energy <= parts.total + tol_e;
    };
    // Minimizer of the cubic-free secant model of dE/dt through (0, slope) and (t, s_t).
    auto secant = [&](const Probe& pr) {
      if (pr.slope <= slope) return pr.t * 4.0;
      return std::clamp(pr.t * slope / (slope - pr.slope), 0.1 * pr.t, 4.0 * pr.t);
    };

    double t = std::clamp(t_guess, cfg.dt_min, cfg.dt_max);
    Probe best_probe = probe(t);
    while (!ok(best_probe)) {
      t = std::min(t * cfg.backtrack, secant(best_probe));
      if (t < cfg.dt_min) break;
      best_probe = probe(t);
    }
    if (!ok(best_probe)) {
      dir_prev.clear();
      if (++failures >= 2) {
        status = MinimizeStatus::kStagnated;
        break;
      }
      t_guess = cfg.dt;
      continue;
    }
    failures = 0;
    if (std::abs(best_probe.slope) > 0.5 * std::abs(slope)) {
      const double t2 = std::min(secant(best_probe), cfg.dt_max);
      if (t2 >= cfg.dt_min && std::abs(t2 - best_probe.t) > 1e-3 * best_probe.t) {
        Probe second = probe(t2);
        const bool lower = second.energy < best_probe.energy - tol_e;
        const bool tie = std::abs(second.energy - best_probe.energy) <= tol_e &&
                         std::abs(second.slope) < std::abs(best_probe.slope);
        if (ok(second) && (lower || tie)) best_probe = std::move(second);
      }
    }
    t_guess = std::clamp(best_probe.t * cfg.growth, cfg.dt_min, cfg.dt_max);

    u.swap(best_probe.u);
    hu.swap(best_probe.hu);
    parts = best_probe.parts;
    z_prev.assign(z.begin(), z.end());
    dir_prev.assign(dir.begin(), dir.end());
    gz_prev = gz;

    if (residual < 0.999 * best_residual) {
      best_residual = residual;
      since_best = 0;
    } else if (++since_best >= cfg.stagnation_window) {
      status = MinimizeStatus::kStagnated;
      ++it;
      break;
    }
    if (cfg.history_stride > 0 && (it + 1) % cfg.history_stride == 0)
      rep.energy_history.push_back(parts.total);
  }

  ComplexField2D field = align_global_phase(ComplexField2D(g, std::move(u)));
  rep.e_a = parts.total;
  rep.mu_a = identity_mu(parts);
  rep.mu_rayleigh = dot(g, field.values(), model.apply(field.values())) / a;
  rep.iters = it;
  rep.residual = residual;
  rep.breakdown = parts;
  rep.status = status;
  rep.converged = status == MinimizeStatus::kConverged;
  rep.x_a = refined_argmax(field);
  const double mod_kin = modulus_gradient_energy(field);
  rep.epsilon_a = mod_kin > 0.0 ? 1.0 / std::sqrt(mod_kin) : std::nan("");
  rep.boundary_mass_fraction = boundary_mass_fraction(g, field.values());
  // A minimizer narrower than half a cell is the lattice version of blow-up.
  if (rep.epsilon_a < 0.5 * g.spacing) {
    rep.status = MinimizeStatus::kCollapse;
    rep.converged = false;
    warn("minimize: minimizer concentrated below the grid spacing; collapse detected");
  }
  if (rep.energy_history.back() != rep.e_a) rep.energy_history.push_back(rep.e_a);
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (rep.boundary_mass_fraction > 1e-10)
    warn_once("minimize: more than 1e-10 of the mass lies in the outer 10% of the domain");
  return {std::move(field), std::move(rep)};
}

MinimizeResult minimize(const MinimizeConfig& cfg, const PotentialSpec& pot, double a,
                        const LogKernelPlan& plan, const RadialProfile& p) {
  const EnergyModel model(borrow(plan), pot, cfg.interactions);
  return minimize_from(cfg, model, a, init_state(cfg.init, p, plan.grid(), a), p.a_star);
}

}  // namespace psn

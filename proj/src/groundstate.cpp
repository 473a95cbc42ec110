#include "psn/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace psn {
namespace {

enum class ShotOutcome { kTurnsUp, kCrossesZero, kReachedEnd };

struct Shot {
  ShotOutcome outcome = ShotOutcome::kReachedEnd;
  std::vector<double> q;
  std::vector<double> dq;
};

// Q'' = -Q'/r + Q - Q^3 as a first-order system.
inline void rhs(double r, double q, double dq, double& dq_out, double& ddq_out) {
  dq_out = dq;
  ddq_out = -dq / r + q - q * q * q;
}

// Integrates from r = 0 on the mesh r_i = i * step. The first mesh interval
// uses the regular series Q = q0 + c2 r^2 + c4 r^4 to step over the 1/r term.
Shot shoot(double q0, std::size_t mesh_points, double step, int substeps, bool stop_early) {
  Shot s;
  s.q.reserve(mesh_points);
  s.dq.reserve(mesh_points);
  const double f0 = q0 - q0 * q0 * q0;
  const double c2 = f0 / 4.0;
  const double c4 = (1.0 - 3.0 * q0 * q0) * c2 / 16.0;
  s.q.push_back(q0);
  s.dq.push_back(0.0);
  if (mesh_points < 2) return s;
  double q = q0 + c2 * step * step + c4 * std::pow(step, 4);
  double dq = 2.0 * c2 * step + 4.0 * c4 * std::pow(step, 3);
  s.q.push_back(q);
  s.dq.push_back(dq);
  const double h = step / substeps;
  for (std::size_t i = 1; i + 1 < mesh_points; ++i) {
    double r = i * step;
    for (int k = 0; k < substeps; ++k) {
      double k1q, k1d, k2q, k2d, k3q, k3d, k4q, k4d;
      rhs(r, q, dq, k1q, k1d);
      rhs(r + 0.5 * h, q + 0.5 * h * k1q, dq + 0.5 * h * k1d, k2q, k2d);
      rhs(r + 0.5 * h, q + 0.5 * h * k2q, dq + 0.5 * h * k2d, k3q, k3d);
      rhs(r + h, q + h * k3q, dq + h * k3d, k4q, k4d);
      q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
      dq += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      r += h;
    }
    s.q.push_back(q);
    s.dq.push_back(dq);
    if (q < 0.0) {
      s.outcome = ShotOutcome::kCrossesZero;
      if (stop_early) return s;
    } else if (dq > 0.0 && s.outcome == ShotOutcome::kReachedEnd) {
      s.outcome = ShotOutcome::kTurnsUp;
      if (stop_early) return s;
    }
    if (!std::isfinite(q) || std::abs(q) > 1e3) break;
  }
  return s;
}

double k0(double r) { return std::cyl_bessel_k(0.0, r); }
double k1(double r) { return std::cyl_bessel_k(1.0, r); }

}  // namespace

namespace detail {
double tail_value(const RadialProfile& p, double r) {
  if (r > 700.0) return 0.0;
  return p.tail_coefficient * k0(r);
}
double tail_derivative(const RadialProfile& p, double r) {
  if (r > 700.0) return 0.0;
  return -p.tail_coefficient * k1(r);
}
}  // namespace detail

double RadialProfile::value(double rho) const {
  if (rho < 0.0) rho = -rho;
  if (rho >= r.back()) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(rho / step), r.size() - 2);
  const double t = (rho - r[i]) / step;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * q[i] + h10 * step * dq[i] + h01 * q[i + 1] + h11 * step * dq[i + 1];
}

double RadialProfile::derivative(double rho) const {
  const double sign = rho < 0.0 ? -1.0 : 1.0;
  rho = std::abs(rho);
  if (rho >= r.back()) return 0.0;
  const std::size_t i = std::min(static_cast<std::size_t>(rho / step), r.size() - 2);
  const double t = (rho - r[i]) / step;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  return sign * (d00 * q[i] / step + d10 * dq[i] + d01 * q[i + 1] / step + d11 * dq[i + 1]);
}

RadialProfile solve_radial_ground_state(double tol, double r_max, const ShootingOptions& opts) {
  if (!(tol > 0.0) || tol > 1e-8)
    throw std::invalid_argument("tol must lie in (0, 1e-8]");
  if (!(r_max >= 20.0)) throw std::invalid_argument("r_max must be at least 20");
  if (!(opts.mesh_step > 0.0) || opts.substeps < 1)
    throw std::invalid_argument("bad shooting mesh");

  const double step = opts.mesh_step;
  const auto mesh_points = static_cast<std::size_t>(std::llround(r_max / step)) + 1;

  double lo = opts.bracket_lo;
  double hi = opts.bracket_hi;
  if (shoot(lo, mesh_points, step, opts.substeps, true).outcome != ShotOutcome::kTurnsUp ||
      shoot(hi, mesh_points, step, opts.substeps, true).outcome != ShotOutcome::kCrossesZero) {
    std::ostringstream os;
    os << "shooting bracket (" << lo << ", " << hi << ") does not enclose Q(0)";
    throw std::runtime_error(os.str());
  }
  int it = 0;
  for (; it < opts.max_bisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at machine resolution
    const Shot s = shoot(mid, mesh_points, step, opts.substeps, true);
    if (s.outcome == ShotOutcome::kCrossesZero) {
      hi = mid;
    } else if (s.outcome == ShotOutcome::kTurnsUp) {
      lo = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }
  if (it == opts.max_bisections) throw std::runtime_error("shooting bisection did not converge");

  // The two bracketing trajectories agree until the unstable mode amplifies
  // their O(eps) difference; trust the shot only while they agree to 1e-8.
  const Shot a = shoot(lo, mesh_points, step, opts.substeps, false);
  const Shot b = shoot(hi, mesh_points, step, opts.substeps, false);
  const std::size_t common = std::min(a.q.size(), b.q.size());
  std::size_t match = 0;
  for (std::size_t i = 1; i < common; ++i) {
    const double mid = 0.5 * (a.q[i] + b.q[i]);
    if (!(mid > 0.0) || std::abs(a.q[i] - b.q[i]) > 1e-8 * mid || a.dq[i] >= 0.0 ||
        b.dq[i] >= 0.0)
      break;
    match = i;
  }
  if (match < 100) throw std::runtime_error("shooting produced no usable profile segment");

  RadialProfile p;
  p.step = step;
  p.q0 = 0.5 * (lo + hi);
  p.r.resize(mesh_points);
  p.q.resize(mesh_points);
  p.dq.resize(mesh_points);
  for (std::size_t i = 0; i < mesh_points; ++i) p.r[i] = i * step;
  for (std::size_t i = 0; i <= match; ++i) {
    p.q[i] = 0.5 * (a.q[i] + b.q[i]);
    p.dq[i] = 0.5 * (a.dq[i] + b.dq[i]);
  }
  p.matched_radius = p.r[match];

  // Least-squares fit of c K0(r) over the last 10% of the shot segment.
  const std::size_t first = match - match / 10;
  double num = 0.0, den = 0.0;
  for (std::size_t i = first; i <= match; ++i) {
    const double kv = k0(p.r[i]);
    num += p.q[i] * kv;
    den += kv * kv;
  }
  p.tail_coefficient = num / den;
  for (std::size_t i = match + 1; i < mesh_points; ++i) {
    p.q[i] = p.tail_coefficient * k0(p.r[i]);
    p.dq[i] = -p.tail_coefficient * k1(p.r[i]);
  }

  // ODE residual: fourth-order differences of Q' on the shot segment, and the
  // exact residual c^3 K0^3 of the linearized tail.
  double res = 0.0;
  // Q' is odd in r, which supplies the stencil points left of the origin.
  auto dq_ext = [&](long i) { return i < 0 ? -p.dq[static_cast<std::size_t>(-i)] : p.dq[i]; };
  auto ddq = [&](std::size_t i) {
    const long k = static_cast<long>(i);
    return (-dq_ext(k + 2) + 8.0 * dq_ext(k + 1) - 8.0 * dq_ext(k - 1) + dq_ext(k - 2)) /
           (12.0 * step);
  };
  for (std::size_t i = 0; i + 2 <= match; ++i) {
    const double q = p.q[i];
    const double second = ddq(i);
    const double first_over_r = i == 0 ? second : p.dq[i] / p.r[i];
    res = std::max(res, std::abs(second + first_over_r - q + q * q * q));
  }
  for (std::size_t i = match + 1; i < mesh_points; ++i)
    res = std::max(res, std::pow(p.q[i], 3));
  p.ode_residual = res;
  if (!(res <= tol)) {
    std::ostringstream os;
    os << "ground-state ODE residual " << res << " exceeds tol " << tol
       << "; refine the integrator step";
    throw std::runtime_error(os.str());
  }
  for (std::size_t i = 1; i < mesh_points; ++i) {
    if (!(p.q[i] > 0.0) || !(p.q[i] < p.q[i - 1]))
      throw std::runtime_error("ground-state profile is not positive and decreasing");
  }
  p.a_star = critical_mass(p);
  return p;
}

double critical_mass(const RadialProfile& p) {
  return radial_weighted_mass(p, [](double) { return 1.0; });
}

double radial_moment(const RadialProfile& p, int k) {
  if (k != 0 && k != 2 && k != 4)
    throw std::invalid_argument("radial_moment supports k in {0, 2, 4}");
  return radial_weighted_mass(p, [k](double r) { return std::pow(r, k); });
}

IdentityResiduals identity_residuals(const RadialProfile& p) {
  const double mass = critical_mass(p);
  const double grad = radial_integral(p, [](double, double, double dq) { return dq * dq; });
  const double quart = radial_integral(p, [](double, double q, double) { return q * q * q * q; });
  return {(grad - mass) / mass, (mass - 0.5 * quart) / mass};
}

RealSamples sample_scaled(const RadialProfile& p, const Grid2D& g, double m, Point center) {
  if (!(m > 0.0)) throw std::invalid_argument("scale m must be positive");
  if (std::abs(center.x1) >= g.half_width || std::abs(center.x2) >= g.half_width)
    throw std::invalid_argument("center must lie inside the domain");
  if (m * g.spacing > 1.0) {
    std::ostringstream os;
    os << "scale m=" << m << " under-resolved on a grid with h=" << g.spacing
       << " (m*h must not exceed 1)";
    throw std::domain_error(os.str());
  }
  RealSamples out(g.size());
  for (int i = 0; i < g.n; ++i) {
    const double d1 = g.x(i) - center.x1;
    for (int j = 0; j < g.n; ++j) {
      const double d2 = g.x(j) - center.x2;
      out[static_cast<std::size_t>(i) * g.n + j] = m * p.value(m * std::hypot(d1, d2));
    }
  }
  return out;
}

namespace {

struct GnParts {
  double kinetic;
  double mass;
  double quartic;
};

GnParts gn_parts(const Grid2D& g, std::span<const double> u, ComplexSamples* hat_out) {
  ComplexSamples hat(u.begin(), u.end());
  g.fft.forward(hat);
  const int n = g.n;
  double kin = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double k2 = g.deriv_freq[i] * g.deriv_freq[i] + g.deriv_freq[j] * g.deriv_freq[j];
      kin += k2 * std::norm(hat[static_cast<std::size_t>(i) * n + j]);
    }
  kin *= g.cell_area() / static_cast<double>(g.size());
  double mass = 0.0, quart = 0.0;
  for (double v : u) {
    mass += v * v;
    quart += v * v * v * v;
  }
  if (hat_out) *hat_out = std::move(hat);
  return {kin, mass * g.cell_area(), quart * g.cell_area()};
}

}  // namespace

double gn_quotient(const Grid2D& g, std::span<const double> u) {
  if (u.size() != g.size()) throw std::invalid_argument("shape mismatch");
  const GnParts p = gn_parts(g, u, nullptr);
  if (p.quartic <= 0.0) throw std::invalid_argument("gn_quotient of the zero field");
  return 2.0 * p.kinetic * p.mass / p.quartic;
}

GnMinimizeResult minimize_gn_quotient(const Grid2D& g, double tol, int max_iters) {
  const int n = g.n;
  RealSamples u(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r2 = g.x(i) * g.x(i) + g.x(j) * g.x(j);
      u[static_cast<std::size_t>(i) * n + j] = 2.0 * std::exp(-0.5 * r2);
    }
  RealSamples k2(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k2[static_cast<std::size_t>(i) * n + j] =
          g.deriv_freq[i] * g.deriv_freq[i] + g.deriv_freq[j] * g.deriv_freq[j];

  // Petviashvili iteration for -Lap u + u = u^3: u <- m^{3/2} (1 - Lap)^{-1} u^3
  // with m = <u, (1 - Lap) u> / <u, u^3>.
  GnMinimizeResult res;
  ComplexSamples uh(g.size()), nh(g.size());
  for (int it = 0; it <= max_iters; ++it) {
    res.iterations = it;
    for (std::size_t k = 0; k < g.size(); ++k) {
      uh[k] = u[k];
      nh[k] = u[k] * u[k] * u[k];
    }
    g.fft.forward(uh);
    g.fft.forward(nh);
    double lin = 0.0, cub = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      lin += (1.0 + k2[k]) * std::norm(uh[k]);
      cub += std::real(std::conj(uh[k]) * nh[k]);
    }
    if (!(cub > 0.0)) break;
    const double m = lin / cub;
    // Residual of the equation relative to the size of u^3.
    double rnum = 0.0, rden = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      rnum += std::norm((1.0 + k2[k]) * uh[k] - nh[k]);
      rden += std::norm(nh[k]);
    }
    res.gradient_norm = std::sqrt(rnum / rden);
    if (res.gradient_norm < tol) {
      res.converged = true;
      break;
    }
    if (it == max_iters) break;
    const double scale = std::pow(m, 1.5);
    for (std::size_t k = 0; k < g.size(); ++k) nh[k] *= scale / (1.0 + k2[k]);
    g.fft.inverse(nh);
    for (std::size_t k = 0; k < g.size(); ++k) u[k] = nh[k].real();
  }
  res.quotient = gn_quotient(g, u);
  res.field = std::move(u);
  return res;
}

}  // namespace psn

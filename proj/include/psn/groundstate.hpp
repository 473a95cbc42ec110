#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "psn/grid.hpp"

namespace psn {

/// Tabulated positive radial solution Q of Q'' + Q'/r - Q + Q^3 = 0.
///
/// The table is produced by shooting on Q(0) up to `matched_radius`; beyond it
/// the profile follows the linearized tail c K0(r), whose coefficient is fit
/// on the last 10% of the shot segment. Values past r.back() are treated as
/// zero by the samplers and as the analytic tail by the radial integrals.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> q;
  std::vector<double> dq;
  double step = 0.0;
  double q0 = 0.0;
  double a_star = 0.0;
  double tail_coefficient = 0.0;
  double matched_radius = 0.0;
  /// Max-norm residual of the ODE on the tabulated mesh.
  double ode_residual = 0.0;

  double r_max() const { return r.back(); }
  /// Q(rho) by cubic Hermite interpolation of (q, dq); 0 beyond r_max.
  double value(double rho) const;
  /// Q'(rho) from the same interpolant.
  double derivative(double rho) const;
};

struct ShootingOptions {
  double mesh_step = 1e-3;
  /// RK4 substeps per mesh step.
  int substeps = 2;
  double bracket_lo = 2.0;
  double bracket_hi = 3.0;
  int max_bisections = 200;
};

/// Shoots on Q(0) by bisection inside (2, 3). Throws std::invalid_argument on
/// bad arguments and std::runtime_error on bracket failure or when the ODE
/// residual cannot be brought below tol with the configured integrator step.
RadialProfile solve_radial_ground_state(double tol = 1e-10, double r_max = 20.0,
                                        const ShootingOptions& opts = {});

/// 2 pi int_0^inf Q^2 r dr, composite Simpson on the table plus the K0 tail.
double critical_mass(const RadialProfile& p);

/// 2 pi int_0^inf Q^2 r^{k+1} dr for k in {0, 2, 4}.
double radial_moment(const RadialProfile& p, int k);

/// 2 pi int_0^inf f(r, Q, Q') r dr over the table plus the K0 tail.
template <typename F>
double radial_integral(const RadialProfile& p, F&& integrand);

/// 2 pi int_0^inf w(r) Q(r)^2 r dr for a radial weight w.
template <typename F>
double radial_weighted_mass(const RadialProfile& p, F&& weight) {
  return radial_integral(p, [&](double r, double q, double) { return weight(r) * q * q; });
}

/// Relative defects of int|grad Q|^2 = int Q^2 = (1/2) int Q^4, computed radially.
struct IdentityResiduals {
  double gradient = 0.0;  ///< (int|grad Q|^2 - int Q^2) / int Q^2
  double quartic = 0.0;   ///< (int Q^2 - int Q^4 / 2) / int Q^2
};
IdentityResiduals identity_residuals(const RadialProfile& p);

/// m Q(m |x - center|) on the grid. Throws std::domain_error when m * h > 1
/// (fewer than one sample per unit length of the profile).
RealSamples sample_scaled(const RadialProfile& p, const Grid2D& g, double m,
                          Point center = {});

/// Weinstein quotient 2 |grad u|^2 |u|^2 / |u|_4^4 of a real field; equals a*
/// at the optimizers m Q(m x).
double gn_quotient(const Grid2D& g, std::span<const double> u);

struct GnMinimizeResult {
  double quotient = 0.0;
  RealSamples field;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Optimizer of the Weinstein quotient on the grid. The quotient is invariant
/// under u -> c u(m x); on a lattice the free scale drifts to grid-sized
/// spikes, so the scale is pinned by solving -Lap u + u = u^3 (Petviashvili
/// iteration from a Gaussian). gradient_norm is the relative residual of that
/// equation. The quotient at the solution is the grid's estimate of a*.
GnMinimizeResult minimize_gn_quotient(const Grid2D& g, double tol = 1e-10,
                                      int max_iters = 20000);

// ---------------------------------------------------------------------------

namespace detail {
double tail_value(const RadialProfile& p, double r);
double tail_derivative(const RadialProfile& p, double r);
}

template <typename F>
double radial_integral(const RadialProfile& p, F&& integrand) {
  // Composite Simpson on the table (even number of intervals) ...
  const std::size_t m = p.r.size() - 1;
  const std::size_t even = m - (m % 2);
  auto f = [&](std::size_t i) { return integrand(p.r[i], p.q[i], p.dq[i]) * p.r[i]; };
  double s = 0.0;
  for (std::size_t i = 0; i <= even; ++i) {
    const double c = (i == 0 || i == even) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += c * f(i);
  }
  s *= p.step / 3.0;
  if (even != m) s += 0.5 * p.step * (f(m - 1) + f(m));
  // ... plus the analytic tail until it underflows.
  const double r0 = p.r.back();
  const double h = 1e-2;
  const int steps = 4000;
  double t = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double rr = r0 + i * h;
    const double c = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    t += c * integrand(rr, detail::tail_value(p, rr), detail::tail_derivative(p, rr)) * rr;
  }
  s += t * h / 3.0;
  return 2.0 * std::numbers::pi * s;
}

}  // namespace psn

#include "psn/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "psn/log.hpp"

namespace psn {

ComplexField2D::ComplexField2D(Grid2D grid, ComplexSamples values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    std::ostringstream os;
    os << "field has " << values_.size() << " samples, grid needs " << grid_.size();
    throw std::invalid_argument(os.str());
  }
  for (const auto& c : values_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::invalid_argument("field contains non-finite samples");
  }
  boundary_ratio_ = boundary_decay_ratio(grid_, values_);
}

ComplexField2D make_real_field(const Grid2D& g, std::span<const double> values) {
  return ComplexField2D(g, ComplexSamples(values.begin(), values.end()));
}

// ---------------------------------------------------------------------------
// Potentials

double PotentialSpec::v(Point x) const {
  const double r2 = x.x1 * x.x1 + x.x2 * x.x2;
  switch (kind) {
    case PotentialKind::kHarmonic:
      return 0.25 * lambda * lambda * r2;
    case PotentialKind::kPower:
      return coefficient * std::pow(r2, 0.5 * exponent);
    case PotentialKind::kTabulated: {
      const double r = std::sqrt(r2);
      if (r >= table_r.back()) return table_v.back() * r2 / (table_r.back() * table_r.back());
      const auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
      if (it == table_r.begin()) return table_v.front();
      const std::size_t k = static_cast<std::size_t>(it - table_r.begin());
      const double t = (r - table_r[k - 1]) / (table_r[k] - table_r[k - 1]);
      return (1.0 - t) * table_v[k - 1] + t * table_v[k];
    }
  }
  return 0.0;
}

double PotentialSpec::omega_star() const {
  switch (kind) {
    case PotentialKind::kHarmonic:
      return lambda;
    case PotentialKind::kPower:
      if (exponent > 2.0) return std::numeric_limits<double>::infinity();
      if (exponent == 2.0) return 2.0 * std::sqrt(coefficient);
      return 0.0;
    case PotentialKind::kTabulated:
      if (std::isfinite(table_omega_star)) return table_omega_star;
      return 2.0 * std::sqrt(table_v.back()) / table_r.back();
  }
  return 0.0;
}

PotentialSpec harmonic_potential(double lambda, double omega) {
  if (!(lambda > 0.0)) throw std::invalid_argument("harmonic strength must be positive");
  if (!(omega >= 0.0)) throw std::invalid_argument("rotation speed must be nonnegative");
  PotentialSpec p;
  p.kind = PotentialKind::kHarmonic;
  p.lambda = lambda;
  p.omega = omega;
  return p;
}

PotentialSpec power_potential(double exponent, double coefficient, double omega) {
  if (!(exponent > 0.0)) throw std::invalid_argument("power exponent must be positive");
  if (!(coefficient > 0.0)) throw std::invalid_argument("power coefficient must be positive");
  if (!(omega >= 0.0)) throw std::invalid_argument("rotation speed must be nonnegative");
  PotentialSpec p;
  p.kind = PotentialKind::kPower;
  p.exponent = exponent;
  p.coefficient = coefficient;
  p.omega = omega;
  return p;
}

PotentialSpec tabulated_potential(std::vector<double> r, std::vector<double> v, double omega,
                                  double omega_star) {
  if (r.size() < 2 || r.size() != v.size())
    throw std::invalid_argument("tabulated potential needs matching r and v with >= 2 nodes");
  if (r.front() != 0.0) throw std::invalid_argument("tabulated potential must start at r = 0");
  for (std::size_t k = 1; k < r.size(); ++k)
    if (!(r[k] > r[k - 1])) throw std::invalid_argument("tabulated radii must increase");
  for (double x : v)
    if (!(x >= 0.0)) throw std::invalid_argument("potential must be nonnegative");
  if (!(omega >= 0.0)) throw std::invalid_argument("rotation speed must be nonnegative");
  PotentialSpec p;
  p.kind = PotentialKind::kTabulated;
  p.table_r = std::move(r);
  p.table_v = std::move(v);
  p.table_omega_star = omega_star;
  p.omega = omega;
  return p;
}

RealSamples sample_potential(const PotentialSpec& pot, const Grid2D& g) {
  RealSamples out(g.size());
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double v = pot.v({g.x(i), g.x(j)});
      if (!(v >= 0.0)) throw std::invalid_argument("potential is negative on the grid");
      out[static_cast<std::size_t>(i) * g.n + j] = v;
    }
  }
  return out;
}

RealSamples sample_v_omega(const PotentialSpec& pot, const Grid2D& g) {
  RealSamples out = sample_potential(pot, g);
  const double c = 0.25 * pot.omega * pot.omega;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      out[static_cast<std::size_t>(i) * g.n + j] -= c * (g.x(i) * g.x(i) + g.x(j) * g.x(j));
  return out;
}

// ---------------------------------------------------------------------------
// Observables

double mass(const ComplexField2D& u) {
  double s = 0.0;
  for (const auto& c : u.values()) s += std::norm(c);
  return u.grid().cell_area() * s;
}

double kinetic(const ComplexField2D& u) {
  const auto d = spectral_gradient(u.grid(), u.span());
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += std::norm(d[0][k]) + std::norm(d[1][k]);
  return u.grid().cell_area() * s;
}

double quartic_integral(const ComplexField2D& u) {
  double s = 0.0;
  for (const auto& c : u.values()) {
    const double m = std::norm(c);
    s += m * m;
  }
  return u.grid().cell_area() * s;
}

double second_moment(const ComplexField2D& u) {
  const Grid2D& g = u.grid();
  double s = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      s += (g.x(i) * g.x(i) + g.x(j) * g.x(j)) * std::norm(u[static_cast<std::size_t>(i) * g.n + j]);
  return g.cell_area() * s;
}

double rotation_term(const ComplexField2D& u) {
  const Grid2D& g = u.grid();
  const auto d = spectral_gradient(g, u.span());
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * g.n + j;
      const cplx cu = std::conj(u[k]);
      s += -g.x(j) * (cu * d[0][k]).imag() + g.x(i) * (cu * d[1][k]).imag();
    }
  }
  return g.cell_area() * s;
}

double modulus_gradient_energy(const ComplexField2D& u) {
  const auto d = spectral_gradient(u.grid(), u.span());
  const auto m = modulus_gradient(u.grid(), u.span(), d);
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += m[0][k] * m[0][k] + m[1][k] * m[1][k];
  return u.grid().cell_area() * s;
}

double blowup_scale(const ComplexField2D& u) {
  const double e = modulus_gradient_energy(u);
  if (!(e > 0.0)) throw std::domain_error("modulus gradient vanishes; blow-up scale undefined");
  return 1.0 / std::sqrt(e);
}

// ---------------------------------------------------------------------------
// Trial states

double cutoff_bump(double radius) {
  if (radius <= 1.0) return 1.0;
  if (radius >= 2.0) return 0.0;
  const double t = radius - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double cutoff_normalization(const RadialProfile& p, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const double inner = radial_weighted_mass(p, [tau](double r) {
    const double b = cutoff_bump(r / tau);
    return b * b;
  });
  return std::sqrt(p.a_star / inner);
}

namespace {

void check_trial_args(const Grid2D& g, double a, double tau) {
  if (!(a > 0.0)) throw std::invalid_argument("mass a must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (tau * g.spacing > 1.0) {
    std::ostringstream os;
    os << "tau=" << tau << " under-resolved on a grid with h=" << g.spacing;
    throw std::domain_error(os.str());
  }
}

}  // namespace

CutoffTrialState make_trial_cutoff_state(const RadialProfile& p, const Grid2D& g, double a,
                                         double tau, Point center, double omega) {
  check_trial_args(g, a, tau);
  const double reach = 2.0;
  if (std::abs(center.x1) + reach > g.half_width - g.spacing ||
      std::abs(center.x2) + reach > g.half_width - g.spacing) {
    std::ostringstream os;
    os << "cutoff support around (" << center.x1 << ", " << center.x2
       << ") leaves the domain of half-width " << g.half_width;
    throw std::domain_error(os.str());
  }
  const double amp = tau * std::sqrt(a / p.a_star);
  ComplexSamples w(g.size());
  for (int i = 0; i < g.n; ++i) {
    const double x1 = g.x(i);
    for (int j = 0; j < g.n; ++j) {
      const double x2 = g.x(j);
      const double d = std::hypot(x1 - center.x1, x2 - center.x2);
      const double env = amp * cutoff_bump(d) * p.value(tau * d);
      // S(x) = x . c_perp / 2 with c_perp = (-c2, c1).
      const double phase = 0.5 * omega * (-x1 * center.x2 + x2 * center.x1);
      w[static_cast<std::size_t>(i) * g.n + j] = std::polar(env, phase);
    }
  }
  double m = 0.0;
  for (const auto& c : w) m += std::norm(c);
  m *= g.cell_area();
  if (!(m > 0.0)) throw std::domain_error("cutoff trial state has no mass on this grid");
  const double c = std::sqrt(a / m);
  for (auto& v : w) v *= c;
  return {ComplexField2D(g, std::move(w)), c};
}

ComplexField2D make_scaled_soliton(const RadialProfile& p, const Grid2D& g, double a,
                                   double tau) {
  check_trial_args(g, a, tau);
  RealSamples q = sample_scaled(p, g, tau);
  const double amp = std::sqrt(a / p.a_star);
  for (auto& v : q) v *= amp;
  return make_real_field(g, q);
}

}  // namespace psn

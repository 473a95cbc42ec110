#pragma once

#include <limits>
#include <span>
#include <vector>

#include "psn/grid.hpp"
#include "psn/groundstate.hpp"

namespace psn {

/// Complex samples of a state on a grid. Construction rejects non-finite
/// entries and records how far the field has decayed at the domain edge.
class ComplexField2D {
 public:
  ComplexField2D() = default;
  ComplexField2D(Grid2D grid, ComplexSamples values);

  const Grid2D& grid() const { return grid_; }
  const ComplexSamples& values() const { return values_; }
  std::span<const cplx> span() const { return values_; }
  /// Edge-to-peak modulus ratio measured at construction.
  double boundary_ratio() const { return boundary_ratio_; }

  cplx operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

 private:
  Grid2D grid_;
  ComplexSamples values_;
  double boundary_ratio_ = 0.0;
};

ComplexField2D make_real_field(const Grid2D& g, std::span<const double> values);

enum class PotentialKind { kHarmonic, kPower, kTabulated };

/// Radially symmetric trap V >= 0 together with the rotation speed.
///
/// harmonic:  V = (lambda^2 / 4) |x|^2, critical velocity lambda.
/// power:     V = coefficient |x|^s; critical velocity infinite for s > 2.
/// tabulated: V(|x|) by linear interpolation of (table_r, table_v), continued
///            quadratically past the last node.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::kHarmonic;
  double lambda = 2.0;
  double exponent = 2.0;
  double coefficient = 1.0;
  std::vector<double> table_r;
  std::vector<double> table_v;
  /// Critical velocity for the tabulated kind; NaN means estimate from the table.
  double table_omega_star = std::numeric_limits<double>::quiet_NaN();
  double omega = 0.0;

  double v(Point x) const;
  double v_omega(Point x) const { return v(x) - 0.25 * omega * omega * (x.x1 * x.x1 + x.x2 * x.x2); }
  double omega_star() const;
  bool supercritical() const { return omega > omega_star(); }
};

PotentialSpec harmonic_potential(double lambda, double omega);
PotentialSpec power_potential(double exponent, double coefficient, double omega);
PotentialSpec tabulated_potential(std::vector<double> r, std::vector<double> v, double omega,
                                  double omega_star = std::numeric_limits<double>::quiet_NaN());

/// Samples of V (or V_Omega) on the grid. Throws if V < 0 anywhere.
RealSamples sample_potential(const PotentialSpec& pot, const Grid2D& g);
RealSamples sample_v_omega(const PotentialSpec& pot, const Grid2D& g);

double mass(const ComplexField2D& u);
/// int |grad u|^2.
double kinetic(const ComplexField2D& u);
/// int |u|^4.
double quartic_integral(const ComplexField2D& u);
/// int |x|^2 |u|^2.
double second_moment(const ComplexField2D& u);
/// int x_perp . Im(conj(u) grad u) with x_perp = (-x2, x1).
double rotation_term(const ComplexField2D& u);
/// int |grad |u||^2 with the guarded modulus gradient.
double modulus_gradient_energy(const ComplexField2D& u);
/// (int |grad |u||^2)^{-1/2}; throws std::domain_error for a field with no gradient.
double blowup_scale(const ComplexField2D& u);

/// Smooth bump: 1 on |x| <= 1, exp(1 - 1/(1 - (|x|-1)^2)) on 1 < |x| < 2, 0 beyond.
double cutoff_bump(double radius);

/// Normalization of the cutoff trial state from the radial table,
/// (a* / int bump(|x|/tau)^2 Q^2)^{1/2}.
double cutoff_normalization(const RadialProfile& p, double tau);

struct CutoffTrialState {
  ComplexField2D field;
  /// Factor applied so that the gridded mass equals a.
  double normalization = 1.0;
};

/// C (tau sqrt(a)/|Q|) bump(x - c) Q(tau(x - c)) exp(i omega x.c_perp / 2).
/// Throws std::domain_error when the bump support leaves the domain.
CutoffTrialState make_trial_cutoff_state(const RadialProfile& p, const Grid2D& g, double a,
                                         double tau, Point center, double omega);

/// (tau sqrt(a)/|Q|) Q(tau |x|), real and centred.
ComplexField2D make_scaled_soliton(const RadialProfile& p, const Grid2D& g, double a,
                                   double tau);

}  // namespace psn

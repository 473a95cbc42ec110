#pragma once

#include <memory>
#include <span>

#include "psn/field.hpp"
#include "psn/logconv.hpp"

namespace psn {

/// Coefficients of the nonlocal and local self-interactions; setting either
/// to zero turns the functional into a linear (or partially linear) one.
struct Interactions {
  double log_coeff = 1.0;
  double quartic_coeff = 1.0;
};

struct EnergyBreakdown {
  double mass = 0.0;
  double kinetic = 0.0;            ///< int |grad u|^2
  double potential = 0.0;          ///< int V |u|^2
  double log = 0.0;                ///< (1/2) B0(|u|^2, |u|^2), times log_coeff
  double quartic = 0.0;            ///< -(1/2) int |u|^4, times quartic_coeff
  double rotation = 0.0;           ///< -omega int x_perp . Im(conj(u) grad u)
  double total = 0.0;
  double magnetic_kinetic = 0.0;   ///< int |(grad - i A) u|^2, A = (omega/2) x_perp
  double v_omega_potential = 0.0;  ///< int V_Omega |u|^2
  double second_moment = 0.0;      ///< int |x|^2 |u|^2
};

/// The functional for a fixed grid, potential and interaction setting, with
/// the potential samples precomputed. Evaluation is pure and reentrant.
class EnergyModel {
 public:
  EnergyModel(std::shared_ptr<const LogKernelPlan> plan, PotentialSpec pot,
              Interactions inter = {});

  const Grid2D& grid() const { return plan_->grid(); }
  const LogKernelPlan& plan() const { return *plan_; }
  const PotentialSpec& potential() const { return pot_; }
  const Interactions& interactions() const { return inter_; }
  const RealSamples& v() const { return v_; }

  EnergyBreakdown breakdown(std::span<const cplx> u) const;

  /// H u = -Lap u + V u + Phi_{|u|^2} u + i omega x_perp . grad u - |u|^2 u,
  /// with the interaction coefficients applied. The breakdown of u comes for
  /// free and is written to parts when given.
  ComplexSamples apply(std::span<const cplx> u, EnergyBreakdown* parts = nullptr) const;

 private:
  std::shared_ptr<const LogKernelPlan> plan_;
  PotentialSpec pot_;
  Interactions inter_;
  RealSamples v_;
  RealSamples r2_;
};

/// Wraps a caller-owned plan without taking ownership.
std::shared_ptr<const LogKernelPlan> borrow(const LogKernelPlan& plan);

EnergyBreakdown energy_breakdown(const ComplexField2D& u, const PotentialSpec& pot,
                                 const LogKernelPlan& plan, Interactions inter = {});

/// |H u - mu u|_2 / |u|_2.
double el_residual(const ComplexField2D& u, double mu, const PotentialSpec& pot,
                   const LogKernelPlan& plan, Interactions inter = {});

/// <u, H u> / <u, u>.
double rayleigh_multiplier(const ComplexField2D& u, const PotentialSpec& pot,
                           const LogKernelPlan& plan, Interactions inter = {});

/// (e + (1/2) B0(|u|^2,|u|^2) - (1/2) int |u|^4) / a, with the interaction
/// coefficients applied. Throws std::domain_error for a massless field.
double multiplier_from_identity(double e_val, const ComplexField2D& u, const LogKernelPlan& plan,
                                Interactions inter = {});

/// (a* - a)/(2 a*) int |grad |u||^2 - E for one field. The largest value over
/// a family is the run constant C in E >= (a* - a)/(2 a*) int |grad |u||^2 - C.
double lower_bound_defect(const EnergyBreakdown& parts, double modulus_kinetic, double a_star);

}  // namespace psn

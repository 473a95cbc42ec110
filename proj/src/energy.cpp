#include "psn/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace psn {

EnergyModel::EnergyModel(std::shared_ptr<const LogKernelPlan> plan, PotentialSpec pot,
                         Interactions inter)
    : plan_(std::move(plan)), pot_(std::move(pot)), inter_(inter) {
  if (!plan_) throw std::invalid_argument("energy model needs a kernel plan");
  const Grid2D& g = plan_->grid();
  v_ = sample_potential(pot_, g);
  r2_.resize(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      r2_[static_cast<std::size_t>(i) * g.n + j] = g.x(i) * g.x(i) + g.x(j) * g.x(j);
}

namespace {

void check_size(const Grid2D& g, std::size_t size) {
  if (size != g.size()) throw std::invalid_argument("field does not match the energy grid");
}

}  // namespace

ComplexSamples EnergyModel::apply(std::span<const cplx> u, EnergyBreakdown* parts) const {
  const Grid2D& g = grid();
  check_size(g, u.size());
  const int n = g.n;
  const std::size_t size = g.size();
  const cplx I(0.0, 1.0);

  ComplexSamples hat(u.begin(), u.end());
  g.fft.forward(hat);
  ComplexSamples d1(size), d2(size), lap(size);
  for (int i = 0; i < n; ++i) {
    const double k1 = g.deriv_freq[i];
    for (int j = 0; j < n; ++j) {
      const double k2 = g.deriv_freq[j];
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      d1[idx] = I * k1 * hat[idx];
      d2[idx] = I * k2 * hat[idx];
      lap[idx] = -(k1 * k1 + k2 * k2) * hat[idx];
    }
  }
  g.fft.inverse(d1);
  g.fft.inverse(d2);
  g.fft.inverse(lap);

  RealSamples rho(size);
  for (std::size_t k = 0; k < size; ++k) rho[k] = std::norm(u[k]);
  RealSamples phi;
  if (inter_.log_coeff != 0.0) phi = plan_->convolve(KernelKind::kLog, rho);

  const double omega = pot_.omega;
  const double half_omega = 0.5 * omega;
  double s_mass = 0, s_kin = 0, s_pot = 0, s_log = 0, s_q = 0, s_rot = 0, s_mag = 0, s_m2 = 0;
  ComplexSamples out(size);
  for (int i = 0; i < n; ++i) {
    const double x1 = g.x(i);
    for (int j = 0; j < n; ++j) {
      const double x2 = g.x(j);
      const std::size_t k = static_cast<std::size_t>(i) * n + j;
      const cplx uk = u[k];
      // x_perp . grad u with x_perp = (-x2, x1).
      const cplx ang = -x2 * d1[k] + x1 * d2[k];
      const double phik = phi.empty() ? 0.0 : phi[k];
      out[k] = -lap[k] + v_[k] * uk + inter_.log_coeff * phik * uk + I * omega * ang -
               inter_.quartic_coeff * rho[k] * uk;
      if (parts) {
        s_mass += rho[k];
        s_kin += std::norm(d1[k]) + std::norm(d2[k]);
        s_pot += v_[k] * rho[k];
        s_log += phik * rho[k];
        s_q += rho[k] * rho[k];
        s_rot += (std::conj(uk) * ang).imag();
        // (grad - i A) u with A = (omega/2)(-x2, x1).
        s_mag += std::norm(d1[k] + I * half_omega * x2 * uk) +
                 std::norm(d2[k] - I * half_omega * x1 * uk);
        s_m2 += r2_[k] * rho[k];
      }
    }
  }
  if (parts) {
    const double w = g.cell_area();
    EnergyBreakdown& e = *parts;
    e.mass = w * s_mass;
    e.kinetic = w * s_kin;
    e.potential = w * s_pot;
    e.log = 0.5 * inter_.log_coeff * w * s_log;
    e.quartic = -0.5 * inter_.quartic_coeff * w * s_q;
    e.rotation = -omega * w * s_rot;
    e.total = e.kinetic + e.potential + e.log + e.quartic + e.rotation;
    e.magnetic_kinetic = w * s_mag;
    e.second_moment = w * s_m2;
    e.v_omega_potential = e.potential - 0.25 * omega * omega * e.second_moment;
  }
  return out;
}

EnergyBreakdown EnergyModel::breakdown(std::span<const cplx> u) const {
  EnergyBreakdown e;
  apply(u, &e);
  return e;
}

std::shared_ptr<const LogKernelPlan> borrow(const LogKernelPlan& plan) {
  return std::shared_ptr<const LogKernelPlan>(&plan, [](const LogKernelPlan*) {});
}

namespace {

EnergyModel model_for(const ComplexField2D& u, const PotentialSpec& pot, const LogKernelPlan& plan,
                      Interactions inter) {
  if (!u.grid().same_as(plan.grid())) throw std::invalid_argument("field and plan grids differ");
  return EnergyModel(borrow(plan), pot, inter);
}

}  // namespace

EnergyBreakdown energy_breakdown(const ComplexField2D& u, const PotentialSpec& pot,
                                 const LogKernelPlan& plan, Interactions inter) {
  return model_for(u, pot, plan, inter).breakdown(u.span());
}

double el_residual(const ComplexField2D& u, double mu, const PotentialSpec& pot,
                   const LogKernelPlan& plan, Interactions inter) {
  const ComplexSamples hu = model_for(u, pot, plan, inter).apply(u.span());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < hu.size(); ++k) {
    num += std::norm(hu[k] - mu * u[k]);
    den += std::norm(u[k]);
  }
  if (!(den > 0.0)) throw std::domain_error("residual of a massless field");
  return std::sqrt(num / den);
}

double rayleigh_multiplier(const ComplexField2D& u, const PotentialSpec& pot,
                           const LogKernelPlan& plan, Interactions inter) {
  const ComplexSamples hu = model_for(u, pot, plan, inter).apply(u.span());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < hu.size(); ++k) {
    num += (std::conj(u[k]) * hu[k]).real();
    den += std::norm(u[k]);
  }
  if (!(den > 0.0)) throw std::domain_error("multiplier of a massless field");
  return num / den;
}

double multiplier_from_identity(double e_val, const ComplexField2D& u, const LogKernelPlan& plan,
                                Interactions inter) {
  if (!u.grid().same_as(plan.grid())) throw std::invalid_argument("field and plan grids differ");
  const double a = mass(u);
  if (!(a > 0.0)) throw std::domain_error("multiplier of a massless field");
  RealSamples rho(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) rho[k] = std::norm(u[k]);
  const double log_part = inter.log_coeff != 0.0 ? 0.5 * inter.log_coeff * b0(plan, rho, rho) : 0.0;
  const double quartic_part = -0.5 * inter.quartic_coeff * quartic_integral(u);
  return (e_val + log_part + quartic_part) / a;
}

double lower_bound_defect(const EnergyBreakdown& parts, double modulus_kinetic, double a_star) {
  return (a_star - parts.mass) / (2.0 * a_star) * modulus_kinetic - parts.total;
}

}  // namespace psn

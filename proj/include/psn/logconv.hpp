#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <span>

#include "psn/grid.hpp"

namespace psn {

enum class KernelKind {
  kLog,          ///< ln|x|
  kLogGrowth,    ///< ln(1 + |x|)
  kLogSingular,  ///< ln(1 + 1/|x|)
  kInverse,      ///< 1/|x|
};

/// Free-space convolution with radial kernels on a grid, by zero padding to
/// 2n x 2n. Kernels are sampled at lattice offsets with the singular sample
/// replaced by the kernel's mean over one cell. Kernel spectra are built on
/// first use under a once-flag, so a plan may be shared between threads.
class LogKernelPlan {
 public:
  explicit LogKernelPlan(const Grid2D& g);

  const Grid2D& grid() const { return grid_; }
  int padded() const { return 2 * grid_.n; }

  /// Kernel sample at lattice offset (di, dj) * h.
  double kernel_sample(KernelKind kind, int di, int dj) const;
  /// Mean of the kernel over the cell [-h/2, h/2]^2.
  double singular_cell_mean(KernelKind kind) const;

  /// h^2 sum_y K(x - y) w(y) at every grid sample x.
  RealSamples convolve(KernelKind kind, std::span<const double> w) const;

 private:
  const ComplexSamples& spectrum(KernelKind kind) const;

  Grid2D grid_;
  RealFft2D padded_fft_;
  mutable std::array<std::once_flag, 4> built_;
  mutable std::array<ComplexSamples, 4> spectra_;
};

/// Mean of the kernel over the square [-h/2, h/2]^2, by exact radial
/// antiderivatives and Gauss-Legendre quadrature in the polar angle.
double cell_mean(KernelKind kind, double h);

/// Phi_w(x) = int ln|x - y| w(y) dy.
RealSamples log_potential(const LogKernelPlan& plan, std::span<const double> w);

/// int int ln|x - y| f(x) g(y).
double b0(const LogKernelPlan& plan, std::span<const double> f, std::span<const double> g);
/// int int ln(1 + |x - y|) f(x) g(y).
double b1(const LogKernelPlan& plan, std::span<const double> f, std::span<const double> g);
/// int int ln(1 + 1/|x - y|) f(x) g(y).
double b2(const LogKernelPlan& plan, std::span<const double> f, std::span<const double> g);
/// int int f(x) g(y) / |x - y|.
double inverse_distance_form(const LogKernelPlan& plan, std::span<const double> f,
                             std::span<const double> g);

/// (int ln(1 + |x|) f^2)^{1/2}.
double star_norm(const Grid2D& g, std::span<const double> f);

/// max_x (|Phi_w(x)| - a ln(1 + |x|)) with a = int w: the run constant in the
/// bound |Phi_w(x)| <= a ln(1 + |x|) + C.
double log_potential_bound_constant(const LogKernelPlan& plan, std::span<const double> w,
                                    std::span<const double> phi);

}  // namespace psn

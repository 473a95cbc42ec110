#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "psn/fft.hpp"

namespace psn {

using RealSamples = std::vector<double>;
using ComplexSamples = std::vector<cplx>;

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Uniform n x n sampling of the square [-L, L)^2. Samples are stored row-major
/// with the first index along x1: value(i, j) lives at i * n + j and sits at
/// (x(i), x(j)).
struct Grid2D {
  int n = 0;
  double half_width = 0.0;
  double spacing = 0.0;
  /// Per-axis wavenumbers pi * j_signed / L; the Nyquist entry is -pi n / (2L).
  std::vector<double> freq;
  /// Wavenumbers used for odd derivatives: as freq with the Nyquist entry zeroed.
  std::vector<double> deriv_freq;
  Fft2D fft{8, 8};

  double x(int i) const { return -half_width + i * spacing; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  double cell_area() const { return spacing * spacing; }
  bool same_as(const Grid2D& other) const {
    return n == other.n && half_width == other.half_width;
  }
};

/// Throws std::invalid_argument unless n is a power of two >= 8 and L > 0.
Grid2D make_grid(int n, double half_width);

/// Uniform quadrature h^2 * sum(values).
double integrate(const Grid2D& g, std::span<const double> values);

/// Mass computed from the spectrum, (h^2 / n^2) * sum |u_hat|^2.
double frequency_domain_mass(const Grid2D& g, std::span<const cplx> values);

/// Largest modulus on the outermost ring of samples divided by the peak modulus.
double boundary_decay_ratio(const Grid2D& g, std::span<const cplx> values);

/// Fraction of the mass in the outer 10% square annulus max(|x1|,|x2|) > 0.9 L.
double boundary_mass_fraction(const Grid2D& g, std::span<const cplx> values);

/// Spectral partial derivatives (d/dx1, d/dx2) by multiplication with i k.
/// Warns when the field has not decayed below 1e-12 of its peak at the edge.
std::array<ComplexSamples, 2> spectral_gradient(const Grid2D& g,
                                                std::span<const cplx> values);

/// Spectral Laplacian, the divergence of spectral_gradient.
ComplexSamples spectral_laplacian(const Grid2D& g, std::span<const cplx> values);

/// Gradient of |u| as Re(conj(u) grad u) / |u| where |u| > 1e-12 max|u|, 0 elsewhere.
std::array<RealSamples, 2> modulus_gradient(const Grid2D& g,
                                            std::span<const cplx> values,
                                            const std::array<ComplexSamples, 2>& grad);

enum class OutsidePolicy { kError, kZero };

/// Band-limited (trigonometric) interpolation of samples onto the tensor grid
/// coords1 x coords2. Targets outside [-L, L) either throw std::domain_error
/// or evaluate to zero, depending on the policy.
ComplexSamples fourier_resample(const Grid2D& g, std::span<const cplx> values,
                                std::span<const double> coords1,
                                std::span<const double> coords2,
                                OutsidePolicy outside = OutsidePolicy::kError);

}  // namespace psn

#include "psn/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "psn/log.hpp"

namespace psn {

Grid2D make_grid(int n, double half_width) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("n must be a power of two (and at least 8)");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("half_width must be positive");
  Grid2D g;
  g.n = n;
  g.half_width = half_width;
  g.spacing = 2.0 * half_width / n;
  g.freq.resize(n);
  g.deriv_freq.resize(n);
  for (int j = 0; j < n; ++j) {
    const int js = j < n / 2 ? j : j - n;
    g.freq[j] = std::numbers::pi * js / half_width;
    g.deriv_freq[j] = (2 * j == n) ? 0.0 : g.freq[j];
  }
  g.fft = Fft2D(n, n);
  return g;
}

namespace {
void check_shape(const Grid2D& g, std::size_t size) {
  if (size != g.size()) {
    std::ostringstream os;
    os << "shape mismatch: expected " << g.size() << " samples, got " << size;
    throw std::invalid_argument(os.str());
  }
}
}  // namespace

double integrate(const Grid2D& g, std::span<const double> values) {
  check_shape(g, values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  return g.cell_area() * sum;
}

double frequency_domain_mass(const Grid2D& g, std::span<const cplx> values) {
  check_shape(g, values.size());
  ComplexSamples hat(values.begin(), values.end());
  g.fft.forward(hat);
  double sum = 0.0;
  for (const auto& c : hat) sum += std::norm(c);
  return g.cell_area() * sum / static_cast<double>(g.size());
}

double boundary_decay_ratio(const Grid2D& g, std::span<const cplx> values) {
  check_shape(g, values.size());
  double peak = 0.0;
  for (const auto& c : values) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  const int n = g.n;
  for (int k = 0; k < n; ++k) {
    edge = std::max({edge, std::abs(values[k]), std::abs(values[(n - 1) * n + k]),
                     std::abs(values[k * n]), std::abs(values[k * n + n - 1])});
  }
  return edge / peak;
}

double boundary_mass_fraction(const Grid2D& g, std::span<const cplx> values) {
  check_shape(g, values.size());
  const double cut = 0.9 * g.half_width;
  double total = 0.0;
  double outer = 0.0;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      const double m = std::norm(values[i * g.n + j]);
      total += m;
      if (std::max(std::abs(g.x(i)), std::abs(g.x(j))) > cut) outer += m;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

std::array<ComplexSamples, 2> spectral_gradient(const Grid2D& g,
                                                std::span<const cplx> values) {
  check_shape(g, values.size());
  if (boundary_decay_ratio(g, values) > 1e-12)
    warn_once("spectral_gradient: field has not decayed to 1e-12 of its peak at the domain edge");
  const int n = g.n;
  ComplexSamples hat(values.begin(), values.end());
  g.fft.forward(hat);
  std::array<ComplexSamples, 2> out{ComplexSamples(g.size()), ComplexSamples(g.size())};
  const cplx I(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      out[0][idx] = I * g.deriv_freq[i] * hat[idx];
      out[1][idx] = I * g.deriv_freq[j] * hat[idx];
    }
  }
  g.fft.inverse(out[0]);
  g.fft.inverse(out[1]);
  return out;
}

ComplexSamples spectral_laplacian(const Grid2D& g, std::span<const cplx> values) {
  check_shape(g, values.size());
  const int n = g.n;
  ComplexSamples hat(values.begin(), values.end());
  g.fft.forward(hat);
  for (int i = 0; i < n; ++i) {
    const double k1 = g.deriv_freq[i];
    for (int j = 0; j < n; ++j) {
      const double k2 = g.deriv_freq[j];
      hat[static_cast<std::size_t>(i) * n + j] *= -(k1 * k1 + k2 * k2);
    }
  }
  g.fft.inverse(hat);
  return hat;
}

std::array<RealSamples, 2> modulus_gradient(const Grid2D& g,
                                            std::span<const cplx> values,
                                            const std::array<ComplexSamples, 2>& grad) {
  check_shape(g, values.size());
  double peak = 0.0;
  for (const auto& c : values) peak = std::max(peak, std::abs(c));
  const double guard = 1e-12 * peak;
  std::array<RealSamples, 2> out{RealSamples(g.size(), 0.0), RealSamples(g.size(), 0.0)};
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double mod = std::abs(values[k]);
    if (mod <= guard) continue;
    out[0][k] = (std::conj(values[k]) * grad[0][k]).real() / mod;
    out[1][k] = (std::conj(values[k]) * grad[1][k]).real() / mod;
  }
  return out;
}

namespace {

// Rows of the trigonometric interpolation matrix: value(t) = sum_k c_k e^{i k (t + L)},
// with the Nyquist coefficient split symmetrically (cos term) so real data
// stays real.
std::vector<cplx> interpolation_matrix(const Grid2D& g, std::span<const double> coords,
                                       OutsidePolicy outside, std::vector<bool>& inside) {
  const int n = g.n;
  const double L = g.half_width;
  std::vector<cplx> m(coords.size() * n);
  inside.assign(coords.size(), true);
  for (std::size_t t = 0; t < coords.size(); ++t) {
    const double c = coords[t];
    if (c < -L - 1e-12 * L || c > L - g.spacing + 1e-12 * L) {
      // The periodic interpolant is meaningful up to the last sample; beyond
      // it wraps around.
      if (outside == OutsidePolicy::kError) {
        std::ostringstream os;
        os << "interpolation target " << c << " lies outside the source domain [" << -L
           << ", " << L - g.spacing << "]";
        throw std::domain_error(os.str());
      }
      inside[t] = false;
      continue;
    }
    const double s = c + L;
    for (int k = 0; k < n; ++k) {
      if (k == n / 2) {
        m[t * n + k] = std::cos(g.freq[k] * s);
      } else {
        m[t * n + k] = std::polar(1.0, g.freq[k] * s);
      }
    }
  }
  return m;
}

}  // namespace

ComplexSamples fourier_resample(const Grid2D& g, std::span<const cplx> values,
                                std::span<const double> coords1,
                                std::span<const double> coords2, OutsidePolicy outside) {
  check_shape(g, values.size());
  const int n = g.n;
  ComplexSamples coef(values.begin(), values.end());
  g.fft.forward(coef);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : coef) c *= scale;

  std::vector<bool> in1, in2;
  const auto m1 = interpolation_matrix(g, coords1, outside, in1);
  const auto m2 = interpolation_matrix(g, coords2, outside, in2);
  const std::size_t t1n = coords1.size();
  const std::size_t t2n = coords2.size();

  // tmp[k1][t2] = sum_k2 coef[k1][k2] * m2[t2][k2]
  ComplexSamples tmp(static_cast<std::size_t>(n) * t2n, cplx(0.0));
  for (int k1 = 0; k1 < n; ++k1) {
    const cplx* row = &coef[static_cast<std::size_t>(k1) * n];
    for (std::size_t t2 = 0; t2 < t2n; ++t2) {
      if (!in2[t2]) continue;
      const cplx* mr = &m2[t2 * n];
      cplx acc(0.0);
      for (int k2 = 0; k2 < n; ++k2) acc += row[k2] * mr[k2];
      tmp[static_cast<std::size_t>(k1) * t2n + t2] = acc;
    }
  }
  ComplexSamples out(t1n * t2n, cplx(0.0));
  for (std::size_t t1 = 0; t1 < t1n; ++t1) {
    if (!in1[t1]) continue;
    const cplx* mr = &m1[t1 * n];
    cplx* orow = &out[t1 * t2n];
    for (int k1 = 0; k1 < n; ++k1) {
      const cplx w = mr[k1];
      const cplx* trow = &tmp[static_cast<std::size_t>(k1) * t2n];
      for (std::size_t t2 = 0; t2 < t2n; ++t2) orow[t2] += w * trow[t2];
    }
  }
  return out;
}

}  // namespace psn

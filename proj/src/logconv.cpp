#include "psn/logconv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace psn {

namespace {

double kernel_at(KernelKind kind, double r) {
  switch (kind) {
    case KernelKind::kLog:
      return std::log(r);
    case KernelKind::kLogGrowth:
      return std::log1p(r);
    case KernelKind::kLogSingular:
      return std::log1p(1.0 / r);
    case KernelKind::kInverse:
      return 1.0 / r;
  }
  return 0.0;
}

// int_0^R K(r) r dr.
double radial_antiderivative(KernelKind kind, double R) {
  const double r2 = R * R;
  const double growth = 0.5 * (r2 - 1.0) * std::log1p(R) - 0.25 * r2 + 0.5 * R;
  const double log_part = 0.5 * r2 * std::log(R) - 0.25 * r2;
  switch (kind) {
    case KernelKind::kLog:
      return log_part;
    case KernelKind::kLogGrowth:
      return growth;
    case KernelKind::kLogSingular:
      return growth - log_part;
    case KernelKind::kInverse:
      return R;
  }
  return 0.0;
}

// 20-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr std::array<double, 10> kGlNodes = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr std::array<double, 10> kGlWeights = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

void check_same(const LogKernelPlan& plan, std::span<const double> w) {
  if (w.size() != plan.grid().size()) {
    std::ostringstream os;
    os << "plan/grid mismatch: plan expects " << plan.grid().size() << " samples, got "
       << w.size();
    throw std::invalid_argument(os.str());
  }
}

double pair_form(const LogKernelPlan& plan, KernelKind kind, std::span<const double> f,
                 std::span<const double> g) {
  check_same(plan, f);
  const RealSamples phi = plan.convolve(kind, g);
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * phi[k];
  return plan.grid().cell_area() * s;
}

}  // namespace

double cell_mean(KernelKind kind, double h) {
  // The square splits into 8 congruent triangles 0 <= theta <= pi/4,
  // 0 <= r <= (h/2)/cos(theta). The integrand in theta is smooth, so a
  // composite Gauss-Legendre rule converges to machine precision quickly.
  const double quarter = std::numbers::pi / 4.0;
  const int panels = 8;
  const double width = quarter / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      for (int sign : {-1, 1}) {
        const double theta = mid + sign * 0.5 * width * kGlNodes[k];
        s += 0.5 * width * kGlWeights[k] *
             radial_antiderivative(kind, 0.5 * h / std::cos(theta));
      }
    }
  }
  return 8.0 * s / (h * h);
}

LogKernelPlan::LogKernelPlan(const Grid2D& g) : grid_(g), padded_fft_(2 * g.n, 2 * g.n) {}

double LogKernelPlan::singular_cell_mean(KernelKind kind) const {
  return cell_mean(kind, grid_.spacing);
}

double LogKernelPlan::kernel_sample(KernelKind kind, int di, int dj) const {
  if (di == 0 && dj == 0) return singular_cell_mean(kind);
  return kernel_at(kind, grid_.spacing * std::hypot(static_cast<double>(di),
                                                     static_cast<double>(dj)));
}

const ComplexSamples& LogKernelPlan::spectrum(KernelKind kind) const {
  const auto idx = static_cast<std::size_t>(kind);
  std::call_once(built_[idx], [&] {
    const int m = padded();
    const int n = grid_.n;
    std::vector<double> k(static_cast<std::size_t>(m) * m);
    // Offsets wrap: index t < n is offset t, index t >= n is offset t - m.
    // The offset -n never pairs two samples of an n-point grid, so its value
    // is irrelevant; it is filled for symmetry.
    for (int i = 0; i < m; ++i) {
      const int di = i < n ? i : i - m;
      for (int j = 0; j < m; ++j) {
        const int dj = j < n ? j : j - m;
        k[static_cast<std::size_t>(i) * m + j] = kernel_sample(kind, di, dj);
      }
    }
    ComplexSamples khat(padded_fft_.spectrum_size());
    padded_fft_.forward(k, khat);
    spectra_[idx] = std::move(khat);
  });
  return spectra_[idx];
}

RealSamples LogKernelPlan::convolve(KernelKind kind, std::span<const double> w) const {
  check_same(*this, w);
  const int n = grid_.n;
  const int m = padded();
  const ComplexSamples& khat = spectrum(kind);
  std::vector<double> buf(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < n; ++i)
    std::copy_n(&w[static_cast<std::size_t>(i) * n], n, &buf[static_cast<std::size_t>(i) * m]);
  ComplexSamples hat(padded_fft_.spectrum_size());
  padded_fft_.forward(buf, hat);
  for (std::size_t k = 0; k < hat.size(); ++k) hat[k] *= khat[k];
  padded_fft_.inverse(hat, buf);
  RealSamples out(grid_.size());
  const double area = grid_.cell_area();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<std::size_t>(i) * n + j] = area * buf[static_cast<std::size_t>(i) * m + j];
  return out;
}

RealSamples log_potential(const LogKernelPlan& plan, std::span<const double> w) {
  return plan.convolve(KernelKind::kLog, w);
}

double b0(const LogKernelPlan& plan, std::span<const double> f, std::span<const double> g) {
  return pair_form(plan, KernelKind::kLog, f, g);
}

double b1(const LogKernelPlan& plan, std::span<const double> f, std::span<const double> g) {
  return pair_form(plan, KernelKind::kLogGrowth, f, g);
}

double b2(const LogKernelPlan& plan, std::span<const double> f, std::span<const double> g) {
  return pair_form(plan, KernelKind::kLogSingular, f, g);
}

double inverse_distance_form(const LogKernelPlan& plan, std::span<const double> f,
                             std::span<const double> g) {
  return pair_form(plan, KernelKind::kInverse, f, g);
}

double star_norm(const Grid2D& g, std::span<const double> f) {
  if (f.size() != g.size()) throw std::invalid_argument("star_norm: shape mismatch");
  double s = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const double v = f[static_cast<std::size_t>(i) * g.n + j];
      s += std::log1p(std::hypot(g.x(i), g.x(j))) * v * v;
    }
  return std::sqrt(g.cell_area() * s);
}

double log_potential_bound_constant(const LogKernelPlan& plan, std::span<const double> w,
                                    std::span<const double> phi) {
  check_same(plan, w);
  check_same(plan, phi);
  const Grid2D& g = plan.grid();
  double a = 0.0;
  for (double v : w) a += v;
  a *= g.cell_area();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * g.n + j;
      worst = std::max(worst, std::abs(phi[k]) - a * std::log1p(std::hypot(g.x(i), g.x(j))));
    }
  return worst;
}

}  // namespace psn

#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "psn/grid.hpp"
#include "psn/groundstate.hpp"

namespace psn::test {

/// Shared ground-state profile (tol 1e-10, r_max 20); computed once.
inline const RadialProfile& profile() {
  static const RadialProfile p = solve_radial_ground_state(1e-10, 20.0);
  return p;
}

/// Independent 1-D oracle: 2 pi int_0^rmax f(r) r dr by composite Simpson.
inline double radial_quadrature(const std::function<double(double)>& f, double rmax = 40.0,
                                int intervals = 200000) {
  const double h = rmax / intervals;
  double s = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double r = i * h;
    const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += c * f(r) * r;
  }
  return 2.0 * std::numbers::pi * s * h / 3.0;
}

template <typename F>
ComplexSamples tabulate(const Grid2D& g, F&& f) {
  ComplexSamples out(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) out[static_cast<std::size_t>(i) * g.n + j] = f(g.x(i), g.x(j));
  return out;
}

template <typename F>
RealSamples tabulate_real(const Grid2D& g, F&& f) {
  RealSamples out(g.size());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) out[static_cast<std::size_t>(i) * g.n + j] = f(g.x(i), g.x(j));
  return out;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Frozen values from tests/oracles/radial_oracle.py (adaptive DOP853 shooting
// plus radial quadrature, independent of the library's RK4 integrator).
inline constexpr double kOracleQ0 = 2.206200864668805;
inline constexpr double kOracleAStar = 11.700896522916006;
inline constexpr double kOracleMoment2 = 13.894861532855218;
inline constexpr double kOracleB0QQ = 11.353043834471974;

}  // namespace psn::test

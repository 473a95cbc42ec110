#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psn/energy.hpp"
#include "psn/groundstate.hpp"

namespace psn {

enum class InitKind { kGaussian, kScaledSoliton, kFile, kRandomPhase };

struct InitSpec {
  InitKind kind = InitKind::kGaussian;
  double width = 1.0;
  /// Scale of the soliton start; 0 selects sqrt(a a* / (4 (a* - a))).
  double tau = 0.0;
  std::string path;
  /// For kRandomPhase: size of the smooth random phase and modulus modulation
  /// applied to a Gaussian (tau == 0) or soliton (tau > 0) base state.
  double amplitude = 0.5;
  std::uint64_t seed = 0;
};

struct MinimizeConfig {
  double dt = 1.0;
  double dt_min = 1e-8;
  double dt_max = 4.0;
  double residual_tol = 1e-6;
  int max_iters = 20000;
  double backtrack = 0.5;
  double growth = 1.1;
  /// Stop when the residual has not reached a new low for this many iterations.
  int stagnation_window = 500;
  /// Polak-Ribiere conjugation of successive preconditioned gradients.
  bool conjugate = true;
  /// Record every k-th energy in the report history.
  int history_stride = 10;
  /// Energies below this signal collapse.
  double collapse_energy = -1e6;
  Interactions interactions;
  InitSpec init;
};

enum class MinimizeStatus { kConverged, kMaxIters, kStagnated, kCollapse };
const char* to_string(MinimizeStatus s);

struct MinimizeReport {
  double a = 0.0;
  double omega = 0.0;
  double e_a = 0.0;
  double mu_a = 0.0;
  double mu_rayleigh = 0.0;
  int iters = 0;
  double residual = 0.0;
  double epsilon_a = 0.0;
  Point x_a;
  double boundary_mass_fraction = 0.0;
  std::vector<double> energy_history;
  EnergyBreakdown breakdown;
  MinimizeStatus status = MinimizeStatus::kMaxIters;
  bool converged = false;
  bool supercritical = false;
  double runtime_seconds = 0.0;
};

struct MinimizeResult {
  ComplexField2D field;
  MinimizeReport report;
};

/// Initial state of mass exactly a. Throws std::invalid_argument for an
/// unusable initializer (including a file on a different grid).
ComplexField2D init_state(const InitSpec& init, const RadialProfile& p, const Grid2D& g, double a);

/// Constrained descent from an explicit start (rescaled to mass a).
MinimizeResult minimize_from(const MinimizeConfig& cfg, const EnergyModel& model, double a,
                             const ComplexField2D& start, double a_star);

/// Builds the start from cfg.init and runs minimize_from.
MinimizeResult minimize(const MinimizeConfig& cfg, const PotentialSpec& pot, double a,
                        const LogKernelPlan& plan, const RadialProfile& p);

/// Global maximum of |u|: first sample (row-major) within 1e-12 relative of
/// the peak, refined by a separable quadratic fit over its 3x3 neighbourhood.
Point refined_argmax(const ComplexField2D& u);

/// Multiplies by the constant phase that makes int |u| u real and positive.
ComplexField2D align_global_phase(const ComplexField2D& u);

}  // namespace psn

#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "psn/field.hpp"
#include "psn/groundstate.hpp"
#include "psn/logconv.hpp"
#include "psn/minimize.hpp"

namespace psn {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// int int ln|x - y| Q^2(x) Q^2(y), by the radial form of the logarithmic potential.
double profile_log_energy(const RadialProfile& p);

/// Predicted limit of e(a) - (a^2/4) ln[4 (a* - a)]:
/// a*^2/4 - (a*^2/2) ln a* + (1/2) int int ln|x - y| Q^2 Q^2.
double energy_constant(const RadialProfile& p);

/// (2/a*) ((a* - a)/a*)^{1/2}.
double predicted_blowup_scale(double a, double a_star);

struct BlowupOptions {
  /// Points per axis of the rescaled frame; 0 uses the source grid's n.
  int frame_n = 0;
  /// Half-width of the rescaled frame; 0 picks min(12 sqrt(a*), the largest
  /// frame that stays inside the source domain).
  double frame_half_width = 0.0;
};

struct BlowupReport {
  double a = 0.0;
  double epsilon_a = 0.0;
  Point x_a;
  double theta_a = 0.0;
  double l2_distance = 0.0;
  double l2_relative = 0.0;
  double linf_distance = 0.0;
  double linf_relative = 0.0;
  /// |int Q_ref Im(w_a)| / (|Q_ref|_2 |w_a|_2).
  double orthogonality = 0.0;
  double mu_eps2 = kNaN;
  double v_omega_at_xa = 0.0;
  /// int |grad |w_a||^2, 1 up to interpolation error.
  double gradient_normalization = 0.0;
  double decay_constant = kNaN;
  /// Outer radius actually tested (2R when the frame allows it).
  double decay_checked_to = 0.0;
  bool decay_ok = false;
  double frame_half_width = 0.0;
  ComplexField2D rescaled;
};

/// Rescaled, gauge-fixed and phase-aligned profile of a minimizer, and its
/// distance to Q_ref(x) = Q(x / sqrt(a*)) / sqrt(a*). Throws std::domain_error
/// when the requested frame leaves the source domain.
BlowupReport blowup_diagnostics(const ComplexField2D& u, double a, const RadialProfile& p,
                                const PotentialSpec& pot, double mu = kNaN,
                                const BlowupOptions& opts = {});

struct SweepRecord {
  double a = 0.0;
  double e_a = 0.0;
  double epsilon_a = 0.0;
  double mu_a = 0.0;
  double mu_eps2 = 0.0;
  Point x_a;
  double l2_distance = kNaN;
  double v_omega_xa = 0.0;
  double residual = 0.0;
  int iters = 0;
  MinimizeStatus status = MinimizeStatus::kMaxIters;
  bool converged = false;
  double runtime_seconds = 0.0;
  /// Half-width of the domain the point was solved on.
  double half_width = 0.0;
};

struct SweepOptions {
  /// Warm-start each point from the previous minimizer, rescaled by the
  /// predicted ratio of blow-up scales. Forces sequential execution.
  bool continuation = false;
  int jobs = 1;
  /// When positive, each point is solved on its own domain of half-width
  /// adaptive_width * sqrt(a*) * predicted_blowup_scale(a), with the plan's n.
  double adaptive_width = 0.0;
  BlowupOptions blowup;
};

/// Domain half-width used for the point a.
double sweep_half_width(double a, const RadialProfile& p, const LogKernelPlan& plan,
                        const SweepOptions& opts);

/// One record per a, sorted by a. Unconverged runs are kept and flagged.
std::vector<SweepRecord> sweep(std::vector<double> a_values, const PotentialSpec& pot,
                               const MinimizeConfig& cfg, const LogKernelPlan& plan,
                               const RadialProfile& p, const SweepOptions& opts = {});

struct EnergyFit {
  double constant_estimate = 0.0;
  /// c(last) - c(first) over the usable records.
  double drift = 0.0;
  std::size_t used = 0;
};

/// c(a) = e(a) - (a^2/4) ln[4 (a* - a)] over converged records with a >= 0.9 a*.
/// Throws std::invalid_argument with fewer than 3 usable records.
EnergyFit fit_energy_asymptotics(const std::vector<SweepRecord>& records, double a_star);

/// Least-squares slope through the origin of epsilon_a against
/// ((a* - a)/a*)^{1/2} over the converged records.
double fit_epsilon_scaling(const std::vector<SweepRecord>& records, double a_star);

/// Right side of the trial-state bound with the Q-integrals evaluated radially.
double trial_bound_closed_form(double a, double tau, const RadialProfile& p,
                               const PotentialSpec& pot);

/// Leading terms of the bound at the optimal tau:
/// energy_constant + (a^2/4) ln[4 (a* - a)].
double trial_bound_expansion(double a, const RadialProfile& p);

/// sqrt(a a* / (4 (a* - a))).
double optimal_trial_scale(double a, double a_star);

struct TrialBound {
  double tau = 0.0;
  double closed_form = 0.0;
  double gridded = 0.0;
  double relative_gap = 0.0;
  bool agrees = false;
};

/// Closed form and the energy of the gridded cutoff trial state centred at the
/// origin. agrees is set when the relative gap is at most tol.
TrialBound trial_upper_bound(double a, double tau, const RadialProfile& p,
                             const PotentialSpec& pot, const LogKernelPlan& plan,
                             double tol = 1e-2);

struct ProbePoint {
  double tau = 0.0;
  double energy = kNaN;
  bool evaluated = false;
};

/// Energies of the cutoff trial family along tau_values. The centre is the
/// origin, or (tau sqrt(2 tau), tau sqrt(2 tau)) above the critical rotation.
/// Scales whose support leaves the domain or that are under-resolved are
/// returned with evaluated = false.
std::vector<ProbePoint> nonexistence_probe(double a, const PotentialSpec& pot,
                                           const std::vector<double>& tau_values,
                                           const RadialProfile& p, const LogKernelPlan& plan,
                                           Interactions interactions = {});

}  // namespace psn

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "psn/asymptotics.hpp"
#include "psn/energy.hpp"
#include "psn/groundstate.hpp"
#include "psn/minimize.hpp"

namespace psn {

/// %.17g; non-finite values print as nan, inf, -inf.
std::string format_double(double x);

/// JSON text with every floating-point number written to 17 significant
/// digits (non-finite numbers become null), two-space indentation.
std::string dump_json(const nlohmann::json& j);

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const MinimizeReport& r);
nlohmann::json to_json(const BlowupReport& b);
nlohmann::json to_json(const TrialBound& b);
nlohmann::json ground_state_summary(const RadialProfile& p);

inline constexpr const char* kSweepCsvHeader =
    "a,e_a,epsilon_a,mu_a,mu_eps2,x_a_1,x_a_2,l2_distance,v_omega_xa,converged";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
/// Throws std::runtime_error on a malformed header or row.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

struct FitVerdict {
  std::string law;
  double estimate = 0.0;
  double target = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

/// Verdicts for the energy expansion (constant and drift), the blow-up rate
/// and the multiplier law, each at 10% relative tolerance.
std::vector<FitVerdict> fit_verdicts(const std::vector<SweepRecord>& records,
                                     const RadialProfile& p);
nlohmann::json to_json(const std::vector<FitVerdict>& v);

}  // namespace psn

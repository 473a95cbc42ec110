#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psn/asymptotics.hpp"
#include "psn/field.hpp"
#include "psn/minimize.hpp"

namespace psn {

/// Invalid or unreadable configuration. The command line maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int n = 256;
  double half_width = 16.0;
};

struct SweepConfig {
  std::vector<double> a_values;
  std::vector<double> a_fractions;
  bool continuation = false;
  double adaptive_width = 0.0;
  int jobs = 1;
};

struct OutputConfig {
  std::string field;
  std::string report;
  std::string csv;
};

struct RunConfig {
  GridConfig grid;
  PotentialSpec potential = harmonic_potential(2.0, 0.0);
  MinimizeConfig solver;
  /// Mass for minimize / energy / trial: a, or a_fraction * a*.
  std::optional<double> a;
  std::optional<double> a_fraction;
  SweepConfig sweep;
  /// Scales for the nonexistence probe of the trial subcommand.
  std::vector<double> probe_taus;
  OutputConfig output;
  std::uint64_t seed = 0;
};

/// Parses a JSON document. Unknown keys and out-of-range values throw ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Masses of the sweep, resolved against a* and sorted.
std::vector<double> sweep_masses(const RunConfig& cfg, double a_star);

/// Mass for single-point commands; throws ConfigError when none is given.
double single_mass(const RunConfig& cfg, double a_star);

/// Throws ConfigError unless the parent directory of path exists.
void check_writable(const std::string& path);

}  // namespace psn

#pragma once

#include <string_view>

namespace psn {

// Diagnostics go to stderr; the CLI's --quiet flag silences warnings.
void set_quiet(bool quiet);
bool quiet();
void warn(std::string_view message);
/// Emits a given message at most once per process.
void warn_once(std::string_view message);
void info(std::string_view message);

}  // namespace psn

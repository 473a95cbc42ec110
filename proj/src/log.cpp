#include "psn/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>
#include <string>

namespace psn {
namespace {
std::atomic<bool> g_quiet{false};
std::mutex g_stream_mutex;
std::set<std::string, std::less<>> g_seen;
}  // namespace

void set_quiet(bool q) { g_quiet = q; }
bool quiet() { return g_quiet; }

void warn(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard<std::mutex> lock(g_stream_mutex);
  std::cerr << "[psn] warning: " << message << '\n';
}

void warn_once(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard<std::mutex> lock(g_stream_mutex);
  if (g_seen.find(message) != g_seen.end()) return;
  g_seen.emplace(message);
  std::cerr << "[psn] warning: " << message << '\n';
}

void info(std::string_view message) {
  if (g_quiet) return;
  std::lock_guard<std::mutex> lock(g_stream_mutex);
  std::cerr << "[psn] " << message << '\n';
}

}  // namespace psn

#include "scgg/log.hpp"

#include <cstdlib>
#include <iostream>

namespace scgg {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SCGG_LOG");
    if (env == nullptr) return LogLevel::info;
    const std::string v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[debug] " << msg << "\n";
}

void log_warn(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[warn] " << msg << "\n";
}

}  // namespace scgg

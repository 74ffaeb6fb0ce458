#include "planmerge/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace planmerge {

LogLevel parse_log_level(std::string_view text) {
  if (text == "protocol") return LogLevel::kProtocol;
  if (text == "debug") return LogLevel::kDebug;
  return LogLevel::kOff;
}

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PLANMERGE_LOG");
    return env ? parse_log_level(env) : LogLevel::kOff;
  }();
  return level;
}

void log_line(std::string_view line) {
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << line << '\n';
}

}  // namespace planmerge

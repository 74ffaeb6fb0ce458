#pragma once

#include <string_view>

namespace planmerge {

enum class LogLevel { kOff = 0, kProtocol = 1, kDebug = 2 };

/// Level from the PLANMERGE_LOG environment variable (off, protocol, debug);
/// read once. Unknown values mean off.
LogLevel log_level();
LogLevel parse_log_level(std::string_view text);

/// Writes one line to stderr. Thread-safe.
void log_line(std::string_view line);

}  // namespace planmerge

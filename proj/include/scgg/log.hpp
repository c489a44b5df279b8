#pragma once

#include <string>

namespace scgg {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

// Level comes from the SCGG_LOG environment variable (quiet|info|debug),
// defaulting to info. Messages go to stderr; warnings never affect exit codes.
LogLevel log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);
void log_warn(const std::string& msg);

}  // namespace scgg

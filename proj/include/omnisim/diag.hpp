#pragma once

#include <string>

namespace omnisim {

// Stderr diagnostics gated by the OMNISIM_LOG_LEVEL environment variable
// (debug, info, warn, error, off). Default: warn.
enum class LogLevel { kDebug = 0, kInfo, kWarn, kError, kOff };

LogLevel log_level();
void diag(LogLevel level, const std::string& message);

}  // namespace omnisim

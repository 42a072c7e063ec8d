#include "omnisim/diag.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace omnisim {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("OMNISIM_LOG_LEVEL");
    if (env == nullptr) return LogLevel::kWarn;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "off") == 0) return LogLevel::kOff;
    return LogLevel::kWarn;
  }();
  return level;
}

void diag(LogLevel level, const std::string& message) {
  if (level < log_level()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::fprintf(stderr, "[omnisim][%s] %s\n",
               names[static_cast<int>(level)], message.c_str());
}

}  // namespace omnisim

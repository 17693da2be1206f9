#include "povar/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace povar {

LogLevel log_threshold() {
  static LogLevel cached = [] {
    const char* env = std::getenv("POVAR_LOG");
    if (env) {
      if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
      if (std::strcmp(env, "info") == 0) return LogLevel::info;
      if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
      if (std::strcmp(env, "error") == 0) return LogLevel::error;
    }
    return LogLevel::warn;
  }();
  return cached;
}

void log_line(LogLevel level, const std::string& msg) {
  if (level < log_threshold()) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::string out = "[povar][";
  out += names[static_cast<int>(level)];
  out += "] ";
  out += msg;
  out += '\n';
  std::fwrite(out.data(), 1, out.size(), stderr);
}

}  // namespace povar

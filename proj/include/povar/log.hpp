#pragma once
// Leveled stderr logging; threshold from POVAR_LOG (debug|info|warn|error),
// default warn.

#include <string>

namespace povar {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

LogLevel log_threshold();
void log_line(LogLevel level, const std::string& msg);

}  // namespace povar

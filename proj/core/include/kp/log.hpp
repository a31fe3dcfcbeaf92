#pragma once

#include <sstream>
#include <string>

namespace kp::log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Current level, read once from the KP_LOG environment variable
// (error|info|debug, default error).
Level level();

void emit(Level lvl, const std::string& msg);

template <typename... Args>
void info(const Args&... args) {
  if (level() < Level::kInfo) return;
  std::ostringstream os;
  (os << ... << args);
  emit(Level::kInfo, os.str());
}

template <typename... Args>
void debug(const Args&... args) {
  if (level() < Level::kDebug) return;
  std::ostringstream os;
  (os << ... << args);
  emit(Level::kDebug, os.str());
}

template <typename... Args>
void error(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  emit(Level::kError, os.str());
}

}  // namespace kp::log

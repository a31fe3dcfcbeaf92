#include "kp/log.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace kp::log {

namespace {

Level parse_env() {
  const char* v = std::getenv("KP_LOG");
  if (v == nullptr) return Level::kError;
  if (std::strcmp(v, "debug") == 0) return Level::kDebug;
  if (std::strcmp(v, "info") == 0) return Level::kInfo;
  return Level::kError;
}

std::mutex g_mutex;

}  // namespace

Level level() {
  static const Level lvl = parse_env();
  return lvl;
}

void emit(Level lvl, const std::string& msg) {
  static const char* names[] = {"error", "info", "debug"};
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[kp:" << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

}  // namespace kp::log

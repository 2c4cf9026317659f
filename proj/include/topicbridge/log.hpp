#pragma once

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace topicbridge::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Verbosity from TOPICBRIDGE_LOG (error|warn|info|debug), default warn.
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("TOPICBRIDGE_LOG");
    std::string_view v = env ? env : "";
    if (v == "error") return Level::error;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
  }();
  return level;
}

inline void emit(Level level, std::string_view tag, std::string_view msg) {
  if (level > threshold()) return;
  std::cerr << "[" << tag << "] " << msg << "\n";
}

inline void error(std::string_view msg) { emit(Level::error, "error", msg); }
inline void warn(std::string_view msg) { emit(Level::warn, "warn", msg); }
inline void info(std::string_view msg) { emit(Level::info, "info", msg); }
inline void debug(std::string_view msg) { emit(Level::debug, "debug", msg); }

}  // namespace topicbridge::log

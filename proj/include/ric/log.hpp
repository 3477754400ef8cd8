#pragma once

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string_view>

namespace ric::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Threshold read once from RIC_LOG (error|warn|info|debug); default warn.
inline Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("RIC_LOG");
    if (env == nullptr) return Level::Warn;
    const std::string_view v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

template <class... Args>
void write(Level level, std::string_view tag, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(threshold())) return;
  std::ostringstream line;
  line << "[ric " << tag << "] ";
  (line << ... << args);
  line << '\n';
  std::cerr << line.str();
}

template <class... Args> void error(const Args&... a) { write(Level::Error, "error", a...); }
template <class... Args> void warn(const Args&... a) { write(Level::Warn, "warn", a...); }
template <class... Args> void info(const Args&... a) { write(Level::Info, "info", a...); }
template <class... Args> void debug(const Args&... a) { write(Level::Debug, "debug", a...); }

}  // namespace ric::log

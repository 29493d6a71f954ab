#include "trajgan/log.hpp"

#include <cstdlib>
#include <iostream>

namespace trajgan {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("TRAJGAN_LOG");
    if (!env) return LogLevel::kError;
    const std::string v(env);
    if (v == "debug") return LogLevel::kDebug;
    if (v == "info") return LogLevel::kInfo;
    return LogLevel::kError;
  }();
  return level;
}

void log_error(const std::string& msg) {
  std::cerr << "[error] " << msg << '\n';
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) std::cerr << "[info] " << msg << '\n';
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) std::cerr << "[debug] " << msg << '\n';
}

}  // namespace trajgan

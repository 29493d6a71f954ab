#pragma once

#include <string>

namespace trajgan {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

// Level comes from TRAJGAN_LOG (error|info|debug); default is error so
// library output stays quiet under test runners.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace trajgan

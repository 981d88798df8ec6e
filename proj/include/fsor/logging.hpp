#pragma once

#include <string>

namespace fsor::logging {

// Verbosity is read once from the FSOR_LOG environment variable
// (error | info | debug); default is info. All output goes to stderr.
enum class Level { Error = 0, Info = 1, Debug = 2 };

Level level();

void error(const std::string& msg);
void warn(const std::string& msg);  // shown at info level
void info(const std::string& msg);
void debug(const std::string& msg);

}  // namespace fsor::logging

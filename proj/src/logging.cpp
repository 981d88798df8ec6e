#include "fsor/logging.hpp"

#include <cstdlib>
#include <iostream>

namespace fsor::logging {

namespace {

Level parse_env() {
  const char* v = std::getenv("FSOR_LOG");
  if (v == nullptr) return Level::Info;
  const std::string s(v);
  if (s == "error") return Level::Error;
  if (s == "debug") return Level::Debug;
  return Level::Info;
}

void emit(const char* tag, const std::string& msg) {
  std::cerr << "[fsor] " << tag << msg << std::endl;
}

}  // namespace

Level level() {
  static const Level lvl = parse_env();
  return lvl;
}

void error(const std::string& msg) { emit("error: ", msg); }

void warn(const std::string& msg) {
  if (level() >= Level::Info) emit("warning: ", msg);
}

void info(const std::string& msg) {
  if (level() >= Level::Info) emit("", msg);
}

void debug(const std::string& msg) {
  if (level() >= Level::Debug) emit("debug: ", msg);
}

}  // namespace fsor::logging

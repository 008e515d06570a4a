#include "conley/logging.hpp"

#include "conley/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace conley::log {

namespace {

Level from_env() {
  const char* env = std::getenv("CONLEY_FRONT_LOG");
  if (!env || !*env) return Level::info;
  return parse_level(env);
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{-1};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void emit(const char* tag, const std::string& message) {
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::cerr << "[" << tag << "] " << message << '\n';
}

}  // namespace

Level parse_level(const std::string& text) {
  if (text == "quiet") return Level::quiet;
  if (text == "info") return Level::info;
  if (text == "debug") return Level::debug;
  throw ConfigError("CONLEY_FRONT_LOG", "expected quiet, info or debug, got '" + text + "'");
}

Level level() {
  int v = current().load();
  if (v < 0) {
    v = static_cast<int>(from_env());
    current().store(v);
  }
  return static_cast<Level>(v);
}

void set_level(Level l) { current().store(static_cast<int>(l)); }

void info(const std::string& message) {
  if (level() >= Level::info) emit("info", message);
}

void debug(const std::string& message) {
  if (level() >= Level::debug) emit("debug", message);
}

}  // namespace conley::log

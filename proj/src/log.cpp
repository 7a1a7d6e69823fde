#include "tendon/log.hpp"

#include <cstdlib>
#include <cstring>

namespace tendon::log {

namespace {

Level initial_threshold() {
  const char* env = std::getenv("TENDONSIM_LOG");
  if (env == nullptr) return Level::warn;
  if (std::strcmp(env, "debug") == 0) return Level::debug;
  if (std::strcmp(env, "info") == 0) return Level::info;
  if (std::strcmp(env, "warn") == 0) return Level::warn;
  if (std::strcmp(env, "error") == 0) return Level::error;
  if (std::strcmp(env, "off") == 0) return Level::off;
  return Level::warn;
}

Level& threshold_ref() {
  static Level level = initial_threshold();
  return level;
}

const char* level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
    default: return "?";
  }
}

}  // namespace

Level threshold() { return threshold_ref(); }

void set_threshold(Level level) { threshold_ref() = level; }

void write(Level level, const std::string& message) {
  if (level < threshold_ref()) return;
  std::fprintf(stderr, "[tendonsim %s] %s\n", level_name(level), message.c_str());
}

}  // namespace tendon::log

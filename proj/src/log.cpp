#include "circadia/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace circadia::log {

namespace {

Level g_threshold = Level::warn;
bool g_initialized = false;
std::mutex g_mutex;

Level parse_level(const char* s) {
  if (std::strcmp(s, "debug") == 0) return Level::debug;
  if (std::strcmp(s, "info") == 0) return Level::info;
  if (std::strcmp(s, "warn") == 0) return Level::warn;
  if (std::strcmp(s, "error") == 0) return Level::error;
  if (std::strcmp(s, "off") == 0) return Level::off;
  return Level::warn;
}

const char* level_tag(Level lvl) {
  switch (lvl) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
    default: return "?";
  }
}

}  // namespace

Level threshold() {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (!g_initialized) {
    if (const char* env = std::getenv("CIRCADIA_LOG")) g_threshold = parse_level(env);
    g_initialized = true;
  }
  return g_threshold;
}

void set_threshold(Level lvl) {
  std::lock_guard<std::mutex> lock(g_mutex);
  g_threshold = lvl;
  g_initialized = true;
}

void emit(Level lvl, const std::string& msg) {
  if (lvl < threshold()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[circadia %s] %s\n", level_tag(lvl), msg.c_str());
}

}  // namespace circadia::log

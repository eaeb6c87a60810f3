#pragma once

#include <string>

namespace circadia::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

// Threshold comes from the CIRCADIA_LOG environment variable
// (debug|info|warn|error|off); defaults to warn.
Level threshold();
void set_threshold(Level lvl);

void emit(Level lvl, const std::string& msg);

inline void debug(const std::string& msg) { emit(Level::debug, msg); }
inline void info(const std::string& msg) { emit(Level::info, msg); }
inline void warn(const std::string& msg) { emit(Level::warn, msg); }
inline void error(const std::string& msg) { emit(Level::error, msg); }

}  // namespace circadia::log

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "circadia/ingest.hpp"
#include "circadia/time.hpp"
#include "circadia/types.hpp"

namespace testutil {

inline circadia::LocalStamp stamp(std::int64_t local_day, double minute_of_day,
                                  int offset_minutes = 0) {
  std::int64_t local_sec =
      local_day * circadia::kSecondsPerDay + static_cast<std::int64_t>(minute_of_day * 60.0);
  return circadia::LocalStamp{local_sec - std::int64_t{60} * offset_minutes, offset_minutes};
}

inline std::int64_t day_of(const char* iso) { return *circadia::parse_date(iso); }

// Dense minute series starting at the given local day.
inline circadia::MinuteSeries series_from(std::vector<double> values, std::int64_t start_day,
                                          circadia::StreamKind kind = circadia::StreamKind::steps) {
  circadia::MinuteSeries s;
  s.participant_id = "T";
  s.kind = kind;
  s.start_minute = start_day * circadia::kMinutesPerDay;
  s.values = std::move(values);
  return s;
}

// Scratch directory for tests that touch the filesystem.
inline std::string work_dir(const std::string& name) {
  const char* base = std::getenv("CIRCADIA_TEST_WORK");
  std::filesystem::path dir = base ? base : std::filesystem::temp_directory_path() / "circadia_tests";
  dir /= name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testutil

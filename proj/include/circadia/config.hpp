#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace circadia {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inclusive local-day range.
struct DayRange {
  std::int64_t first = 0;
  std::int64_t last = 0;
  bool contains(std::int64_t day) const { return day >= first && day <= last; }
};

enum class L5M10Mode { profile, per_day };

// Analysis settings shared by the extract/fit/report commands. Parsed from a
// "key = value" file; every default below matches the documented schema.
struct AnalysisConfig {
  std::vector<std::string> sites = {"UK", "ES", "NL"};
  std::map<std::string, std::vector<std::int64_t>> dst_transitions;  // site -> local days
  std::map<std::string, std::vector<DayRange>> lockdown_ranges;      // site -> ranges

  double coverage_min = 0.8;  // strict '>' comparison per day
  int qualifying_days_min = 8;
  std::int64_t pre_covid_cutoff_day = 18322;  // 2020-03-01
  int episode_gap_minutes = 60;
  int bin_minutes = 60;
  L5M10Mode l5m10_mode = L5M10Mode::profile;
  bool daily_step_qualifying_only = true;  // false: average over all 14 days
  bool sleep_main_only = true;             // false: all episodes enter the features

  std::uint64_t source_hash = 0;  // FNV-1a of the config file bytes, 0 if defaults

  bool site_known(const std::string& site) const;
};

// Unknown keys, malformed dates or malformed ranges raise ConfigError.
AnalysisConfig parse_analysis_config(const std::string& path);

// Shared low-level "key = value" reader ('#' comments, blank lines ignored).
std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& text);
std::vector<std::string> split_list(const std::string& value);

}  // namespace circadia

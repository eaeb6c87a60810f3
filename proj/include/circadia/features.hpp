#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circadia/ingest.hpp"
#include "circadia/windowing.hpp"

namespace circadia {

inline constexpr int kFeatureCount = 12;

enum class FeatureId {
  sleep_duration = 0,
  sleep_onset,
  sleep_offset,
  sleep_variability,
  daily_step,
  step_iv,
  step_is,
  l5_onset,
  m10_onset,
  hr_mesor,
  hr_amplitude,
  hr_acrophase,
};

// Column names in features.csv, in canonical reporting order.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureColumns = {
    "sleep_duration_min", "sleep_onset_mod", "sleep_offset_mod", "sleep_variability_min",
    "daily_step",         "step_iv",         "step_is",          "l5_onset_mod",
    "m10_onset_mod",      "hr_mesor_bpm",    "hr_amplitude_bpm", "hr_acrophase_mod"};

constexpr std::string_view feature_column(FeatureId f) {
  return kFeatureColumns[static_cast<std::size_t>(f)];
}

// True for the minutes-of-day features that live on a 1440-minute circle.
constexpr bool feature_is_circular(FeatureId f) {
  switch (f) {
    case FeatureId::sleep_onset:
    case FeatureId::sleep_offset:
    case FeatureId::l5_onset:
    case FeatureId::m10_onset:
    case FeatureId::hr_acrophase: return true;
    default: return false;
  }
}

// One included assessment window with its covariates and extracted features.
struct FeatureRow {
  std::string participant_id;
  LocalStamp phq_completion;
  int score = 0;
  Season season = Season::winter;
  bool lockdown = false;
  bool pre_covid = false;
  int age_years = 0;
  Gender gender = Gender::other;
  std::string site;
  bool employed = false;
  std::array<std::optional<double>, kFeatureCount> values;

  std::optional<double> value(FeatureId f) const {
    return values[static_cast<std::size_t>(f)];
  }
  void set_value(FeatureId f, std::optional<double> v) {
    values[static_cast<std::size_t>(f)] = v;
  }
};

using FeatureTable = std::vector<FeatureRow>;

void write_features_csv(const FeatureTable& table, const std::string& path);
FeatureTable read_features_csv(const std::string& path);

}  // namespace circadia

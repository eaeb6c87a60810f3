#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "circadia/config.hpp"
#include "circadia/ingest.hpp"
#include "circadia/nonparametric.hpp"
#include "circadia/types.hpp"

namespace circadia {

// Per-bin mean of present step minutes over the 14-day window aligned at
// local midnight; bins with no present minute are missing. Length 14 * p.
Array bin_window_steps(const MinuteSeries& steps, std::int64_t start_day, int bin_minutes);

// Per-minute mean across the window's days, ignoring missing values; minutes
// absent on every day stay missing. Length 1440.
Array day_profile(const MinuteSeries& steps, std::int64_t start_day, int n_days = kWindowDays);

// Mean of daily total steps (sum of present minutes per day) over the given
// days; nullopt when the day list is empty.
std::optional<double> daily_step_mean(const MinuteSeries& steps,
                                      const std::vector<std::int64_t>& days);

struct ActivityFeatureSet {
  std::optional<double> daily_step;
  std::optional<double> step_iv;
  std::optional<double> step_is;
  std::optional<double> l5_onset;   // minutes-of-day
  std::optional<double> m10_onset;  // minutes-of-day
};

// The five nonparametric features for one window. `qualifying_days` holds the
// local day numbers used for the Daily Step average (may equal all 14 days
// when the config disables qualifying-only averaging). In per-day mode the
// L5/M10 onsets are circular means of per-day onsets instead of onsets of the
// averaged profile.
ActivityFeatureSet activity_features(const MinuteSeries& steps, std::int64_t start_day,
                                     const std::vector<std::int64_t>& daily_step_days,
                                     const AnalysisConfig& cfg);

}  // namespace circadia

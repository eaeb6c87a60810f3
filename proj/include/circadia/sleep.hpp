#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "circadia/ingest.hpp"
#include "circadia/time.hpp"

namespace circadia {

inline constexpr int kEpochSeconds = 30;

// Contiguous sleep period assembled from 30-second stage epochs.
struct SleepEpisode {
  LocalStamp onset;   // start of the first non-awake epoch
  LocalStamp offset;  // end of the last non-awake epoch
  double total_sleep_minutes = 0;  // 0.5 * non-awake epoch count
  std::int64_t attributed_day = 0;  // noon-to-noon day of the offset

  double span_minutes() const {
    return static_cast<double>(offset.local_seconds() - onset.local_seconds()) / 60.0;
  }
};

// Noon-to-noon attribution: an episode ending before 12:00 belongs to the
// offset's date, at or after 12:00 to the next date.
std::int64_t noon_to_noon_day(const LocalStamp& offset);

// Groups time-sorted epochs into episodes wherever the gap between
// consecutive epochs is at most gap_minutes; groups with no non-awake epoch
// produce no episode.
std::vector<SleepEpisode> build_episodes(const std::vector<SleepEpoch>& epochs, int gap_minutes);

// At most one episode per noon-to-noon day: largest total sleep wins, ties go
// to the earlier onset.
std::map<std::int64_t, SleepEpisode> main_sleep_per_day(const std::vector<SleepEpisode>& episodes);

struct SleepFeatureSet {
  std::optional<double> duration_mean;    // minutes
  std::optional<double> variability;      // sample SD, minutes
  std::optional<double> onset_mean;       // circular mean, minutes-of-day
  std::optional<double> offset_mean;      // circular mean, minutes-of-day
  int n_nights = 0;
};

// Features over the episodes attributed to days in [start_day, end_day).
// `all_episodes` switches from main-sleep-only to every episode.
SleepFeatureSet sleep_features(const std::vector<SleepEpisode>& episodes, std::int64_t start_day,
                               std::int64_t end_day, bool main_only);

}  // namespace circadia

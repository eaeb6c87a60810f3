#include "circadia/sleep.hpp"

#include <algorithm>
#include <cmath>

#include "circadia/circular.hpp"

namespace circadia {

std::int64_t noon_to_noon_day(const LocalStamp& offset) {
  return floor_div(offset.local_seconds() + kSecondsPerDay / 2, kSecondsPerDay);
}

std::vector<SleepEpisode> build_episodes(const std::vector<SleepEpoch>& epochs, int gap_minutes) {
  std::vector<SleepEpisode> episodes;
  const std::int64_t max_gap_seconds = std::int64_t{60} * gap_minutes;

  std::size_t group_begin = 0;
  auto flush = [&](std::size_t begin, std::size_t end) {
    // Onset/offset from the non-awake extent; all-awake groups are dropped.
    std::size_t first = end, last = end;
    std::size_t sleep_count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (epochs[i].stage == Stage::awake) continue;
      if (first == end) first = i;
      last = i;
      ++sleep_count;
    }
    if (sleep_count == 0) return;
    SleepEpisode ep;
    ep.onset = epochs[first].stamp;
    ep.offset = epochs[last].stamp;
    ep.offset.utc_epoch_seconds += kEpochSeconds;
    ep.total_sleep_minutes = 0.5 * static_cast<double>(sleep_count);
    ep.attributed_day = noon_to_noon_day(ep.offset);
    episodes.push_back(ep);
  };

  for (std::size_t i = 1; i <= epochs.size(); ++i) {
    if (i == epochs.size()) {
      flush(group_begin, i);
      break;
    }
    std::int64_t prev_end = epochs[i - 1].stamp.utc_epoch_seconds + kEpochSeconds;
    if (epochs[i].stamp.utc_epoch_seconds - prev_end > max_gap_seconds) {
      flush(group_begin, i);
      group_begin = i;
    }
  }
  return episodes;
}

std::map<std::int64_t, SleepEpisode> main_sleep_per_day(const std::vector<SleepEpisode>& episodes) {
  std::map<std::int64_t, SleepEpisode> main;
  for (const SleepEpisode& ep : episodes) {
    auto [it, inserted] = main.emplace(ep.attributed_day, ep);
    if (inserted) continue;
    const SleepEpisode& cur = it->second;
    bool better = ep.total_sleep_minutes > cur.total_sleep_minutes ||
                  (ep.total_sleep_minutes == cur.total_sleep_minutes &&
                   ep.onset.local_seconds() < cur.onset.local_seconds());
    if (better) it->second = ep;
  }
  return main;
}

SleepFeatureSet sleep_features(const std::vector<SleepEpisode>& episodes, std::int64_t start_day,
                               std::int64_t end_day, bool main_only) {
  std::vector<SleepEpisode> in_window;
  if (main_only) {
    for (const auto& [day, ep] : main_sleep_per_day(episodes))
      if (day >= start_day && day < end_day) in_window.push_back(ep);
  } else {
    for (const SleepEpisode& ep : episodes)
      if (ep.attributed_day >= start_day && ep.attributed_day < end_day) in_window.push_back(ep);
  }

  SleepFeatureSet out;
  out.n_nights = static_cast<int>(in_window.size());
  if (in_window.empty()) return out;

  double sum = 0;
  std::vector<double> onsets, offsets;
  onsets.reserve(in_window.size());
  offsets.reserve(in_window.size());
  for (const SleepEpisode& ep : in_window) {
    sum += ep.total_sleep_minutes;
    onsets.push_back(ep.onset.minute_of_day_frac());
    offsets.push_back(ep.offset.minute_of_day_frac());
  }
  const double n = static_cast<double>(in_window.size());
  const double mean = sum / n;
  out.duration_mean = mean;

  if (in_window.size() >= 2) {
    double ss = 0;
    for (const SleepEpisode& ep : in_window) {
      double d = ep.total_sleep_minutes - mean;
      ss += d * d;
    }
    out.variability = std::sqrt(ss / (n - 1.0));
  } else {
    out.variability = 0.0;
  }

  out.onset_mean = circular_mean_minutes(onsets);
  out.offset_mean = circular_mean_minutes(offsets);
  return out;
}

}  // namespace circadia

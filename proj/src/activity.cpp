#include "circadia/activity.hpp"

#include <cmath>

#include "circadia/circular.hpp"

namespace circadia {

Array bin_window_steps(const MinuteSeries& steps, std::int64_t start_day, int bin_minutes) {
  const int bins_per_day = kMinutesPerDay / bin_minutes;
  const Eigen::Index n_bins = static_cast<Eigen::Index>(kWindowDays) * bins_per_day;
  Array out = Array::Constant(n_bins, missing_value());

  const std::int64_t first = start_day * kMinutesPerDay;
  for (Eigen::Index b = 0; b < n_bins; ++b) {
    double sum = 0;
    int count = 0;
    const std::int64_t bin_start = first + static_cast<std::int64_t>(b) * bin_minutes;
    for (int k = 0; k < bin_minutes; ++k) {
      double v = steps.at_minute(bin_start + k);
      if (is_missing(v)) continue;
      sum += v;
      ++count;
    }
    if (count > 0) out[b] = sum / count;
  }
  return out;
}

Array day_profile(const MinuteSeries& steps, std::int64_t start_day, int n_days) {
  Array sums = Array::Zero(kMinutesPerDay);
  Eigen::ArrayXi counts = Eigen::ArrayXi::Zero(kMinutesPerDay);
  for (int d = 0; d < n_days; ++d) {
    const std::int64_t first = (start_day + d) * kMinutesPerDay;
    for (int m = 0; m < kMinutesPerDay; ++m) {
      double v = steps.at_minute(first + m);
      if (is_missing(v)) continue;
      sums[m] += v;
      ++counts[m];
    }
  }
  Array out = Array::Constant(kMinutesPerDay, missing_value());
  for (int m = 0; m < kMinutesPerDay; ++m)
    if (counts[m] > 0) out[m] = sums[m] / counts[m];
  return out;
}

std::optional<double> daily_step_mean(const MinuteSeries& steps,
                                      const std::vector<std::int64_t>& days) {
  if (days.empty()) return std::nullopt;
  double total = 0;
  for (std::int64_t day : days) {
    const std::int64_t first = day * kMinutesPerDay;
    for (int m = 0; m < kMinutesPerDay; ++m) {
      double v = steps.at_minute(first + m);
      if (!is_missing(v)) total += v;
    }
  }
  return total / static_cast<double>(days.size());
}

ActivityFeatureSet activity_features(const MinuteSeries& steps, std::int64_t start_day,
                                     const std::vector<std::int64_t>& daily_step_days,
                                     const AnalysisConfig& cfg) {
  ActivityFeatureSet out;
  out.daily_step = daily_step_mean(steps, daily_step_days);

  Array bins = bin_window_steps(steps, start_day, cfg.bin_minutes);
  auto iv = intradaily_variability(bins);
  if (iv.available) out.step_iv = iv.value;
  auto is = interdaily_stability(bins, kMinutesPerDay / cfg.bin_minutes);
  if (is.available) out.step_is = is.value;

  if (cfg.l5m10_mode == L5M10Mode::profile) {
    auto onsets = l5_m10_onsets(day_profile(steps, start_day));
    if (onsets.l5.available) out.l5_onset = static_cast<double>(onsets.l5.onset);
    if (onsets.m10.available) out.m10_onset = static_cast<double>(onsets.m10.onset);
  } else {
    // Per-day onsets aggregated by circular mean.
    std::vector<double> l5s, m10s;
    for (int d = 0; d < kWindowDays; ++d) {
      auto onsets = l5_m10_onsets(day_profile(steps, start_day + d, 1));
      if (onsets.l5.available) l5s.push_back(static_cast<double>(onsets.l5.onset));
      if (onsets.m10.available) m10s.push_back(static_cast<double>(onsets.m10.onset));
    }
    out.l5_onset = circular_mean_minutes(l5s);
    out.m10_onset = circular_mean_minutes(m10s);
  }
  return out;
}

}  // namespace circadia

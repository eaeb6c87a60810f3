#pragma once

#include <cstdint>
#include <optional>

#include "circadia/time.hpp"
#include "circadia/types.hpp"

namespace circadia {

template <typename S>
struct RhythmStat {
  S value{};
  bool degenerate = false;  // formula hit a 0/0 (constant input)
  bool available = false;
};

// Intradaily variability over a binned series with missing bins (NaN):
//   IV = N * sum (x_i - x_{i-1})^2 / ((N-1) * sum (x_i - mean)^2)
// where N counts non-missing bins and difference terms exist only for
// adjacent non-missing pairs. A constant series has no fragmentation and is
// reported as 0 with the degenerate flag set.
template <typename S>
RhythmStat<S> intradaily_variability(const ArrayX<S>& bins) {
  RhythmStat<S> out;
  std::int64_t n = 0;
  S sum = 0;
  for (Eigen::Index i = 0; i < bins.size(); ++i) {
    if (is_missing(bins[i])) continue;
    ++n;
    sum += bins[i];
  }
  std::int64_t pairs = 0;
  S diff_ss = 0;
  for (Eigen::Index i = 1; i < bins.size(); ++i) {
    if (is_missing(bins[i]) || is_missing(bins[i - 1])) continue;
    S d = bins[i] - bins[i - 1];
    diff_ss += d * d;
    ++pairs;
  }
  if (n < 2 || pairs < 2) return out;

  const S mean = sum / static_cast<S>(n);
  S var_ss = 0;
  for (Eigen::Index i = 0; i < bins.size(); ++i) {
    if (is_missing(bins[i])) continue;
    S d = bins[i] - mean;
    var_ss += d * d;
  }
  out.available = true;
  if (var_ss <= 0) {
    out.value = 0;
    out.degenerate = true;
    return out;
  }
  out.value = (static_cast<S>(n) * diff_ss) / (static_cast<S>(n - 1) * var_ss);
  return out;
}

// Interdaily stability:
//   IS = N * sum_h (mean_h - mean)^2 / (p * sum_i (x_i - mean)^2)
// with p bins per day fixed by the grid, mean_h over days observed at
// bin-of-day h. Zero total variance leaves IS undefined.
template <typename S>
RhythmStat<S> interdaily_stability(const ArrayX<S>& bins, int bins_per_day) {
  RhythmStat<S> out;
  if (bins_per_day <= 0 || bins.size() % bins_per_day != 0) return out;

  std::int64_t n = 0;
  S sum = 0;
  std::int64_t days_with_data = 0;
  const std::int64_t days = bins.size() / bins_per_day;
  for (std::int64_t d = 0; d < days; ++d) {
    bool any = false;
    for (int h = 0; h < bins_per_day; ++h) {
      S v = bins[d * bins_per_day + h];
      if (is_missing(v)) continue;
      ++n;
      sum += v;
      any = true;
    }
    if (any) ++days_with_data;
  }
  if (n < 2 || days_with_data < 2) return out;
  const S mean = sum / static_cast<S>(n);

  S var_ss = 0;
  for (Eigen::Index i = 0; i < bins.size(); ++i) {
    if (is_missing(bins[i])) continue;
    S d = bins[i] - mean;
    var_ss += d * d;
  }
  if (var_ss <= 0) {
    out.degenerate = true;
    return out;  // unavailable: no variance to apportion
  }

  S hour_ss = 0;
  for (int h = 0; h < bins_per_day; ++h) {
    S hsum = 0;
    std::int64_t hcount = 0;
    for (std::int64_t d = 0; d < days; ++d) {
      S v = bins[d * bins_per_day + h];
      if (is_missing(v)) continue;
      hsum += v;
      ++hcount;
    }
    if (hcount == 0) continue;
    S dev = hsum / static_cast<S>(hcount) - mean;
    hour_ss += dev * dev;
  }
  out.available = true;
  out.value = (static_cast<S>(n) * hour_ss) / (static_cast<S>(bins_per_day) * var_ss);
  return out;
}

// Circular linear interpolation across missing runs of at most max_gap
// minutes; longer runs stay missing. An all-missing profile is returned
// unchanged.
template <typename S>
ArrayX<S> fill_circular_gaps(const ArrayX<S>& profile, int max_gap) {
  const Eigen::Index n = profile.size();
  ArrayX<S> out = profile;
  Eigen::Index first_present = -1;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!is_missing(profile[i])) {
      first_present = i;
      break;
    }
  if (first_present < 0) return out;

  Eigen::Index prev = first_present;
  // Walk one full cycle starting after the first present minute.
  for (Eigen::Index step = 1; step <= n; ++step) {
    Eigen::Index i = (first_present + step) % n;
    if (is_missing(out[i])) continue;
    Eigen::Index gap = (i - prev + n) % n - 1;
    if (gap > 0 && gap <= max_gap) {
      S a = out[prev], b = out[i];
      for (Eigen::Index k = 1; k <= gap; ++k) {
        Eigen::Index j = (prev + k) % n;
        S t = static_cast<S>(k) / static_cast<S>(gap + 1);
        out[j] = a + (b - a) * t;
      }
    }
    prev = i;
  }
  return out;
}

struct OnsetStat {
  int onset = 0;  // start minute-of-day of the selected window
  bool degenerate = false;
  bool available = false;
};

struct OnsetPair {
  OnsetStat l5;
  OnsetStat m10;
};

// Mean over the circular window [start, start+len) of a 1440-minute profile;
// nullopt when any covered minute is missing. Plain left-to-right summation
// so exhaustive-search checks reproduce results bit for bit.
template <typename S>
std::optional<S> circular_window_mean(const ArrayX<S>& profile, int start, int len) {
  const int n = static_cast<int>(profile.size());
  S sum = 0;
  for (int k = 0; k < len; ++k) {
    S v = profile[(start + k) % n];
    if (is_missing(v)) return std::nullopt;
    sum += v;
  }
  return sum / static_cast<S>(len);
}

// L5/M10 onsets: start minutes of the least active 300-minute and most
// active 600-minute circular windows after gap-filling; unfillable gaps
// exclude every window position they touch. Ties resolve to the earliest
// start scanning from midnight. All positions tying flags degenerate.
template <typename S>
OnsetPair l5_m10_onsets(const ArrayX<S>& raw_profile, int max_fill_gap = 120, int l5_len = 300,
                        int m10_len = 600) {
  OnsetPair out;
  if (raw_profile.size() != kMinutesPerDay) return out;
  ArrayX<S> profile = fill_circular_gaps(raw_profile, max_fill_gap);

  auto scan = [&](int len, bool want_min) {
    OnsetStat stat;
    bool any_tie = true;
    for (int s = 0; s < kMinutesPerDay; ++s) {
      auto m = circular_window_mean(profile, s, len);
      if (!m) continue;
      if (!stat.available) {
        stat.available = true;
        stat.onset = s;
        stat.degenerate = false;
        any_tie = true;
      } else {
        S best = *circular_window_mean(profile, stat.onset, len);
        if ((want_min && *m < best) || (!want_min && *m > best)) {
          stat.onset = s;
          any_tie = false;
        } else if (*m != best) {
          any_tie = false;
        }
      }
    }
    stat.degenerate = stat.available && any_tie;
    return stat;
  };

  out.l5 = scan(l5_len, /*want_min=*/true);
  out.m10 = scan(m10_len, /*want_min=*/false);
  return out;
}

}  // namespace circadia

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "circadia/activity.hpp"
#include "circadia/nonparametric.hpp"
#include "circadia/rng.hpp"
#include "helpers.hpp"

using namespace circadia;

namespace {

Array to_array(const std::vector<double>& v) {
  Array a(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) a[static_cast<Eigen::Index>(i)] = v[i];
  return a;
}

// Independent exhaustive L5/M10 search used as the oracle: same gap filling,
// then a plain loop over all 1440 circular starts.
struct BruteOnsets {
  bool l5_ok = false, m10_ok = false;
  int l5 = 0, m10 = 0;
};

BruteOnsets brute_force_onsets(const Array& raw, int max_fill_gap = 120) {
  Array p = fill_circular_gaps(raw, max_fill_gap);
  BruteOnsets out;
  auto mean_at = [&](int s, int len, bool& ok) {
    double sum = 0;
    for (int k = 0; k < len; ++k) {
      double v = p[(s + k) % 1440];
      if (is_missing(v)) {
        ok = false;
        return 0.0;
      }
      sum += v;
    }
    ok = true;
    return sum / len;
  };
  double best_l5 = 0, best_m10 = 0;
  for (int s = 0; s < 1440; ++s) {
    bool ok;
    double m5 = mean_at(s, 300, ok);
    if (ok && (!out.l5_ok || m5 < best_l5)) {
      out.l5_ok = true;
      best_l5 = m5;
      out.l5 = s;
    }
    double m10 = mean_at(s, 600, ok);
    if (ok && (!out.m10_ok || m10 > best_m10)) {
      out.m10_ok = true;
      best_m10 = m10;
      out.m10 = s;
    }
  }
  return out;
}

Array random_profile(SplitMix64& rng, bool with_gaps) {
  Array p(1440);
  for (int m = 0; m < 1440; ++m) p[m] = std::floor(rng.uniform() * 40.0);
  if (with_gaps) {
    int n_gaps = 1 + static_cast<int>(rng.next() % 4);
    for (int g = 0; g < n_gaps; ++g) {
      int start = static_cast<int>(rng.next() % 1440);
      int len = 1 + static_cast<int>(rng.next() % 400);
      for (int k = 0; k < len; ++k) p[(start + k) % 1440] = missing_value();
    }
  }
  return p;
}

}  // namespace

TEST_CASE("IV of a constant series is zero with the degenerate flag") {
  auto iv = intradaily_variability(to_array(std::vector<double>(48, 7.0)));
  CHECK(iv.available);
  CHECK(iv.degenerate);
  CHECK(iv.value == 0.0);
}

TEST_CASE("IV of a 48-bin alternating series is exactly 4") {
  std::vector<double> bins(48);
  for (int i = 0; i < 48; ++i) bins[static_cast<std::size_t>(i)] = i % 2;
  auto iv = intradaily_variability(to_array(bins));
  CHECK(iv.available);
  CHECK(!iv.degenerate);
  CHECK(iv.value == 4.0);  // 48*47 / (47*12)
}

TEST_CASE("IV over i.i.d. bins concentrates near 2") {
  SplitMix64 rng(2024);
  double sum = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> bins(336);  // 14 days x 24 bins
    for (double& b : bins) b = rng.normal();
    sum += intradaily_variability(to_array(bins)).value;
  }
  double mean = sum / reps;
  CHECK(mean > 1.9);
  CHECK(mean < 2.1);
}

TEST_CASE("IV skips difference terms across missing bins") {
  std::vector<double> bins = {0, 1, missing_value(), 1, 0, 1};
  auto iv = intradaily_variability(to_array(bins));
  // N=5, pairs: (0,1),(1,0),(0,1) -> diff_ss = 3; mean 0.6, var_ss = 1.2.
  CHECK(iv.available);
  CHECK(iv.value == doctest::Approx(5.0 * 3.0 / (4.0 * 1.2)).epsilon(1e-12));
}

TEST_CASE("IS of an identical repeated day profile is exactly 1") {
  std::vector<double> bins;
  for (int d = 0; d < 14; ++d)
    for (int h = 0; h < 24; ++h) bins.push_back(h < 8 ? 0.0 : 10.0 + h);
  auto is = interdaily_stability(to_array(bins), 24);
  CHECK(is.available);
  CHECK(is.value == 1.0);
}

TEST_CASE("IS of i.i.d. noise is near 1/14") {
  SplitMix64 rng(77);
  double sum = 0;
  const int reps = 400;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> bins(336);
    for (double& b : bins) b = rng.normal();
    sum += interdaily_stability(to_array(bins), 24).value;
  }
  double mean = sum / reps;
  CHECK(mean > 1.0 / 14.0 - 0.02);
  CHECK(mean < 1.0 / 14.0 + 0.02);
}

TEST_CASE("a permuted day pulls IS strictly between the extremes") {
  std::vector<double> profile(24);
  for (int h = 0; h < 24; ++h) profile[static_cast<std::size_t>(h)] = h < 8 ? 0.0 : 10.0 + (h % 5);
  std::vector<double> bins;
  for (int d = 0; d < 14; ++d)
    for (int h = 0; h < 24; ++h) bins.push_back(profile[static_cast<std::size_t>(h)]);
  // Permute the last day cyclically by 12 hours.
  for (int h = 0; h < 24; ++h)
    bins[13 * 24 + static_cast<std::size_t>(h)] = profile[static_cast<std::size_t>((h + 12) % 24)];
  double is_mixed = interdaily_stability(to_array(bins), 24).value;

  // Direct-computation oracle over the definition.
  double n = 336;
  double mean = 0;
  for (double b : bins) mean += b;
  mean /= n;
  double var_ss = 0;
  for (double b : bins) var_ss += (b - mean) * (b - mean);
  double hour_ss = 0;
  for (int h = 0; h < 24; ++h) {
    double hm = 0;
    for (int d = 0; d < 14; ++d) hm += bins[static_cast<std::size_t>(d * 24 + h)];
    hm /= 14;
    hour_ss += (hm - mean) * (hm - mean);
  }
  double oracle = n * hour_ss / (24 * var_ss);
  CHECK(is_mixed == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(is_mixed < 1.0);
  CHECK(is_mixed > 1.0 / 14.0);
}

TEST_CASE("IS of a constant series is unavailable and degenerate") {
  std::vector<double> bins(336, 3.0);
  auto is = interdaily_stability(to_array(bins), 24);
  CHECK(!is.available);
  CHECK(is.degenerate);
}

TEST_CASE("IV and IS are invariant under affine transforms") {
  SplitMix64 rng(11);
  std::vector<double> bins(336);
  for (double& b : bins) b = 5.0 + 3.0 * rng.normal();
  double iv0 = intradaily_variability(to_array(bins)).value;
  double is0 = interdaily_stability(to_array(bins), 24).value;
  for (double a : {2.5, -1.75}) {
    std::vector<double> t(bins.size());
    for (std::size_t i = 0; i < bins.size(); ++i) t[i] = a * bins[i] + 13.0;
    CHECK(intradaily_variability(to_array(t)).value == doctest::Approx(iv0).epsilon(1e-10));
    CHECK(interdaily_stability(to_array(t), 24).value == doctest::Approx(is0).epsilon(1e-10));
  }
  CHECK(iv0 >= 0.0);
  CHECK(is0 >= 0.0);
  CHECK(is0 <= 1.0);
}

TEST_CASE("IS of any exact function of bin-of-day is 1") {
  SplitMix64 rng(123);
  std::vector<double> profile(24);
  for (double& v : profile) v = rng.uniform() * 20.0;
  std::vector<double> bins;
  for (int d = 0; d < 14; ++d)
    for (int h = 0; h < 24; ++h) bins.push_back(profile[static_cast<std::size_t>(h)]);
  CHECK(interdaily_stability(to_array(bins), 24).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("binning averages present minutes and marks empty bins missing") {
  std::vector<double> minutes(14 * 1440, missing_value());
  // Day 0, first hour: values 0..59 -> mean 29.5; second hour stays missing.
  for (int m = 0; m < 60; ++m) minutes[static_cast<std::size_t>(m)] = m;
  auto series = testutil::series_from(minutes, 200);
  Array bins = bin_window_steps(series, 200, 60);
  REQUIRE(bins.size() == 336);
  CHECK(bins[0] == doctest::Approx(29.5));
  CHECK(is_missing(bins[1]));
}

TEST_CASE("day profile averages across days and keeps all-missing minutes missing") {
  std::vector<double> minutes(2 * 1440, missing_value());
  minutes[100] = 0.0;
  minutes[1440 + 100] = 10.0;
  minutes[200] = 6.0;  // present on one day only
  auto series = testutil::series_from(minutes, 300);
  Array profile = day_profile(series, 300, 2);
  CHECK(profile[100] == doctest::Approx(5.0));
  CHECK(profile[200] == doctest::Approx(6.0));
  CHECK(is_missing(profile[300]));
}

TEST_CASE("identical days give a profile equal to any single day") {
  SplitMix64 rng(9);
  std::vector<double> one_day(1440);
  for (double& v : one_day) v = std::floor(rng.uniform() * 30.0);
  std::vector<double> minutes;
  for (int d = 0; d < 14; ++d) minutes.insert(minutes.end(), one_day.begin(), one_day.end());
  auto series = testutil::series_from(minutes, 300);
  Array profile = day_profile(series, 300);
  for (int m = 0; m < 1440; ++m)
    CHECK(profile[m] == doctest::Approx(one_day[static_cast<std::size_t>(m)]).epsilon(1e-12));
}

TEST_CASE("daily step mean over explicit day lists") {
  SUBCASE("fourteen equal days") {
    std::vector<double> minutes;
    for (int d = 0; d < 14; ++d)
      for (int m = 0; m < 1440; ++m) minutes.push_back(m < 800 ? 10.0 : 0.0);  // 8000/day
    auto series = testutil::series_from(minutes, 400);
    std::vector<std::int64_t> days;
    for (int d = 0; d < 14; ++d) days.push_back(400 + d);
    CHECK(*daily_step_mean(series, days) == doctest::Approx(8000.0));
  }
  SUBCASE("six and ten thousand average to eight") {
    std::vector<double> minutes;
    for (int d = 0; d < 14; ++d) {
      double per_minute = d < 7 ? 6.0 : 10.0;
      for (int m = 0; m < 1440; ++m) minutes.push_back(m < 1000 ? per_minute : 0.0);
    }
    auto series = testutil::series_from(minutes, 400);
    std::vector<std::int64_t> days;
    for (int d = 0; d < 14; ++d) days.push_back(400 + d);
    CHECK(*daily_step_mean(series, days) == doctest::Approx(8000.0));
  }
  SUBCASE("restricting to qualifying days changes the mean") {
    // 8 good days of 8000, 6 bad days of 100; oracle sums only the good.
    std::vector<double> minutes;
    for (int d = 0; d < 14; ++d)
      for (int m = 0; m < 1440; ++m)
        minutes.push_back(d < 8 ? (m < 800 ? 10.0 : 0.0) : (m < 100 ? 1.0 : 0.0));
    auto series = testutil::series_from(minutes, 400);
    std::vector<std::int64_t> qualifying;
    for (int d = 0; d < 8; ++d) qualifying.push_back(400 + d);
    CHECK(*daily_step_mean(series, qualifying) == doctest::Approx(8000.0));
    std::vector<std::int64_t> all_days;
    for (int d = 0; d < 14; ++d) all_days.push_back(400 + d);
    CHECK(*daily_step_mean(series, all_days) < 8000.0);
  }
  SUBCASE("empty day list is unavailable") {
    auto series = testutil::series_from({1, 2, 3}, 400);
    CHECK(!daily_step_mean(series, {}));
  }
}

TEST_CASE("daily step mean scales linearly") {
  SplitMix64 rng(55);
  std::vector<double> minutes(14 * 1440);
  for (double& v : minutes) v = std::floor(rng.uniform() * 20.0);
  std::vector<std::int64_t> days;
  for (int d = 0; d < 14; ++d) days.push_back(400 + d);
  auto series = testutil::series_from(minutes, 400);
  double base = *daily_step_mean(series, days);
  for (double& v : minutes) v *= 2.0;
  auto doubled = testutil::series_from(minutes, 400);
  CHECK(*daily_step_mean(doubled, days) == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("M10 onset of a rectangular activity block is its start") {
  Array profile = Array::Zero(1440);
  for (int m = 480; m < 1080; ++m) profile[m] = 1.0;
  auto onsets = l5_m10_onsets(profile);
  REQUIRE(onsets.m10.available);
  CHECK(onsets.m10.onset == 480);
  // L5 ties across the zero span resolve to the earliest start from midnight.
  REQUIRE(onsets.l5.available);
  CHECK(onsets.l5.onset == 0);
}

TEST_CASE("uniform profile is degenerate with onsets at midnight") {
  Array profile = Array::Constant(1440, 3.25);
  auto onsets = l5_m10_onsets(profile);
  CHECK(onsets.l5.available);
  CHECK(onsets.m10.available);
  CHECK(onsets.l5.degenerate);
  CHECK(onsets.m10.degenerate);
  CHECK(onsets.l5.onset == 0);
  CHECK(onsets.m10.onset == 0);
}

TEST_CASE("all-missing profile is unavailable") {
  Array profile = Array::Constant(1440, missing_value());
  auto onsets = l5_m10_onsets(profile);
  CHECK(!onsets.l5.available);
  CHECK(!onsets.m10.available);
}

TEST_CASE("sliding onsets equal exhaustive search on random profiles") {
  SplitMix64 rng(31415);
  for (int rep = 0; rep < 60; ++rep) {
    Array profile = random_profile(rng, rep % 2 == 1);
    auto got = l5_m10_onsets(profile);
    BruteOnsets expected = brute_force_onsets(profile);
    CHECK(got.l5.available == expected.l5_ok);
    CHECK(got.m10.available == expected.m10_ok);
    if (expected.l5_ok) CHECK(got.l5.onset == expected.l5);
    if (expected.m10_ok) CHECK(got.m10.onset == expected.m10);
  }
}

TEST_CASE("rotating the profile rotates both onsets") {
  SplitMix64 rng(222);
  Array profile = random_profile(rng, false);
  auto base = l5_m10_onsets(profile);
  REQUIRE(base.l5.available);
  for (int k : {1, 60, 719, 1439}) {
    Array rotated(1440);
    for (int m = 0; m < 1440; ++m) rotated[(m + k) % 1440] = profile[m];
    auto r = l5_m10_onsets(rotated);
    CHECK(r.l5.onset == (base.l5.onset + k) % 1440);
    CHECK(r.m10.onset == (base.m10.onset + k) % 1440);
  }
}

TEST_CASE("the selected M10 window mean dominates every other start") {
  SplitMix64 rng(808);
  Array profile = random_profile(rng, false);
  auto onsets = l5_m10_onsets(profile);
  double best = *circular_window_mean(profile, onsets.m10.onset, 600);
  for (int s = 0; s < 1440; ++s) {
    auto m = circular_window_mean(profile, s, 600);
    REQUIRE(m.has_value());
    CHECK(best >= *m);
  }
}

TEST_CASE("gap filling interpolates short gaps and leaves long ones") {
  Array profile = Array::Constant(1440, missing_value());
  for (int m = 0; m < 1440; ++m)
    if (m >= 200 && m < 1000) profile[m] = 10.0;
  // short gap: 1000..1099 missing (100 <= 120); long gap wraps 1100..199 (540).
  for (int m = 1000; m < 1100; ++m) profile[m] = missing_value();
  profile[1100] = 20.0;
  Array filled = fill_circular_gaps(profile, 120);
  CHECK(!is_missing(filled[1050]));
  CHECK(filled[1050] == doctest::Approx(10.0 + 10.0 * (1050 - 999) / 101.0).epsilon(1e-9));
  CHECK(is_missing(filled[1200]));
  CHECK(is_missing(filled[0]));
}

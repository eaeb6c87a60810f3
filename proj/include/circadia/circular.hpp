#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "circadia/time.hpp"

namespace circadia {

inline constexpr double kTwoPi = 6.283185307179586477;

// Wraps a minutes-of-day value into [0, 1440).
inline double wrap_minutes(double m) {
  double r = std::fmod(m, static_cast<double>(kMinutesPerDay));
  return r < 0 ? r + kMinutesPerDay : r;
}

// Signed circular difference a - b in (-720, 720].
inline double circular_delta_minutes(double a, double b) {
  double d = std::fmod(a - b, static_cast<double>(kMinutesPerDay));
  if (d <= -720.0) d += kMinutesPerDay;
  if (d > 720.0) d -= kMinutesPerDay;
  return d;
}

// Circular mean of minutes-of-day via summed unit vectors; empty input or a
// vanishing resultant (values cancel) yields nullopt.
inline std::optional<double> circular_mean_minutes(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double sum_cos = 0.0, sum_sin = 0.0;
  const double w = kTwoPi / kMinutesPerDay;
  for (double m : values) {
    sum_cos += std::cos(w * m);
    sum_sin += std::sin(w * m);
  }
  double resultant = std::hypot(sum_cos, sum_sin) / static_cast<double>(values.size());
  if (resultant < 1e-12) return std::nullopt;
  return wrap_minutes(std::atan2(sum_sin, sum_cos) / w);
}

}  // namespace circadia

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace circadia {

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kSecondsPerDay = 86400;
inline constexpr int kWindowDays = 14;  // assessment window length

// Proleptic Gregorian calendar date.
struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

// Days since 1970-01-01 (may be negative).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

inline constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// A point in time carried as UTC seconds plus the UTC offset that was in
// force locally (DST included). All local fields derive from utc + offset.
struct LocalStamp {
  std::int64_t utc_epoch_seconds = 0;
  int local_offset_minutes = 0;  // valid range [-720, +840]

  std::int64_t local_seconds() const {
    return utc_epoch_seconds + std::int64_t{60} * local_offset_minutes;
  }
  // Local minute index (minutes since 1970-01-01 00:00 local).
  std::int64_t local_minute() const { return floor_div(local_seconds(), 60); }
  // Local day number (days since 1970-01-01 local).
  std::int64_t local_day() const { return floor_div(local_seconds(), kSecondsPerDay); }
  // Minute of the local day, in [0, 1440).
  int minute_of_day() const {
    std::int64_t s = local_seconds() - local_day() * kSecondsPerDay;
    return static_cast<int>(s / 60);
  }
  // Fractional minute of the local day, in [0, 1440).
  double minute_of_day_frac() const {
    std::int64_t s = local_seconds() - local_day() * kSecondsPerDay;
    return static_cast<double>(s) / 60.0;
  }
  CivilDate local_date() const { return civil_from_days(local_day()); }

  friend bool operator==(const LocalStamp&, const LocalStamp&) = default;
};

inline constexpr bool valid_offset_minutes(std::int64_t m) {
  return m >= -720 && m <= 840;
}

// "YYYY-MM-DD" -> day number. Rejects malformed or out-of-range dates.
std::optional<std::int64_t> parse_date(std::string_view s);
std::string format_date(std::int64_t day);
// Local wall-clock "YYYY-MM-DDTHH:MM:SS" of a stamp.
std::string format_local_datetime(const LocalStamp& stamp);

}  // namespace circadia

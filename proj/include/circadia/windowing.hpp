#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "circadia/config.hpp"
#include "circadia/ingest.hpp"
#include "circadia/sleep.hpp"
#include "circadia/time.hpp"

namespace circadia {

enum class Season { winter, spring, summer, autumn };
const char* season_name(Season s);

// EU astronomical seasons; boundaries inclusive on both ends:
// spring Mar 20 - Jun 20, summer Jun 21 - Sep 22,
// autumn Sep 23 - Dec 20, winter Dec 21 - Mar 19.
Season season_of(const CivilDate& date);
inline Season season_of_day(std::int64_t day) { return season_of(civil_from_days(day)); }

struct CoverageStats {
  std::array<double, kWindowDays> step_fraction{};
  std::array<double, kWindowDays> hr_fraction{};
  std::array<bool, kWindowDays> has_sleep{};
  int qualifying_days = 0;

  bool day_qualifies(int d, double coverage_min) const {
    return step_fraction[static_cast<std::size_t>(d)] > coverage_min &&
           hr_fraction[static_cast<std::size_t>(d)] > coverage_min &&
           has_sleep[static_cast<std::size_t>(d)];
  }
};

struct AssessmentWindow {
  std::string participant_id;
  PhqRecord phq;
  std::int64_t start_day = 0;  // first local day of the window
  std::int64_t end_day = 0;    // = completion date; window covers [start_day, end_day)
  CoverageStats coverage;
  Season season = Season::winter;
  bool lockdown = false;
  bool pre_covid = false;
  bool dst_excluded = false;
  bool included = false;
  std::string exclusion_reason;  // empty when included
};

// Fraction of the local day's 1440 minutes that carry a value.
double day_coverage_fraction(const MinuteSeries& series, std::int64_t day);

// True iff the date falls in any configured lockdown range for the site.
// Throws ConfigError for a site missing from the config site list.
bool lockdown_flag(std::int64_t day, const std::string& site, const AnalysisConfig& cfg);

// One window per PHQ record: the 14 complete local days before the
// completion date, with coverage, season/lockdown/pre-COVID labels and the
// inclusion decision. DST exclusion is applied afterwards over the
// participant's full window list.
std::vector<AssessmentWindow> make_windows(const std::string& participant_id,
                                           const std::vector<PhqRecord>& phq_records,
                                           const MinuteSeries& steps, const MinuteSeries& hr,
                                           const std::vector<SleepEpisode>& episodes,
                                           const std::string& site, const AnalysisConfig& cfg);

// Marks, per transition date, the participant's first window whose completion
// date falls on or after it. Windows must belong to one participant and be
// sorted by completion time.
void apply_dst_exclusion(std::vector<AssessmentWindow>& windows,
                         const std::vector<std::int64_t>& transition_days);

void write_windows_csv(const std::vector<AssessmentWindow>& windows, const std::string& path);

}  // namespace circadia

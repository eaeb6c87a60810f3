#include "circadia/windowing.hpp"

#include <algorithm>

#include "circadia/csv.hpp"
#include "circadia/log.hpp"

namespace circadia {

const char* season_name(Season s) {
  switch (s) {
    case Season::winter: return "winter";
    case Season::spring: return "spring";
    case Season::summer: return "summer";
    case Season::autumn: return "autumn";
  }
  return "?";
}

Season season_of(const CivilDate& date) {
  const int m = date.month, d = date.day;
  switch (m) {
    case 1:
    case 2: return Season::winter;
    case 3: return d <= 19 ? Season::winter : Season::spring;
    case 4:
    case 5: return Season::spring;
    case 6: return d <= 20 ? Season::spring : Season::summer;
    case 7:
    case 8: return Season::summer;
    case 9: return d <= 22 ? Season::summer : Season::autumn;
    case 10:
    case 11: return Season::autumn;
    default: return d <= 20 ? Season::autumn : Season::winter;
  }
}

double day_coverage_fraction(const MinuteSeries& series, std::int64_t day) {
  const std::int64_t first = day * kMinutesPerDay;
  std::int64_t lo = std::max(first, series.start_minute);
  std::int64_t hi = std::min(first + kMinutesPerDay, series.end_minute());
  int present = 0;
  for (std::int64_t m = lo; m < hi; ++m)
    if (!is_missing(series.values[static_cast<std::size_t>(m - series.start_minute)])) ++present;
  return static_cast<double>(present) / kMinutesPerDay;
}

bool lockdown_flag(std::int64_t day, const std::string& site, const AnalysisConfig& cfg) {
  if (!cfg.site_known(site)) throw ConfigError("lockdown_flag: unknown site '" + site + "'");
  auto it = cfg.lockdown_ranges.find(site);
  if (it == cfg.lockdown_ranges.end()) return false;
  for (const DayRange& r : it->second)
    if (r.contains(day)) return true;
  return false;
}

std::vector<AssessmentWindow> make_windows(const std::string& participant_id,
                                           const std::vector<PhqRecord>& phq_records,
                                           const MinuteSeries& steps, const MinuteSeries& hr,
                                           const std::vector<SleepEpisode>& episodes,
                                           const std::string& site, const AnalysisConfig& cfg) {
  std::vector<AssessmentWindow> windows;
  windows.reserve(phq_records.size());

  for (const PhqRecord& phq : phq_records) {
    AssessmentWindow w;
    w.participant_id = participant_id;
    w.phq = phq;
    w.end_day = phq.completion.local_day();
    w.start_day = w.end_day - kWindowDays;
    w.season = season_of_day(w.end_day);
    w.lockdown = lockdown_flag(w.end_day, site, cfg);
    w.pre_covid = w.end_day < cfg.pre_covid_cutoff_day;

    for (int d = 0; d < kWindowDays; ++d) {
      std::int64_t day = w.start_day + d;
      w.coverage.step_fraction[static_cast<std::size_t>(d)] = day_coverage_fraction(steps, day);
      w.coverage.hr_fraction[static_cast<std::size_t>(d)] = day_coverage_fraction(hr, day);
    }
    for (const SleepEpisode& ep : episodes) {
      std::int64_t day = ep.offset.local_day();
      if (day >= w.start_day && day < w.end_day)
        w.coverage.has_sleep[static_cast<std::size_t>(day - w.start_day)] = true;
    }
    for (int d = 0; d < kWindowDays; ++d)
      if (w.coverage.day_qualifies(d, cfg.coverage_min)) ++w.coverage.qualifying_days;

    w.included = w.coverage.qualifying_days >= cfg.qualifying_days_min;
    if (!w.included) w.exclusion_reason = "insufficient_coverage";
    windows.push_back(std::move(w));
  }
  return windows;
}

void apply_dst_exclusion(std::vector<AssessmentWindow>& windows,
                         const std::vector<std::int64_t>& transition_days) {
  for (std::int64_t transition : transition_days) {
    AssessmentWindow* first_after = nullptr;
    for (AssessmentWindow& w : windows) {
      if (w.end_day < transition) continue;
      if (first_after == nullptr || w.end_day < first_after->end_day ||
          (w.end_day == first_after->end_day &&
           w.phq.completion.local_seconds() < first_after->phq.completion.local_seconds()))
        first_after = &w;
    }
    if (first_after == nullptr || first_after->dst_excluded) continue;
    first_after->dst_excluded = true;
    first_after->included = false;
    if (!first_after->exclusion_reason.empty()) first_after->exclusion_reason += ";";
    first_after->exclusion_reason += "dst_transition";
  }
}

void write_windows_csv(const std::vector<AssessmentWindow>& windows, const std::string& path) {
  CsvWriter w(path);
  w.header(
      "participant_id,phq_time,score,season,lockdown,pre_covid,qualifying_days,included,"
      "exclusion_reason");
  for (const AssessmentWindow& win : windows) {
    w.field(win.participant_id)
        .field(format_local_datetime(win.phq.completion))
        .field(win.phq.score)
        .field(season_name(win.season))
        .field(win.lockdown ? 1 : 0)
        .field(win.pre_covid ? 1 : 0)
        .field(win.coverage.qualifying_days)
        .field(win.included ? 1 : 0)
        .field(win.exclusion_reason);
    w.end_row();
  }
  w.close();
}

}  // namespace circadia

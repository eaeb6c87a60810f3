#include "circadia/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "circadia/activity.hpp"
#include "circadia/cosinor.hpp"
#include "circadia/log.hpp"
#include "circadia/parallel.hpp"
#include "circadia/sleep.hpp"

namespace circadia {

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  double h = q * (static_cast<double>(values.size()) - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::string ExtractSummary::to_text() const {
  auto pct = [&](int n) {
    return windows_included > 0 ? 100.0 * n / windows_included : 0.0;
  };
  char buf[1024];
  std::snprintf(
      buf, sizeof(buf),
      "participants, n: %d\n"
      "age, median (IQR): %.2f [%.2f, %.2f]\n"
      "female, n (%%): %d (%.1f%%)\n"
      "employed, n (%%): %d (%.1f%%)\n"
      "windows, n: %d (of %d assessed)\n"
      "windows per participant, median (IQR): %.2f [%.2f, %.2f]\n"
      "records in winter, n (%%): %d (%.1f%%)\n"
      "records in spring, n (%%): %d (%.1f%%)\n"
      "records in summer, n (%%): %d (%.1f%%)\n"
      "records in autumn, n (%%): %d (%.1f%%)\n"
      "records before pre-COVID cutoff, n (%%): %d (%.1f%%)\n",
      participants, age_median, age_q1, age_q3, female,
      participants > 0 ? 100.0 * female / participants : 0.0, employed,
      participants > 0 ? 100.0 * employed / participants : 0.0, windows_included, windows_total,
      windows_per_participant_median, wpp_q1, wpp_q3,
      included_by_season[0], pct(included_by_season[0]), included_by_season[1],
      pct(included_by_season[1]), included_by_season[2], pct(included_by_season[2]),
      included_by_season[3], pct(included_by_season[3]), included_pre_covid,
      pct(included_pre_covid));
  return buf;
}

namespace {

struct ParticipantOutput {
  std::vector<AssessmentWindow> windows;
  FeatureTable features;
  RejectLog rejects;
};

const std::vector<std::int64_t>& transitions_for(const AnalysisConfig& cfg,
                                                 const std::string& site, bool& warned) {
  static const std::vector<std::int64_t> none;
  auto it = cfg.dst_transitions.find(site);
  if (it != cfg.dst_transitions.end()) return it->second;
  if (!warned) {
    log::warn("no DST transition dates configured for site '" + site +
              "'; no DST exclusions applied");
    warned = true;
  }
  return none;
}

ParticipantOutput process_participant(const std::string& id, const Cohort& cohort,
                                      const AnalysisConfig& cfg,
                                      const std::vector<std::int64_t>& transitions) {
  ParticipantOutput out;
  const ParticipantProfile& profile = cohort.profiles.at(id);

  static const std::vector<SleepEpoch> no_epochs;
  static const std::vector<StepSample> no_steps;
  static const std::vector<HrSample> no_hr;
  auto sleep_it = cohort.sleep.find(id);
  auto steps_it = cohort.steps.find(id);
  auto hr_it = cohort.hr.find(id);

  MinuteSeries steps = densify_steps(
      id, steps_it == cohort.steps.end() ? no_steps : steps_it->second, out.rejects);
  MinuteSeries hr =
      resample_hr_to_minutes(id, hr_it == cohort.hr.end() ? no_hr : hr_it->second);
  std::vector<SleepEpisode> episodes = build_episodes(
      sleep_it == cohort.sleep.end() ? no_epochs : sleep_it->second, cfg.episode_gap_minutes);

  out.windows = make_windows(id, cohort.phq.at(id), steps, hr, episodes, profile.site, cfg);
  apply_dst_exclusion(out.windows, transitions);

  for (const AssessmentWindow& w : out.windows) {
    if (!w.included) continue;
    FeatureRow row;
    row.participant_id = id;
    row.phq_completion = w.phq.completion;
    row.score = w.phq.score;
    row.season = w.season;
    row.lockdown = w.lockdown;
    row.pre_covid = w.pre_covid;
    row.age_years = profile.age_years;
    row.gender = profile.gender;
    row.site = profile.site;
    row.employed = profile.employed;

    SleepFeatureSet sf = sleep_features(episodes, w.start_day, w.end_day, cfg.sleep_main_only);
    row.set_value(FeatureId::sleep_duration, sf.duration_mean);
    row.set_value(FeatureId::sleep_variability, sf.variability);
    row.set_value(FeatureId::sleep_onset, sf.onset_mean);
    row.set_value(FeatureId::sleep_offset, sf.offset_mean);

    std::vector<std::int64_t> step_days;
    for (int d = 0; d < kWindowDays; ++d)
      if (!cfg.daily_step_qualifying_only || w.coverage.day_qualifies(d, cfg.coverage_min))
        step_days.push_back(w.start_day + d);
    ActivityFeatureSet af = activity_features(steps, w.start_day, step_days, cfg);
    row.set_value(FeatureId::daily_step, af.daily_step);
    row.set_value(FeatureId::step_iv, af.step_iv);
    row.set_value(FeatureId::step_is, af.step_is);
    row.set_value(FeatureId::l5_onset, af.l5_onset);
    row.set_value(FeatureId::m10_onset, af.m10_onset);

    CosinorFit cf = cosinor_fit_window(hr, w.start_day);
    if (cf.valid) {
      row.set_value(FeatureId::hr_mesor, cf.mesor);
      row.set_value(FeatureId::hr_amplitude, cf.amplitude);
      if (!cf.acrophase_degenerate) row.set_value(FeatureId::hr_acrophase, cf.acrophase_mod);
    }

    out.features.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ExtractResult run_extract(const Cohort& cohort, const AnalysisConfig& cfg, RejectLog& rejects,
                          int threads) {
  // Participants with PHQ records and a profile, in deterministic order.
  std::vector<std::string> ids;
  for (const auto& [id, records] : cohort.phq) {
    if (records.empty()) continue;
    if (cohort.profiles.count(id) == 0) {
      rejects.add("phq8.csv", 0,
                  id + ": no participant profile; " + std::to_string(records.size()) +
                      " window(s) dropped");
      continue;
    }
    ids.push_back(id);
  }

  bool dst_warned = false;
  std::map<std::string, const std::vector<std::int64_t>*> transitions;
  for (const std::string& id : ids) {
    const std::string& site = cohort.profiles.at(id).site;
    if (transitions.count(site) == 0)
      transitions[site] = &transitions_for(cfg, site, dst_warned);
  }

  std::vector<ParticipantOutput> outputs(ids.size());
  parallel_for(static_cast<int>(ids.size()), threads, [&](int i) {
    const std::string& id = ids[static_cast<std::size_t>(i)];
    outputs[static_cast<std::size_t>(i)] =
        process_participant(id, cohort, cfg, *transitions.at(cohort.profiles.at(id).site));
  });

  ExtractResult result;
  for (ParticipantOutput& out : outputs) {
    for (AssessmentWindow& w : out.windows) result.windows.push_back(std::move(w));
    for (FeatureRow& r : out.features) result.features.push_back(std::move(r));
    for (RejectLog::Entry& e : out.rejects.entries) rejects.entries.push_back(std::move(e));
  }

  // Summary over included windows.
  ExtractSummary& s = result.summary;
  s.windows_total = static_cast<int>(result.windows.size());
  std::map<std::string, int> included_per_participant;
  for (const AssessmentWindow& w : result.windows) {
    if (!w.included) continue;
    ++s.windows_included;
    ++included_per_participant[w.participant_id];
    ++s.included_by_season[static_cast<std::size_t>(w.season)];
    if (w.pre_covid) ++s.included_pre_covid;
  }
  std::vector<double> ages, counts;
  for (const auto& [id, n] : included_per_participant) {
    const ParticipantProfile& p = cohort.profiles.at(id);
    ages.push_back(p.age_years);
    counts.push_back(n);
    if (p.gender == Gender::female) ++s.female;
    if (p.employed) ++s.employed;
  }
  s.participants = static_cast<int>(included_per_participant.size());
  s.age_median = quantile(ages, 0.5);
  s.age_q1 = quantile(ages, 0.25);
  s.age_q3 = quantile(ages, 0.75);
  s.windows_per_participant_median = quantile(counts, 0.5);
  s.wpp_q1 = quantile(counts, 0.25);
  s.wpp_q3 = quantile(counts, 0.75);
  return result;
}

}  // namespace circadia

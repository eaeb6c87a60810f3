#pragma once

#include <array>
#include <string>
#include <vector>

#include "circadia/config.hpp"
#include "circadia/features.hpp"
#include "circadia/ingest.hpp"
#include "circadia/windowing.hpp"

namespace circadia {

// Cohort roll-up printed after extraction; percentages are over included
// windows, participant statistics over participants contributing at least
// one included window.
struct ExtractSummary {
  int participants = 0;
  double age_median = 0, age_q1 = 0, age_q3 = 0;
  int female = 0;
  int employed = 0;
  int windows_total = 0;
  int windows_included = 0;
  double windows_per_participant_median = 0, wpp_q1 = 0, wpp_q3 = 0;
  std::array<int, 4> included_by_season{};  // indexed by Season
  int included_pre_covid = 0;

  std::string to_text() const;
};

struct ExtractResult {
  std::vector<AssessmentWindow> windows;  // all windows, flagged
  FeatureTable features;                  // one row per included window
  ExtractSummary summary;
};

// Windows, inclusion flags and features for a parsed cohort. Participants
// are processed on the worker pool; output order is participant order and
// does not depend on the thread count. PHQ records without a participant
// profile are dropped into the reject log.
ExtractResult run_extract(const Cohort& cohort, const AnalysisConfig& cfg, RejectLog& rejects,
                          int threads = 1);

// Sample quantile with linear interpolation (R type 7).
double quantile(std::vector<double> values, double q);

}  // namespace circadia

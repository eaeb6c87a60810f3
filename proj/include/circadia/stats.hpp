#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circadia/config.hpp"
#include "circadia/features.hpp"
#include "circadia/lmm.hpp"

namespace circadia {

struct StatsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Subset { all, pre_covid };
const char* subset_name(Subset s);

// Fixed-effect structure of the three nested models:
//   model 1: phq8 + covariates
//   model 2: + season dummies (winter reference)
//   model 3: + phq8 x season interactions
struct ModelSpec {
  int model_id = 1;  // 1..3
  Subset subset = Subset::all;
};

struct Design {
  Matrix X;
  Vector y;
  std::vector<int> group_sizes;
  std::vector<std::string> group_ids;       // one per group, row-block order
  std::vector<std::string> column_names;    // X columns, fixed order
  std::vector<std::string> dropped_columns; // constant covariates removed
  int n_dropped_na = 0;                     // rows lost to an unavailable response
  double age_center = 0;                    // sample mean used for centering
};

// Design matrix for one (feature, model, subset). Column order: intercept,
// phq8, age_c, female, site dummies (first configured site is the
// reference), employed, lockdown, season dummies, interactions. Covariate
// indicator columns that are constant on the subset (a pre-COVID run has no
// lockdown rows) are dropped and recorded; a constant response or a
// rank-deficient design after drops is an error naming the columns.
Design build_design(const FeatureTable& table, FeatureId response, const ModelSpec& spec,
                    const AnalysisConfig& cfg);

// BH step-up: sorted ascending, adjusted p_(i) = min(1, min_{j>=i} m p_(j)/j),
// restored to input order.
std::vector<double> bh_adjust(const std::vector<double>& p_values);

// Model 3 if the 2->3 adjusted p is below alpha, else Model 2 if 1->2 is,
// else Model 1.
int select_model(double p_adj_12, double p_adj_23, double alpha = 0.05);

struct CoefficientRow {
  std::string feature;
  Subset subset = Subset::all;
  int model_id = 1;
  std::string term;
  double estimate = 0;
  double se = 0;
  double z = 0;
  double p_raw = 1;
  double p_adj = 1;  // BH across the features sharing (subset, model, term)
  std::string stars;
};

struct LrtRow {
  std::string feature;
  Subset subset = Subset::all;
  std::string comparison;  // "1v2" or "2v3"
  std::optional<double> stat;
  std::optional<int> df;
  std::optional<double> p_raw;
  std::optional<double> p_adj;  // BH across features within (subset, comparison)
  std::optional<int> selected_model;
  std::string note;  // e.g. "unavailable" when the response could not be fit
};

struct AnalysisResult {
  std::vector<CoefficientRow> coefficients;
  std::vector<LrtRow> lrt_rows;
};

// Full analysis: every feature x {model 1,2,3} x subset, likelihood-ratio
// tests, BH adjustment per family, model selection. Fits for different
// (feature, subset) pairs run on the worker pool.
AnalysisResult run_analysis(const FeatureTable& table, const AnalysisConfig& cfg,
                            const std::vector<Subset>& subsets, int threads = 1);

std::string stars_for(double p_adj);

void write_model_fits_csv(const AnalysisResult& result, const std::string& path);
void write_lrt_csv(const AnalysisResult& result, const std::string& path);

struct SeasonalProfileRow {
  std::string feature;
  int month = 1;  // 1..12, of the PHQ completion date
  double mean_z = 0;
  std::optional<double> sd_z;
  int n = 0;
};

// Per participant, each feature is z-normalized across that participant's
// windows (circular features on unwrapped deviations from the participant's
// circular mean); normalized values aggregate by calendar month. Participants
// with fewer than two usable windows or zero variance are excluded. Throws
// StatsError("nothing to normalize") when no feature has any usable
// participant.
std::vector<SeasonalProfileRow> seasonal_profile(const FeatureTable& table);

void write_seasonal_profile_csv(const std::vector<SeasonalProfileRow>& rows,
                                const std::string& path);

}  // namespace circadia

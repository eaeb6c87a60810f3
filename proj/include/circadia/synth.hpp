#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "circadia/features.hpp"
#include "circadia/ingest.hpp"

namespace circadia {

// Additive per-season deltas applied to the raw-stream templates; winter is
// the reference and keeps all-zero deltas.
struct SeasonDeltas {
  double hr_acrophase = 0;  // minutes
  double hr_amplitude = 0;  // bpm
  double hr_mesor = 0;      // bpm
  double sleep_duration = 0;  // minutes of episode span
  double sleep_onset = 0;     // minutes
  double step_rate = 0;       // steps/minute inside the active block
};

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_participants = 20;
  int windows_per_participant = 10;
  std::string level = "raw";  // raw | panel

  std::vector<std::string> sites = {"UK", "ES", "NL"};
  // First completion lands 14 days after a participant's start; starts are
  // staggered across the year so every season is populated.
  std::int64_t base_start_day = 17897;  // 2019-01-01
  double phq_mean = 8;
  double phq_sd = 5;

  // Feature-level panel: y = X beta + u + eps per feature.
  double sigma_u = 1;
  double sigma_e = 1;
  // feature -> term -> coefficient; overrides the built-in defaults.
  std::map<std::string, std::map<std::string, double>> panel_effects;

  // Raw-stream templates (winter reference).
  double sleep_onset_mod = 1410;   // 23:30
  double sleep_onset_sd = 0;       // minutes
  double sleep_span_min = 480;     // episode span, minutes
  double sleep_span_sd = 0;
  double awake_fraction = 0;       // awake epochs inside an episode
  double step_rate = 12;           // steps/minute in the active block
  bool step_poisson = false;
  int active_start_mod = 480;   // 08:00
  int active_end_mod = 1080;    // 18:00
  double hr_mesor = 70;
  double hr_amplitude = 5;
  double hr_acrophase_mod = 840;  // 14:00
  double hr_noise_sd = 0;
  std::array<SeasonDeltas, 4> season_deltas{};  // indexed by Season

  double minute_dropout = 0;  // per-minute, per-stream
  double day_dropout = 0;     // whole participant-day, all streams
};

SynthConfig parse_synth_config(const std::string& path);

// Term names usable in panel effects.
inline constexpr std::array<std::string_view, 12> kPanelTerms = {
    "intercept",     "phq8",          "spring",        "summer",
    "autumn",        "phq8_x_spring", "phq8_x_summer", "phq8_x_autumn",
    "age",           "female",        "employed",      "lockdown"};

// Planted coefficients for one feature, resolved from defaults + overrides.
std::map<std::string, double> resolved_panel_effects(const SynthConfig& cfg,
                                                     std::string_view feature);

// Feature-level panel in the features.csv schema. Responses follow the
// random-intercept generative model with the resolved coefficients.
FeatureTable generate_feature_panel(const SynthConfig& cfg);

// Raw five-stream cohort with planted circadian structure. Season deltas are
// keyed on the season of each window's completion date and applied to all 14
// of its days, mirroring the dummy-coded regression structure.
Cohort generate_raw_cohort(const SynthConfig& cfg);

void write_raw_csvs(const Cohort& cohort, const std::string& out_dir);
void write_truth_json(const SynthConfig& cfg, const std::string& path);

}  // namespace circadia

#include "circadia/synth.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "circadia/circular.hpp"
#include "circadia/csv.hpp"
#include "circadia/rng.hpp"
#include "circadia/windowing.hpp"

namespace circadia {

namespace {

// Built-in planted coefficients; magnitudes sized like the real cohort so
// recovery tests run at realistic signal-to-noise.
const std::map<std::string, std::map<std::string, double>>& default_effects() {
  static const std::map<std::string, std::map<std::string, double>> defaults = {
      {"sleep_duration_min", {{"intercept", 450}, {"phq8", 0.5}}},
      {"sleep_onset_mod", {{"intercept", 1410}, {"phq8", 0.55}}},
      {"sleep_offset_mod", {{"intercept", 450}, {"phq8", 1.1}}},
      {"sleep_variability_min", {{"intercept", 45}, {"phq8", 0.95}}},
      {"daily_step", {{"intercept", 8000}, {"phq8", -90}, {"summer", 400}}},
      {"step_iv", {{"intercept", 0.8}, {"phq8", 0.001}}},
      {"step_is", {{"intercept", 0.45}, {"phq8", -0.001}}},
      {"l5_onset_mod", {{"intercept", 120}, {"phq8", 0.45}}},
      {"m10_onset_mod", {{"intercept", 520}, {"phq8", 0.7}, {"summer", 20}}},
      {"hr_mesor_bpm", {{"intercept", 70}, {"phq8", -0.03}}},
      {"hr_amplitude_bpm", {{"intercept", 5}, {"phq8", -0.04}}},
      {"hr_acrophase_mod", {{"intercept", 840}, {"phq8", 0.5}, {"summer", 68}}},
  };
  return defaults;
}

int season_index(Season s) { return static_cast<int>(s); }

struct SynthParticipant {
  std::string id;
  ParticipantProfile profile;
  int offset_minutes = 0;
  std::int64_t start_day = 0;
};

SynthParticipant make_participant(const SynthConfig& cfg, int i) {
  SynthParticipant p;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "P%04d", i + 1);
  p.id = buf;
  SplitMix64 rng = keyed_rng(cfg.seed, "profile", i);
  p.profile.age_years = 20 + static_cast<int>(rng.next() % 50);
  p.profile.gender = rng.uniform() < 0.7 ? Gender::female : Gender::male;
  p.profile.site = cfg.sites[static_cast<std::size_t>(i) % cfg.sites.size()];
  p.profile.employed = rng.uniform() < 0.5;
  p.offset_minutes = p.profile.site == "UK" ? 0 : 60;
  p.start_day =
      cfg.base_start_day + (static_cast<std::int64_t>(i) * 365) / std::max(cfg.n_participants, 1);
  return p;
}

LocalStamp stamp_at(std::int64_t local_day, int minute_of_day, int offset_minutes) {
  std::int64_t local_sec = local_day * kSecondsPerDay + std::int64_t{60} * minute_of_day;
  return LocalStamp{local_sec - std::int64_t{60} * offset_minutes, offset_minutes};
}

int phq_score(const SynthConfig& cfg, int participant, int window) {
  SplitMix64 rng = keyed_rng(cfg.seed, "phq", participant, window);
  double v = std::round(rng.normal(cfg.phq_mean, cfg.phq_sd));
  return static_cast<int>(std::clamp(v, 0.0, 24.0));
}

}  // namespace

std::map<std::string, double> resolved_panel_effects(const SynthConfig& cfg,
                                                     std::string_view feature) {
  // Explicit per-feature effects replace the built-in set wholesale, so a
  // test that plants {intercept, phq8} gets exactly that model and nothing
  // else.
  if (auto it = cfg.panel_effects.find(std::string(feature)); it != cfg.panel_effects.end())
    return it->second;
  const auto& defaults = default_effects();
  if (auto it = defaults.find(std::string(feature)); it != defaults.end()) return it->second;
  return {};
}

FeatureTable generate_feature_panel(const SynthConfig& cfg) {
  FeatureTable table;
  const std::int64_t cutoff = 18322;  // 2020-03-01, default pre-COVID boundary

  std::array<std::map<std::string, double>, kFeatureCount> effects;
  for (int f = 0; f < kFeatureCount; ++f)
    effects[static_cast<std::size_t>(f)] =
        resolved_panel_effects(cfg, feature_column(static_cast<FeatureId>(f)));

  for (int i = 0; i < cfg.n_participants; ++i) {
    SynthParticipant sp = make_participant(cfg, i);
    SplitMix64 u_rng = keyed_rng(cfg.seed, "intercepts", i);
    std::array<double, kFeatureCount> u;
    for (double& v : u) v = u_rng.normal(0.0, cfg.sigma_u);

    for (int k = 0; k < cfg.windows_per_participant; ++k) {
      FeatureRow row;
      row.participant_id = sp.id;
      std::int64_t completion_day = sp.start_day + 14 * (k + 1);
      row.phq_completion = stamp_at(completion_day, 12 * 60, sp.offset_minutes);
      row.score = phq_score(cfg, i, k);
      row.season = season_of_day(completion_day);
      row.lockdown = false;
      row.pre_covid = completion_day < cutoff;
      row.age_years = sp.profile.age_years;
      row.gender = sp.profile.gender;
      row.site = sp.profile.site;
      row.employed = sp.profile.employed;

      SplitMix64 eps_rng = keyed_rng(cfg.seed, "panel_eps", i, k);
      for (int f = 0; f < kFeatureCount; ++f) {
        const auto& eff = effects[static_cast<std::size_t>(f)];
        double y = u[static_cast<std::size_t>(f)];
        for (const auto& [term, beta] : eff) {
          double x = 0;
          if (term == "intercept") x = 1;
          else if (term == "phq8") x = row.score;
          else if (term == "age") x = row.age_years;
          else if (term == "female") x = row.gender == Gender::female ? 1 : 0;
          else if (term == "employed") x = row.employed ? 1 : 0;
          else if (term == "lockdown") x = row.lockdown ? 1 : 0;
          else if (term == "spring") x = row.season == Season::spring ? 1 : 0;
          else if (term == "summer") x = row.season == Season::summer ? 1 : 0;
          else if (term == "autumn") x = row.season == Season::autumn ? 1 : 0;
          else if (term == "phq8_x_spring") x = row.season == Season::spring ? row.score : 0;
          else if (term == "phq8_x_summer") x = row.season == Season::summer ? row.score : 0;
          else if (term == "phq8_x_autumn") x = row.season == Season::autumn ? row.score : 0;
          else if (term.rfind("site_", 0) == 0) x = row.site == term.substr(5) ? 1 : 0;
          y += beta * x;
        }
        y += eps_rng.normal(0.0, cfg.sigma_e);
        row.set_value(static_cast<FeatureId>(f), y);
      }
      table.push_back(std::move(row));
    }
  }
  return table;
}

Cohort generate_raw_cohort(const SynthConfig& cfg) {
  Cohort cohort;

  for (int i = 0; i < cfg.n_participants; ++i) {
    SynthParticipant sp = make_participant(cfg, i);
    cohort.profiles[sp.id] = sp.profile;

    auto& phq = cohort.phq[sp.id];
    auto& sleep = cohort.sleep[sp.id];
    auto& steps = cohort.steps[sp.id];
    auto& hr = cohort.hr[sp.id];

    const double w = kTwoPi / kMinutesPerDay;

    for (int k = 0; k < cfg.windows_per_participant; ++k) {
      std::int64_t completion_day = sp.start_day + 14 * (k + 1);
      phq.push_back({stamp_at(completion_day, 12 * 60, sp.offset_minutes), phq_score(cfg, i, k)});

      const Season season = season_of_day(completion_day);
      const SeasonDeltas& delta = cfg.season_deltas[static_cast<std::size_t>(season_index(season))];
      const double acro = cfg.hr_acrophase_mod + delta.hr_acrophase;
      const double amp = cfg.hr_amplitude + delta.hr_amplitude;
      const double mesor = cfg.hr_mesor + delta.hr_mesor;
      const double rate = cfg.step_rate + delta.step_rate;

      for (std::int64_t day = completion_day - kWindowDays; day < completion_day; ++day) {
        SplitMix64 day_rng = keyed_rng(cfg.seed, "daydrop", i, day);
        if (cfg.day_dropout > 0 && day_rng.uniform() < cfg.day_dropout) continue;

        // Night ending on this day's morning.
        {
          SplitMix64 rng = keyed_rng(cfg.seed, "sleep", i, day);
          double onset_mod = cfg.sleep_onset_mod + delta.sleep_onset +
                             (cfg.sleep_onset_sd > 0 ? rng.normal(0, cfg.sleep_onset_sd) : 0);
          double span = cfg.sleep_span_min + delta.sleep_duration +
                        (cfg.sleep_span_sd > 0 ? rng.normal(0, cfg.sleep_span_sd) : 0);
          span = std::max(span, 60.0);
          int n_epochs = static_cast<int>(std::lround(span * 60 / kEpochSeconds));
          std::int64_t onset_sec =
              (day - 1) * kSecondsPerDay + static_cast<std::int64_t>(std::lround(onset_mod * 60));
          for (int e = 0; e < n_epochs; ++e) {
            std::int64_t local_sec = onset_sec + static_cast<std::int64_t>(e) * kEpochSeconds;
            LocalStamp st{local_sec - std::int64_t{60} * sp.offset_minutes, sp.offset_minutes};
            Stage stage;
            if (cfg.awake_fraction > 0 && rng.uniform() < cfg.awake_fraction) {
              stage = Stage::awake;
            } else {
              switch ((e / 40) % 3) {
                case 0: stage = Stage::light; break;
                case 1: stage = Stage::deep; break;
                default: stage = Stage::rem; break;
              }
            }
            sleep.push_back({st, stage});
          }
        }

        // Steps and HR, minute by minute; dropout draws advance in lockstep
        // with the minutes so rates couple across runs.
        SplitMix64 step_drop = keyed_rng(cfg.seed, "drop_steps", i, day);
        SplitMix64 hr_drop = keyed_rng(cfg.seed, "drop_hr", i, day);
        SplitMix64 step_rng = keyed_rng(cfg.seed, "steps", i, day);
        SplitMix64 hr_rng = keyed_rng(cfg.seed, "hr", i, day);
        for (int m = 0; m < kMinutesPerDay; ++m) {
          const bool active = m >= cfg.active_start_mod && m < cfg.active_end_mod;
          double step_value = active ? rate : 0.0;
          if (cfg.step_poisson)
            step_value = static_cast<double>(step_rng.poisson(step_value));
          double u_step = step_drop.uniform();
          if (u_step >= cfg.minute_dropout)
            steps.push_back({stamp_at(day, m, sp.offset_minutes), step_value});

          double bpm = mesor + amp * std::cos(w * (m - acro));
          if (cfg.hr_noise_sd > 0) bpm += hr_rng.normal(0, cfg.hr_noise_sd);
          bpm = std::clamp(bpm, 20.0, 250.0);
          double u_hr = hr_drop.uniform();
          if (u_hr >= cfg.minute_dropout) hr.push_back({stamp_at(day, m, sp.offset_minutes), bpm});
        }
      }
    }
  }
  return cohort;
}

void write_raw_csvs(const Cohort& cohort, const std::string& out_dir) {
  {
    CsvWriter w(out_dir + "/participants.csv");
    w.header("participant_id,age_years,gender,site,employed");
    for (const auto& [id, p] : cohort.profiles) {
      w.field(id).field(p.age_years).field(gender_name(p.gender)).field(p.site).field(
          p.employed ? 1 : 0);
      w.end_row();
    }
    w.close();
  }
  {
    CsvWriter w(out_dir + "/phq8.csv");
    w.header("participant_id,utc_epoch_seconds,local_offset_minutes,score");
    for (const auto& [id, records] : cohort.phq)
      for (const PhqRecord& r : records) {
        w.field(id)
            .field(r.completion.utc_epoch_seconds)
            .field(r.completion.local_offset_minutes)
            .field(r.score);
        w.end_row();
      }
    w.close();
  }
  {
    CsvWriter w(out_dir + "/sleep.csv");
    w.header("participant_id,utc_epoch_seconds,local_offset_minutes,stage");
    for (const auto& [id, epochs] : cohort.sleep)
      for (const SleepEpoch& e : epochs) {
        w.field(id)
            .field(e.stamp.utc_epoch_seconds)
            .field(e.stamp.local_offset_minutes)
            .field(stage_name(e.stage));
        w.end_row();
      }
    w.close();
  }
  {
    CsvWriter w(out_dir + "/steps.csv");
    w.header("participant_id,utc_epoch_seconds,local_offset_minutes,steps");
    for (const auto& [id, rows] : cohort.steps)
      for (const StepSample& s : rows) {
        w.field(id)
            .field(s.stamp.utc_epoch_seconds)
            .field(s.stamp.local_offset_minutes)
            .field(s.steps);
        w.end_row();
      }
    w.close();
  }
  {
    CsvWriter w(out_dir + "/hr.csv");
    w.header("participant_id,utc_epoch_seconds,local_offset_minutes,bpm");
    for (const auto& [id, rows] : cohort.hr)
      for (const HrSample& s : rows) {
        w.field(id).field(s.stamp.utc_epoch_seconds).field(s.stamp.local_offset_minutes).field(
            s.bpm);
        w.end_row();
      }
    w.close();
  }
}

void write_truth_json(const SynthConfig& cfg, const std::string& path) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["level"] = cfg.level;
  j["n_participants"] = cfg.n_participants;
  j["windows_per_participant"] = cfg.windows_per_participant;
  if (cfg.level == "panel") {
    j["sigma_u"] = cfg.sigma_u;
    j["sigma_e"] = cfg.sigma_e;
    nlohmann::json effects;
    for (int f = 0; f < kFeatureCount; ++f) {
      std::string name(feature_column(static_cast<FeatureId>(f)));
      effects[name] = resolved_panel_effects(cfg, name);
    }
    j["effects"] = effects;
  } else {
    nlohmann::json tmpl;
    tmpl["sleep_onset_mod"] = cfg.sleep_onset_mod;
    tmpl["sleep_span_min"] = cfg.sleep_span_min;
    tmpl["step_rate"] = cfg.step_rate;
    tmpl["active_start_mod"] = cfg.active_start_mod;
    tmpl["active_end_mod"] = cfg.active_end_mod;
    tmpl["hr_mesor"] = cfg.hr_mesor;
    tmpl["hr_amplitude"] = cfg.hr_amplitude;
    tmpl["hr_acrophase_mod"] = cfg.hr_acrophase_mod;
    j["template"] = tmpl;
    const char* names[4] = {"winter", "spring", "summer", "autumn"};
    nlohmann::json deltas;
    for (int s = 0; s < 4; ++s) {
      const SeasonDeltas& d = cfg.season_deltas[static_cast<std::size_t>(s)];
      deltas[names[s]] = {{"hr_acrophase", d.hr_acrophase}, {"hr_amplitude", d.hr_amplitude},
                          {"hr_mesor", d.hr_mesor},         {"sleep_duration", d.sleep_duration},
                          {"sleep_onset", d.sleep_onset},   {"step_rate", d.step_rate}};
    }
    j["season_deltas"] = deltas;
    j["minute_dropout"] = cfg.minute_dropout;
    j["day_dropout"] = cfg.day_dropout;
  }
  write_file(path, j.dump(2) + "\n");
}

SynthConfig parse_synth_config(const std::string& path) {
  SynthConfig cfg;
  std::string text = read_file(path);

  auto as_double = [](const std::string& key, const std::string& value) {
    auto v = parse_double(value);
    if (!v) throw ConfigError("synth key '" + key + "': bad number '" + value + "'");
    return *v;
  };
  auto as_int = [](const std::string& key, const std::string& value) {
    auto v = parse_int64(value);
    if (!v) throw ConfigError("synth key '" + key + "': bad integer '" + value + "'");
    return *v;
  };

  auto season_from = [](const std::string& name) -> std::optional<Season> {
    if (name == "winter") return Season::winter;
    if (name == "spring") return Season::spring;
    if (name == "summer") return Season::summer;
    if (name == "autumn") return Season::autumn;
    return std::nullopt;
  };

  for (const auto& [key, value] : read_key_values(text)) {
    if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_int(key, value));
    else if (key == "n_participants") cfg.n_participants = static_cast<int>(as_int(key, value));
    else if (key == "windows_per_participant")
      cfg.windows_per_participant = static_cast<int>(as_int(key, value));
    else if (key == "level") {
      if (value != "raw" && value != "panel")
        throw ConfigError("synth key 'level': expected raw|panel");
      cfg.level = value;
    } else if (key == "sites") cfg.sites = split_list(value);
    else if (key == "start_date") {
      auto day = parse_date(value);
      if (!day) throw ConfigError("synth key 'start_date': bad date");
      cfg.base_start_day = *day;
    } else if (key == "phq_mean") cfg.phq_mean = as_double(key, value);
    else if (key == "phq_sd") cfg.phq_sd = as_double(key, value);
    else if (key == "sigma_u") cfg.sigma_u = as_double(key, value);
    else if (key == "sigma_e") cfg.sigma_e = as_double(key, value);
    else if (key == "sleep_onset_mod") cfg.sleep_onset_mod = as_double(key, value);
    else if (key == "sleep_onset_sd") cfg.sleep_onset_sd = as_double(key, value);
    else if (key == "sleep_span_min") cfg.sleep_span_min = as_double(key, value);
    else if (key == "sleep_span_sd") cfg.sleep_span_sd = as_double(key, value);
    else if (key == "awake_fraction") cfg.awake_fraction = as_double(key, value);
    else if (key == "step_rate") cfg.step_rate = as_double(key, value);
    else if (key == "step_poisson") cfg.step_poisson = value == "1" || value == "true";
    else if (key == "active_start_mod") cfg.active_start_mod = static_cast<int>(as_int(key, value));
    else if (key == "active_end_mod") cfg.active_end_mod = static_cast<int>(as_int(key, value));
    else if (key == "hr_mesor") cfg.hr_mesor = as_double(key, value);
    else if (key == "hr_amplitude") cfg.hr_amplitude = as_double(key, value);
    else if (key == "hr_acrophase_mod") cfg.hr_acrophase_mod = as_double(key, value);
    else if (key == "hr_noise_sd") cfg.hr_noise_sd = as_double(key, value);
    else if (key == "minute_dropout") cfg.minute_dropout = as_double(key, value);
    else if (key == "day_dropout") cfg.day_dropout = as_double(key, value);
    else if (key.rfind("season.", 0) == 0) {
      // season.<name>.<field> = value
      std::string rest = key.substr(7);
      std::size_t dot = rest.find('.');
      if (dot == std::string::npos) throw ConfigError("bad synth key '" + key + "'");
      auto season = season_from(rest.substr(0, dot));
      if (!season) throw ConfigError("bad season in synth key '" + key + "'");
      SeasonDeltas& d = cfg.season_deltas[static_cast<std::size_t>(season_index(*season))];
      std::string field = rest.substr(dot + 1);
      double v = as_double(key, value);
      if (field == "hr_acrophase") d.hr_acrophase = v;
      else if (field == "hr_amplitude") d.hr_amplitude = v;
      else if (field == "hr_mesor") d.hr_mesor = v;
      else if (field == "sleep_duration") d.sleep_duration = v;
      else if (field == "sleep_onset") d.sleep_onset = v;
      else if (field == "step_rate") d.step_rate = v;
      else throw ConfigError("unknown season field in synth key '" + key + "'");
    } else if (key.rfind("panel.", 0) == 0) {
      // panel.<feature>.<term> = beta
      std::string rest = key.substr(6);
      std::size_t dot = rest.find('.');
      if (dot == std::string::npos) throw ConfigError("bad synth key '" + key + "'");
      std::string feature = rest.substr(0, dot);
      std::string term = rest.substr(dot + 1);
      bool known = false;
      for (std::string_view col : kFeatureColumns)
        if (col == feature) known = true;
      if (!known) throw ConfigError("unknown feature in synth key '" + key + "'");
      cfg.panel_effects[feature][term] = as_double(key, value);
    } else {
      throw ConfigError("unknown synth config key '" + key + "'");
    }
  }
  if (cfg.n_participants < 0 || cfg.windows_per_participant < 0)
    throw ConfigError("synth config: negative cohort sizes");
  if (cfg.minute_dropout < 0 || cfg.minute_dropout >= 1 || cfg.day_dropout < 0 ||
      cfg.day_dropout >= 1)
    throw ConfigError("synth config: dropout rates must lie in [0,1)");
  return cfg;
}

}  // namespace circadia

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "circadia/config.hpp"
#include "circadia/csv.hpp"
#include "circadia/features.hpp"
#include "circadia/ingest.hpp"
#include "circadia/log.hpp"
#include "circadia/pipeline.hpp"
#include "circadia/stats.hpp"
#include "circadia/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;   // usage, config or input errors
constexpr int kExitEmpty = 2;   // structurally valid inputs, empty result

namespace fs = std::filesystem;
using circadia::AnalysisConfig;
using circadia::Subset;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
};

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw circadia::ConfigError("cannot create output directory: " + dir);
}

AnalysisConfig load_analysis_config(const std::string& path) {
  if (path.empty()) return AnalysisConfig{};
  return circadia::parse_analysis_config(path);
}

// The manifest is written before any output so a rerun can be checked
// against it; it carries no clocks, so identical runs are byte-identical.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& inputs,
                    const std::string& config_path, std::uint64_t config_hash,
                    const std::string& subset) {
  nlohmann::json j;
  j["tool"] = "circadia";
  j["version"] = kVersion;
  j["command"] = command;
  nlohmann::json in;
  for (const auto& [k, v] : inputs) in[k] = v;
  j["inputs"] = in;
  j["config"] = config_path.empty() ? "(defaults)" : config_path;
  j["config_hash"] = config_hash;
  if (!subset.empty()) j["subset"] = subset;
  j["out_dir"] = out_dir;
  circadia::write_file(out_dir + "/manifest.json", j.dump(2) + "\n");
}

std::vector<Subset> subsets_from(const std::string& selector) {
  if (selector == "all") return {Subset::all};
  if (selector == "pre_covid") return {Subset::pre_covid};
  return {Subset::all, Subset::pre_covid};
}

int cmd_extract(const CommonOpts& common, const std::string& data_dir, int bin_minutes,
                const std::string& l5m10_mode) {
  AnalysisConfig cfg = load_analysis_config(common.config_path);
  if (bin_minutes > 0) {
    if (circadia::kMinutesPerDay % bin_minutes != 0)
      throw circadia::ConfigError("--bin-minutes must divide 1440");
    cfg.bin_minutes = bin_minutes;
  }
  if (!l5m10_mode.empty())
    cfg.l5m10_mode =
        l5m10_mode == "per-day" ? circadia::L5M10Mode::per_day : circadia::L5M10Mode::profile;

  const std::vector<std::pair<std::string, std::string>> inputs = {
      {"participants", data_dir + "/participants.csv"}, {"phq8", data_dir + "/phq8.csv"},
      {"sleep", data_dir + "/sleep.csv"},               {"steps", data_dir + "/steps.csv"},
      {"hr", data_dir + "/hr.csv"}};
  for (const auto& [k, path] : inputs)
    if (!fs::exists(path)) {
      std::fprintf(stderr, "circadia extract: missing input file %s\n", path.c_str());
      return kExitUsage;
    }

  ensure_out_dir(common.out_dir);
  write_manifest(common.out_dir, "extract", inputs, common.config_path, cfg.source_hash, "");

  circadia::Cohort cohort;
  circadia::RejectLog rejects;
  circadia::parse_participants(inputs[0].second, cfg, cohort, rejects);
  circadia::parse_phq8(inputs[1].second, cohort, rejects);
  circadia::parse_sleep(inputs[2].second, cohort, rejects);
  circadia::parse_steps(inputs[3].second, cohort, rejects);
  circadia::parse_hr(inputs[4].second, cohort, rejects);

  circadia::ExtractResult result = circadia::run_extract(cohort, cfg, rejects, common.threads);

  circadia::write_windows_csv(result.windows, common.out_dir + "/windows.csv");
  circadia::write_features_csv(result.features, common.out_dir + "/features.csv");
  rejects.write_csv(common.out_dir + "/rejects.csv");
  std::fputs(result.summary.to_text().c_str(), stdout);

  if (result.features.empty()) {
    std::fprintf(stderr, "circadia extract: no included windows\n");
    return kExitEmpty;
  }
  return kExitOk;
}

int cmd_fit(const CommonOpts& common, const std::string& features_path,
            const std::string& subset_selector) {
  AnalysisConfig cfg = load_analysis_config(common.config_path);
  ensure_out_dir(common.out_dir);
  write_manifest(common.out_dir, "fit", {{"features", features_path}}, common.config_path,
                 cfg.source_hash, subset_selector);

  circadia::FeatureTable table = circadia::read_features_csv(features_path);
  if (table.empty()) {
    std::fprintf(stderr, "circadia fit: features table is empty\n");
    return kExitEmpty;
  }
  for (Subset s : subsets_from(subset_selector)) {
    bool any = false;
    for (const circadia::FeatureRow& r : table)
      if (s == Subset::all || r.pre_covid) {
        any = true;
        break;
      }
    if (!any) {
      std::fprintf(stderr, "circadia fit: empty subset '%s'\n", circadia::subset_name(s));
      return kExitEmpty;
    }
  }

  circadia::AnalysisResult result =
      circadia::run_analysis(table, cfg, subsets_from(subset_selector), common.threads);
  circadia::write_model_fits_csv(result, common.out_dir + "/model_fits.csv");
  circadia::write_lrt_csv(result, common.out_dir + "/lrt.csv");
  return kExitOk;
}

int cmd_simulate(const CommonOpts& common, std::int64_t seed_override) {
  circadia::SynthConfig synth;
  std::uint64_t config_hash = 0;
  if (!common.config_path.empty()) {
    synth = circadia::parse_synth_config(common.config_path);
    config_hash = circadia::fnv1a_hash(circadia::read_file(common.config_path));
  }
  if (seed_override >= 0) synth.seed = static_cast<std::uint64_t>(seed_override);

  ensure_out_dir(common.out_dir);
  write_manifest(common.out_dir, "simulate", {}, common.config_path, config_hash, "");

  if (synth.level == "panel") {
    circadia::FeatureTable table = circadia::generate_feature_panel(synth);
    circadia::write_features_csv(table, common.out_dir + "/features.csv");
  } else {
    circadia::Cohort cohort = circadia::generate_raw_cohort(synth);
    circadia::write_raw_csvs(cohort, common.out_dir);
  }
  circadia::write_truth_json(synth, common.out_dir + "/truth.json");
  return kExitOk;
}

int cmd_report(const CommonOpts& common, const std::string& features_path) {
  AnalysisConfig cfg = load_analysis_config(common.config_path);
  ensure_out_dir(common.out_dir);
  write_manifest(common.out_dir, "report", {{"features", features_path}}, common.config_path,
                 cfg.source_hash, "");

  circadia::FeatureTable table = circadia::read_features_csv(features_path);
  try {
    auto rows = circadia::seasonal_profile(table);
    circadia::write_seasonal_profile_csv(rows, common.out_dir + "/seasonal_profile.csv");
  } catch (const circadia::StatsError& e) {
    std::fprintf(stderr, "circadia report: %s\n", e.what());
    return kExitEmpty;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circadian rhythm feature extraction and mixed-model analysis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "analysis or synth config file");
    sub->add_option("--out", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", common.threads, "worker thread cap")->capture_default_str();
  };

  std::string data_dir = ".";
  int bin_minutes = 0;
  std::string l5m10_mode;
  CLI::App* extract = app.add_subcommand("extract", "extract features from raw CSV streams");
  add_common(extract);
  extract->add_option("--data", data_dir, "directory holding the five input CSVs")
      ->capture_default_str();
  extract->add_option("--bin-minutes", bin_minutes, "IV/IS bin width (default 60)");
  extract->add_option("--l5m10-mode", l5m10_mode, "profile|per-day")
      ->check(CLI::IsMember({"profile", "per-day"}));

  std::string features_path = "features.csv";
  std::string subset_selector = "all";
  CLI::App* fit = app.add_subcommand("fit", "fit the three nested mixed models per feature");
  add_common(fit);
  fit->add_option("--features", features_path, "features.csv from extract")
      ->capture_default_str();
  fit->add_option("--subset", subset_selector, "all|pre_covid|both")
      ->check(CLI::IsMember({"all", "pre_covid", "both"}))
      ->capture_default_str();

  std::int64_t seed_override = -1;
  CLI::App* simulate = app.add_subcommand("simulate", "generate a synthetic cohort");
  add_common(simulate);
  simulate->add_option("--seed", seed_override, "override the config seed");

  CLI::App* report = app.add_subcommand("report", "monthly normalized seasonal profiles");
  add_common(report);
  report->add_option("--features", features_path, "features.csv from extract")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract->parsed()) return cmd_extract(common, data_dir, bin_minutes, l5m10_mode);
    if (fit->parsed()) return cmd_fit(common, features_path, subset_selector);
    if (simulate->parsed()) return cmd_simulate(common, seed_override);
    if (report->parsed()) return cmd_report(common, features_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "circadia: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

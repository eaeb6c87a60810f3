#include "circadia/config.hpp"

#include <algorithm>
#include <charconv>

#include "circadia/csv.hpp"
#include "circadia/time.hpp"

namespace circadia {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::int64_t require_date(const std::string& key, const std::string& value) {
  auto day = parse_date(value);
  if (!day) throw ConfigError("config key '" + key + "': bad date '" + value + "'");
  return *day;
}

std::int64_t require_int(const std::string& key, const std::string& value) {
  auto v = parse_int64(value);
  if (!v) throw ConfigError("config key '" + key + "': bad integer '" + value + "'");
  return *v;
}

double require_double(const std::string& key, const std::string& value) {
  auto v = parse_double(value);
  if (!v) throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  return *v;
}

DayRange require_range(const std::string& key, const std::string& value) {
  std::size_t colon = value.find(':');
  if (colon == std::string::npos)
    throw ConfigError("config key '" + key + "': expected 'YYYY-MM-DD:YYYY-MM-DD', got '" +
                      value + "'");
  DayRange r;
  r.first = require_date(key, trim(value.substr(0, colon)));
  r.last = require_date(key, trim(value.substr(colon + 1)));
  if (r.last < r.first) throw ConfigError("config key '" + key + "': range end before start");
  return r;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = trim(std::string_view(text).substr(
        pos, (nl == std::string::npos ? text.size() : nl) - pos));
    pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line missing '=': " + line);
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    std::string item =
        trim(std::string_view(value).substr(start, (comma == std::string::npos ? value.size() : comma) - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool AnalysisConfig::site_known(const std::string& site) const {
  return std::find(sites.begin(), sites.end(), site) != sites.end();
}

AnalysisConfig parse_analysis_config(const std::string& path) {
  AnalysisConfig cfg;
  std::string text = read_file(path);
  cfg.source_hash = fnv1a_hash(text);

  for (const auto& [key, value] : read_key_values(text)) {
    if (key == "sites") {
      cfg.sites = split_list(value);
      if (cfg.sites.empty()) throw ConfigError("config key 'sites': empty list");
    } else if (key == "coverage_min") {
      cfg.coverage_min = require_double(key, value);
    } else if (key == "qualifying_days_min") {
      cfg.qualifying_days_min = static_cast<int>(require_int(key, value));
    } else if (key == "pre_covid_cutoff") {
      cfg.pre_covid_cutoff_day = require_date(key, value);
    } else if (key == "episode_gap_min") {
      cfg.episode_gap_minutes = static_cast<int>(require_int(key, value));
    } else if (key == "bin_minutes") {
      int b = static_cast<int>(require_int(key, value));
      if (b <= 0 || kMinutesPerDay % b != 0)
        throw ConfigError("config key 'bin_minutes': must divide 1440");
      cfg.bin_minutes = b;
    } else if (key == "l5m10_mode") {
      if (value == "profile")
        cfg.l5m10_mode = L5M10Mode::profile;
      else if (value == "per-day")
        cfg.l5m10_mode = L5M10Mode::per_day;
      else
        throw ConfigError("config key 'l5m10_mode': expected profile|per-day");
    } else if (key == "daily_step_days") {
      if (value == "qualifying")
        cfg.daily_step_qualifying_only = true;
      else if (value == "all")
        cfg.daily_step_qualifying_only = false;
      else
        throw ConfigError("config key 'daily_step_days': expected qualifying|all");
    } else if (key == "sleep_scope") {
      if (value == "main")
        cfg.sleep_main_only = true;
      else if (value == "all")
        cfg.sleep_main_only = false;
      else
        throw ConfigError("config key 'sleep_scope': expected main|all");
    } else if (key.rfind("dst.", 0) == 0) {
      std::string site = key.substr(4);
      std::vector<std::int64_t> days;
      for (const std::string& d : split_list(value)) days.push_back(require_date(key, d));
      std::sort(days.begin(), days.end());
      cfg.dst_transitions[site] = std::move(days);
    } else if (key.rfind("lockdown.", 0) == 0) {
      std::string site = key.substr(9);
      std::vector<DayRange> ranges;
      for (const std::string& r : split_list(value)) ranges.push_back(require_range(key, r));
      cfg.lockdown_ranges[site] = std::move(ranges);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  for (const auto& [site, _] : cfg.dst_transitions)
    if (!cfg.site_known(site)) throw ConfigError("dst config references unknown site '" + site + "'");
  for (const auto& [site, _] : cfg.lockdown_ranges)
    if (!cfg.site_known(site))
      throw ConfigError("lockdown config references unknown site '" + site + "'");

  return cfg;
}

}  // namespace circadia

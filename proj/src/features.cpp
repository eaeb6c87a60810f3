#include "circadia/features.hpp"

#include <string>

#include "circadia/csv.hpp"

namespace circadia {

namespace {

std::string features_header() {
  std::string h =
      "participant_id,phq_utc,phq_offset_min,score,season,lockdown,pre_covid,age_years,gender,"
      "site,employed";
  for (std::string_view col : kFeatureColumns) {
    h += ',';
    h += col;
  }
  return h;
}

std::optional<Season> parse_season(std::string_view s) {
  if (s == "winter") return Season::winter;
  if (s == "spring") return Season::spring;
  if (s == "summer") return Season::summer;
  if (s == "autumn") return Season::autumn;
  return std::nullopt;
}

std::optional<bool> parse_flag(std::string_view s) {
  if (s == "0") return false;
  if (s == "1") return true;
  return std::nullopt;
}

}  // namespace

void write_features_csv(const FeatureTable& table, const std::string& path) {
  CsvWriter w(path);
  w.header(features_header());
  for (const FeatureRow& r : table) {
    w.field(r.participant_id)
        .field(r.phq_completion.utc_epoch_seconds)
        .field(r.phq_completion.local_offset_minutes)
        .field(r.score)
        .field(season_name(r.season))
        .field(r.lockdown ? 1 : 0)
        .field(r.pre_covid ? 1 : 0)
        .field(r.age_years)
        .field(gender_name(r.gender))
        .field(r.site)
        .field(r.employed ? 1 : 0);
    for (const auto& v : r.values) w.field(v);
    w.end_row();
  }
  w.close();
}

FeatureTable read_features_csv(const std::string& path) {
  FeatureTable table;
  CsvReader reader(path, features_header());
  std::vector<std::string_view> f;
  const std::size_t expected = 11 + kFeatureCount;
  while (reader.next(f)) {
    if (f.size() != expected)
      throw CsvError(path + " row " + std::to_string(reader.row_number()) + ": expected " +
                     std::to_string(expected) + " fields");
    auto bad = [&](const char* what) {
      return CsvError(path + " row " + std::to_string(reader.row_number()) + ": bad " + what);
    };
    FeatureRow r;
    r.participant_id.assign(f[0]);
    auto utc = parse_int64(f[1]);
    auto off = parse_int64(f[2]);
    if (!utc || !off || !valid_offset_minutes(*off)) throw bad("stamp");
    r.phq_completion = {*utc, static_cast<int>(*off)};
    auto score = parse_int64(f[3]);
    if (!score || *score < 0 || *score > 24) throw bad("score");
    r.score = static_cast<int>(*score);
    auto season = parse_season(f[4]);
    if (!season) throw bad("season");
    r.season = *season;
    auto lockdown = parse_flag(f[5]);
    auto pre_covid = parse_flag(f[6]);
    if (!lockdown || !pre_covid) throw bad("flag");
    r.lockdown = *lockdown;
    r.pre_covid = *pre_covid;
    auto age = parse_int64(f[7]);
    if (!age || *age < 16 || *age > 120) throw bad("age_years");
    r.age_years = static_cast<int>(*age);
    auto gender = parse_gender(f[8]);
    if (!gender) throw bad("gender");
    r.gender = *gender;
    r.site.assign(f[9]);
    auto employed = parse_flag(f[10]);
    if (!employed) throw bad("employed flag");
    r.employed = *employed;
    for (int k = 0; k < kFeatureCount; ++k) {
      std::string_view cell = f[11 + static_cast<std::size_t>(k)];
      if (cell == "NA") continue;
      auto v = parse_double(cell);
      if (!v) throw bad(std::string(kFeatureColumns[static_cast<std::size_t>(k)]).c_str());
      r.values[static_cast<std::size_t>(k)] = *v;
    }
    table.push_back(std::move(r));
  }
  return table;
}

}  // namespace circadia

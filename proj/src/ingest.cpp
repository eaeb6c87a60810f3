#include "circadia/ingest.hpp"

#include <algorithm>
#include <cmath>

#include "circadia/csv.hpp"
#include "circadia/log.hpp"

namespace circadia {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::awake: return "awake";
    case Stage::light: return "light";
    case Stage::deep: return "deep";
    case Stage::rem: return "rem";
  }
  return "?";
}

const char* gender_name(Gender g) {
  switch (g) {
    case Gender::female: return "female";
    case Gender::male: return "male";
    case Gender::other: return "other";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view s) {
  if (s == "awake") return Stage::awake;
  if (s == "light") return Stage::light;
  if (s == "deep") return Stage::deep;
  if (s == "rem") return Stage::rem;
  return std::nullopt;
}

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "female") return Gender::female;
  if (s == "male") return Gender::male;
  if (s == "other") return Gender::other;
  return std::nullopt;
}

void RejectLog::write_csv(const std::string& path) const {
  CsvWriter w(path);
  w.header("file,row,reason");
  for (const Entry& e : entries) {
    w.field(e.file).field(static_cast<std::int64_t>(e.row)).field(e.reason);
    w.end_row();
  }
  w.close();
}

std::size_t MinuteSeries::present_count() const {
  std::size_t n = 0;
  for (double v : values)
    if (!is_missing(v)) ++n;
  return n;
}

namespace {

std::string base_name(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

// Parses the shared (participant_id, utc, offset) prefix of a stamped row.
bool parse_stamp_fields(const std::vector<std::string_view>& f, std::string& id,
                        LocalStamp& stamp, std::string& reason) {
  id.assign(f[0]);
  if (id.empty()) {
    reason = "empty participant_id";
    return false;
  }
  auto utc = parse_int64(f[1]);
  if (!utc) {
    reason = "bad utc_epoch_seconds";
    return false;
  }
  auto off = parse_int64(f[2]);
  if (!off) {
    reason = "bad local_offset_minutes";
    return false;
  }
  if (!valid_offset_minutes(*off)) {
    reason = "offset out of range";
    return false;
  }
  stamp.utc_epoch_seconds = *utc;
  stamp.local_offset_minutes = static_cast<int>(*off);
  return true;
}

void check_reject_ratio(const std::string& file, std::size_t total, std::size_t rejected) {
  if (total > 0 && rejected * 2 > total)
    throw IngestError(file + ": " + std::to_string(rejected) + " of " + std::to_string(total) +
                      " rows rejected; aborting");
}

template <typename Rec>
void sort_by_time(std::map<std::string, std::vector<Rec>>& per_participant,
                  std::int64_t (*utc_of)(const Rec&)) {
  for (auto& [id, rows] : per_participant) {
    std::stable_sort(rows.begin(), rows.end(), [&](const Rec& a, const Rec& b) {
      return utc_of(a) < utc_of(b);
    });
  }
}

}  // namespace

void parse_participants(const std::string& path, const AnalysisConfig& cfg, Cohort& out,
                        RejectLog& rejects) {
  const std::string file = base_name(path);
  CsvReader reader(path, "participant_id,age_years,gender,site,employed");
  std::vector<std::string_view> f;
  std::size_t rejected = 0;
  while (reader.next(f)) {
    std::string reason;
    if (f.size() != 5) {
      reason = "expected 5 fields";
    } else if (f[0].empty()) {
      reason = "empty participant_id";
    } else if (auto age = parse_int64(f[1]); !age || *age < 16 || *age > 120) {
      reason = "age out of range";
    } else if (auto gender = parse_gender(f[2]); !gender) {
      reason = "unknown gender";
    } else if (!cfg.site_known(std::string(f[3]))) {
      reason = "unknown site '" + std::string(f[3]) + "'";
    } else if (f[4] != "0" && f[4] != "1" && f[4] != "true" && f[4] != "false") {
      reason = "bad employed flag";
    } else if (out.profiles.count(std::string(f[0])) != 0) {
      reason = "duplicate participant";
    } else {
      ParticipantProfile p;
      p.age_years = static_cast<int>(*parse_int64(f[1]));
      p.gender = *parse_gender(f[2]);
      p.site.assign(f[3]);
      p.employed = (f[4] == "1" || f[4] == "true");
      out.profiles.emplace(std::string(f[0]), std::move(p));
      continue;
    }
    rejects.add(file, reader.row_number(), reason);
    ++rejected;
  }
  check_reject_ratio(file, reader.data_rows_read(), rejected);
}

void parse_phq8(const std::string& path, Cohort& out, RejectLog& rejects) {
  const std::string file = base_name(path);
  CsvReader reader(path, "participant_id,utc_epoch_seconds,local_offset_minutes,score");
  std::vector<std::string_view> f;
  std::size_t rejected = 0;
  std::string id, reason;
  while (reader.next(f)) {
    LocalStamp stamp;
    if (f.size() != 4) {
      reason = "expected 4 fields";
    } else if (!parse_stamp_fields(f, id, stamp, reason)) {
    } else if (auto score = parse_int64(f[3]); !score || *score < 0 || *score > 24) {
      reason = "score out of range";
    } else {
      out.phq[id].push_back({stamp, static_cast<int>(*score)});
      continue;
    }
    rejects.add(file, reader.row_number(), reason);
    ++rejected;
  }
  check_reject_ratio(file, reader.data_rows_read(), rejected);
  sort_by_time<PhqRecord>(out.phq, [](const PhqRecord& r) { return r.completion.utc_epoch_seconds; });
}

void parse_sleep(const std::string& path, Cohort& out, RejectLog& rejects) {
  const std::string file = base_name(path);
  CsvReader reader(path, "participant_id,utc_epoch_seconds,local_offset_minutes,stage");
  std::vector<std::string_view> f;
  std::size_t rejected = 0;
  std::string id, reason;
  while (reader.next(f)) {
    LocalStamp stamp;
    if (f.size() != 4) {
      reason = "expected 4 fields";
    } else if (!parse_stamp_fields(f, id, stamp, reason)) {
    } else if (auto stage = parse_stage(f[3]); !stage) {
      reason = "unknown stage '" + std::string(f[3]) + "'";
    } else {
      out.sleep[id].push_back({stamp, *stage});
      continue;
    }
    rejects.add(file, reader.row_number(), reason);
    ++rejected;
  }
  check_reject_ratio(file, reader.data_rows_read(), rejected);
  sort_by_time<SleepEpoch>(out.sleep, [](const SleepEpoch& e) { return e.stamp.utc_epoch_seconds; });
  // Epochs must be strictly ordered; exact duplicate stamps keep the first.
  for (auto& [pid, epochs] : out.sleep) {
    auto last = std::unique(epochs.begin(), epochs.end(), [](const SleepEpoch& a, const SleepEpoch& b) {
      return a.stamp.utc_epoch_seconds == b.stamp.utc_epoch_seconds;
    });
    if (last != epochs.end()) {
      rejects.add(file, 0, "duplicate sleep epochs for " + pid + " dropped (" +
                               std::to_string(epochs.end() - last) + ")");
      epochs.erase(last, epochs.end());
    }
  }
}

void parse_steps(const std::string& path, Cohort& out, RejectLog& rejects) {
  const std::string file = base_name(path);
  CsvReader reader(path, "participant_id,utc_epoch_seconds,local_offset_minutes,steps");
  std::vector<std::string_view> f;
  std::size_t rejected = 0;
  std::string id, reason;
  while (reader.next(f)) {
    LocalStamp stamp;
    if (f.size() != 4) {
      reason = "expected 4 fields";
    } else if (!parse_stamp_fields(f, id, stamp, reason)) {
    } else if (auto steps = parse_double(f[3]); !steps || !(*steps >= 0)) {
      reason = "steps must be >= 0";
    } else {
      out.steps[id].push_back({stamp, *parse_double(f[3])});
      continue;
    }
    rejects.add(file, reader.row_number(), reason);
    ++rejected;
  }
  check_reject_ratio(file, reader.data_rows_read(), rejected);
  sort_by_time<StepSample>(out.steps, [](const StepSample& s) { return s.stamp.utc_epoch_seconds; });
}

void parse_hr(const std::string& path, Cohort& out, RejectLog& rejects) {
  const std::string file = base_name(path);
  CsvReader reader(path, "participant_id,utc_epoch_seconds,local_offset_minutes,bpm");
  std::vector<std::string_view> f;
  std::size_t rejected = 0;
  std::string id, reason;
  while (reader.next(f)) {
    LocalStamp stamp;
    if (f.size() != 4) {
      reason = "expected 4 fields";
    } else if (!parse_stamp_fields(f, id, stamp, reason)) {
    } else if (auto bpm = parse_double(f[3]); !bpm || *bpm < 20 || *bpm > 250) {
      reason = "bpm out of range";
    } else {
      out.hr[id].push_back({stamp, *parse_double(f[3])});
      continue;
    }
    rejects.add(file, reader.row_number(), reason);
    ++rejected;
  }
  check_reject_ratio(file, reader.data_rows_read(), rejected);
  sort_by_time<HrSample>(out.hr, [](const HrSample& s) { return s.stamp.utc_epoch_seconds; });
}

MinuteSeries resample_hr_to_minutes(const std::string& participant_id,
                                    const std::vector<HrSample>& samples) {
  MinuteSeries out;
  out.participant_id = participant_id;
  out.kind = StreamKind::hr;
  if (samples.empty()) return out;

  std::int64_t lo = samples.front().stamp.local_minute();
  std::int64_t hi = lo;
  for (const HrSample& s : samples) {
    std::int64_t m = s.stamp.local_minute();
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  out.start_minute = lo;
  out.values.assign(static_cast<std::size_t>(hi - lo + 1), missing_value());

  std::vector<double> sums(out.values.size(), 0.0);
  std::vector<std::uint32_t> counts(out.values.size(), 0);
  for (const HrSample& s : samples) {
    std::size_t i = static_cast<std::size_t>(s.stamp.local_minute() - lo);
    sums[i] += s.bpm;
    ++counts[i];
  }
  for (std::size_t i = 0; i < out.values.size(); ++i)
    if (counts[i] > 0) out.values[i] = sums[i] / counts[i];
  return out;
}

MinuteSeries densify_steps(const std::string& participant_id,
                           const std::vector<StepSample>& samples, RejectLog& rejects) {
  MinuteSeries out;
  out.participant_id = participant_id;
  out.kind = StreamKind::steps;
  if (samples.empty()) return out;

  std::int64_t lo = samples.front().stamp.local_minute();
  std::int64_t hi = lo;
  for (const StepSample& s : samples) {
    std::int64_t m = s.stamp.local_minute();
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  out.start_minute = lo;
  out.values.assign(static_cast<std::size_t>(hi - lo + 1), missing_value());

  std::vector<bool> conflicted(out.values.size(), false);
  for (const StepSample& s : samples) {
    std::size_t i = static_cast<std::size_t>(s.stamp.local_minute() - lo);
    if (conflicted[i]) continue;
    double& slot = out.values[i];
    if (is_missing(slot)) {
      slot = s.steps;
    } else if (slot != s.steps) {
      conflicted[i] = true;
      slot = missing_value();
      rejects.add("steps.csv", 0,
                  participant_id + ": conflicting duplicate values at local minute " +
                      std::to_string(lo + static_cast<std::int64_t>(i)));
    }
  }
  return out;
}

void write_minute_series_csv(const MinuteSeries& series, const std::string& path) {
  const bool steps = series.kind == StreamKind::steps;
  CsvWriter w(path);
  w.header(steps ? "participant_id,utc_epoch_seconds,local_offset_minutes,steps"
                 : "participant_id,utc_epoch_seconds,local_offset_minutes,bpm");
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (is_missing(series.values[i])) continue;
    std::int64_t minute = series.start_minute + static_cast<std::int64_t>(i);
    w.field(series.participant_id).field(minute * 60).field(std::int64_t{0}).field(series.values[i]);
    w.end_row();
  }
  w.close();
}

}  // namespace circadia

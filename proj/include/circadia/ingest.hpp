#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circadia/config.hpp"
#include "circadia/time.hpp"
#include "circadia/types.hpp"

namespace circadia {

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Stage { awake, light, deep, rem };
enum class Gender { female, male, other };
enum class StreamKind { steps, hr };

const char* stage_name(Stage s);
const char* gender_name(Gender g);
std::optional<Stage> parse_stage(std::string_view s);
std::optional<Gender> parse_gender(std::string_view s);

struct SleepEpoch {
  LocalStamp stamp;  // epoch start; duration is 30 s
  Stage stage = Stage::awake;
};

struct HrSample {
  LocalStamp stamp;
  double bpm = 0;
};

struct StepSample {
  LocalStamp stamp;
  double steps = 0;
};

struct PhqRecord {
  LocalStamp completion;
  int score = 0;  // 0..24
};

struct ParticipantProfile {
  int age_years = 0;  // 16..120
  Gender gender = Gender::other;
  std::string site;
  bool employed = false;
};

// Row-level rejections accumulated across all parsed files.
struct RejectLog {
  struct Entry {
    std::string file;
    std::size_t row = 0;  // 1-based line number in the source file
    std::string reason;
  };
  std::vector<Entry> entries;

  void add(std::string file, std::size_t row, std::string reason) {
    entries.push_back({std::move(file), row, std::move(reason)});
  }
  void write_csv(const std::string& path) const;
};

// All parsed inputs, keyed by participant, time-sorted.
struct Cohort {
  std::map<std::string, ParticipantProfile> profiles;
  std::map<std::string, std::vector<PhqRecord>> phq;
  std::map<std::string, std::vector<SleepEpoch>> sleep;
  std::map<std::string, std::vector<StepSample>> steps;
  std::map<std::string, std::vector<HrSample>> hr;
};

// Each parser validates the header and every row, appends bad rows to the
// reject log, sorts accepted rows by (participant, time), and throws
// IngestError when more than half of the data rows are rejected.
void parse_participants(const std::string& path, const AnalysisConfig& cfg, Cohort& out,
                        RejectLog& rejects);
void parse_phq8(const std::string& path, Cohort& out, RejectLog& rejects);
void parse_sleep(const std::string& path, Cohort& out, RejectLog& rejects);
void parse_steps(const std::string& path, Cohort& out, RejectLog& rejects);
void parse_hr(const std::string& path, Cohort& out, RejectLog& rejects);

// Dense per-minute grid in local wall-clock minutes; NaN marks missing.
struct MinuteSeries {
  std::string participant_id;
  StreamKind kind = StreamKind::steps;
  std::int64_t start_minute = 0;  // local minute index of values[0]
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  std::int64_t end_minute() const { return start_minute + static_cast<std::int64_t>(values.size()); }
  // Value at a local minute index; NaN outside the grid.
  double at_minute(std::int64_t m) const {
    if (m < start_minute || m >= end_minute()) return missing_value();
    return values[static_cast<std::size_t>(m - start_minute)];
  }
  std::size_t present_count() const;
};

// Minute value = mean of the samples falling in that local minute; minutes
// without samples are missing. Input must be time-sorted.
MinuteSeries resample_hr_to_minutes(const std::string& participant_id,
                                    const std::vector<HrSample>& samples);

// Minutes present in the input keep their value; gaps inside the observed
// span stay missing (absence is non-wear, not zero). Duplicate minutes with
// equal values collapse to one; conflicting duplicates reject both.
MinuteSeries densify_steps(const std::string& participant_id,
                           const std::vector<StepSample>& samples, RejectLog& rejects);

// Serializes one minute per row with utc = minute*60, offset = 0; parsing the
// result back reproduces the series bit-exactly.
void write_minute_series_csv(const MinuteSeries& series, const std::string& path);

}  // namespace circadia

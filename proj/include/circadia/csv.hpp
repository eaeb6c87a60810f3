#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace circadia {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal rendering (std::to_chars). NaN renders as "NA".
std::string format_double(double v);
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int64(std::string_view s);

// Line-oriented comma-separated reader over an in-memory copy of the file.
// Verifies the header against the declared schema before yielding rows.
// Fields must not contain commas; values are not quoted in any of the
// schemas this tool reads or writes.
class CsvReader {
 public:
  CsvReader(const std::string& path, std::string_view expected_header);

  // Advances to the next data row; fields are views into the file buffer.
  // Returns false at end of input. Blank lines are skipped.
  bool next(std::vector<std::string_view>& fields);

  // 1-based row number of the row most recently returned (header = row 1).
  std::size_t row_number() const { return row_; }
  std::size_t data_rows_read() const { return data_rows_; }

 private:
  std::string buffer_;
  std::size_t pos_ = 0;
  std::size_t row_ = 1;
  std::size_t data_rows_ = 0;
};

// Buffered writer; '\n' line endings, no quoting.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void header(std::string_view line);
  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v);
  CsvWriter& field(std::int64_t v);
  CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
  CsvWriter& field(const std::optional<double>& v);
  void end_row();
  void close();

 private:
  void flush_if_full();
  std::string path_;
  std::string buf_;
  int fd_ = -1;
  bool row_open_ = false;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// FNV-1a over the raw bytes; used for config fingerprints in run manifests.
std::uint64_t fnv1a_hash(std::string_view bytes);

}  // namespace circadia

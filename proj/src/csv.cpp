#include "circadia/csv.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circadia {

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("cannot write file: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw CsvError("short write: " + path);
}

std::uint64_t fnv1a_hash(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string_view chop_line(const std::string& buf, std::size_t& pos) {
  std::size_t start = pos;
  std::size_t nl = buf.find('\n', start);
  std::size_t end;
  if (nl == std::string::npos) {
    end = buf.size();
    pos = buf.size();
  } else {
    end = nl;
    pos = nl + 1;
  }
  while (end > start && (buf[end - 1] == '\r')) --end;
  return std::string_view(buf).substr(start, end - start);
}

void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

CsvReader::CsvReader(const std::string& path, std::string_view expected_header)
    : buffer_(read_file(path)) {
  if (buffer_.empty()) throw CsvError(path + ": empty file (missing header)");
  std::string_view header = chop_line(buffer_, pos_);
  if (header != expected_header)
    throw CsvError(path + ": header mismatch, expected \"" + std::string(expected_header) +
                   "\" got \"" + std::string(header) + "\"");
}

bool CsvReader::next(std::vector<std::string_view>& fields) {
  while (pos_ < buffer_.size()) {
    ++row_;
    std::string_view line = chop_line(buffer_, pos_);
    if (line.empty()) continue;
    split_fields(line, fields);
    ++data_rows_;
    return true;
  }
  return false;
}

namespace {
constexpr std::size_t kFlushThreshold = 1 << 20;
}

CsvWriter::CsvWriter(const std::string& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd_ < 0) throw CsvError("cannot open for writing: " + path);
  buf_.reserve(kFlushThreshold + 4096);
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void CsvWriter::header(std::string_view line) {
  buf_.append(line);
  buf_.push_back('\n');
  flush_if_full();
}

CsvWriter& CsvWriter::field(std::string_view s) {
  if (row_open_) buf_.push_back(',');
  buf_.append(s);
  row_open_ = true;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::field(std::int64_t v) {
  char tmp[24];
  auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
  (void)ec;
  return field(std::string_view(tmp, static_cast<std::size_t>(ptr - tmp)));
}

CsvWriter& CsvWriter::field(const std::optional<double>& v) {
  return v ? field(*v) : field(std::string_view("NA"));
}

void CsvWriter::end_row() {
  buf_.push_back('\n');
  row_open_ = false;
  flush_if_full();
}

void CsvWriter::flush_if_full() {
  if (buf_.size() < kFlushThreshold) return;
  ssize_t n = ::write(fd_, buf_.data(), buf_.size());
  if (n < 0 || static_cast<std::size_t>(n) != buf_.size())
    throw CsvError("short write: " + path_);
  buf_.clear();
}

void CsvWriter::close() {
  if (fd_ < 0) return;
  if (!buf_.empty()) {
    ssize_t n = ::write(fd_, buf_.data(), buf_.size());
    if (n < 0 || static_cast<std::size_t>(n) != buf_.size())
      throw CsvError("short write: " + path_);
    buf_.clear();
  }
  ::close(fd_);
  fd_ = -1;
}

}  // namespace circadia

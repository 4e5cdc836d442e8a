#pragma once

// Small text helpers shared by the document readers and writers.

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace topogas::text {

/// Shortest decimal form that parses back to the same double.
// Shortest round-trip text; plain decimal unless that would be long (tiny or huge magnitudes).
inline std::string format_double(double value) {
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (res.ec != std::errc{} || res.ptr - buf > 24) res = std::to_chars(buf, buf + sizeof buf, value);
  std::string out(buf, res.ptr);
  return out == "-0" ? "0" : out;
}

inline std::optional<double> parse_double(std::string_view token) {
  double value = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view token) {
  Int value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

/// Splits on any run of the given delimiter characters; empty tokens are dropped.
inline std::vector<std::string_view> split(std::string_view line, std::string_view delims = " \t\r") {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t start = line.find_first_not_of(delims, pos);
    if (start == std::string_view::npos) break;
    const std::size_t end = line.find_first_of(delims, start);
    out.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    pos = end == std::string_view::npos ? line.size() : end;
  }
  return out;
}

inline std::string_view strip_comment(std::string_view line, char marker = '#') {
  const auto hash = line.find(marker);
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Iterates the lines of a document, tracking 1-based line numbers.
class LineReader {
public:
  explicit LineReader(std::string_view doc) : doc_(doc) {}

  bool next(std::string_view &line) {
    if (pos_ >= doc_.size()) return false;
    const auto nl = doc_.find('\n', pos_);
    const auto end = nl == std::string_view::npos ? doc_.size() : nl;
    line = doc_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++number_;
    return true;
  }

  std::size_t line_number() const { return number_; }

private:
  std::string_view doc_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

} // namespace topogas::text

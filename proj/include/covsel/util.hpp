#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covsel {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

/// Input text split into lines: (1-based line number, content without the
/// terminating LF/CRLF). A final empty segment after a trailing LF is not
/// a line.
inline std::vector<std::pair<std::size_t, std::string_view>> split_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    std::string_view line;
    if (pos == std::string_view::npos) {
      if (start == text.size()) break;  // trailing LF already consumed
      line = text.substr(start);
      start = text.size() + 1;
    } else {
      line = text.substr(start, pos - start);
      start = pos + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(++lineno, line);
  }
  return out;
}

template <typename Range>
std::string join(const Range& items, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += sep;
    out += item;
    first = false;
  }
  return out;
}

/// Labels are bare tokens: non-empty, no whitespace, no comma.
inline bool is_valid_label(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  return true;
}

inline std::optional<long> parse_long(std::string_view s) {
  long value = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t value = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

inline std::optional<double> parse_double(std::string_view s) {
  double value = 0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace covsel

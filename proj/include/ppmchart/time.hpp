#pragma once

// Epoch-millisecond timestamps and the small amount of UTC calendar
// arithmetic needed for XES dates and chart gridlines.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace ppmchart {

/// Milliseconds since 1970-01-01T00:00:00Z.
using Millis = std::int64_t;

inline constexpr Millis kSecondMs = 1000;
inline constexpr Millis kMinuteMs = 60 * kSecondMs;
inline constexpr Millis kHourMs = 60 * kMinuteMs;
inline constexpr Millis kDayMs = 24 * kHourMs;

struct ParsedTimestamp {
  Millis epoch_ms = 0;
  /// Fewer than three fractional digits were given.
  bool coarse = false;
};

namespace detail {

inline bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  pos += count;
  return true;
}

inline bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

inline Millis floor_div(Millis a, Millis b) {
  Millis q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff...][Z|+hh:mm|-hh:mm]`. A missing zone means UTC.
/// Digits beyond milliseconds are truncated.
inline std::optional<ParsedTimestamp> parse_iso8601(std::string_view s) {
  using namespace std::chrono;
  std::size_t pos = 0;
  int y, mo, d, h, mi, se;
  if (!detail::read_digits(s, pos, 4, y) || !detail::expect(s, pos, '-') ||
      !detail::read_digits(s, pos, 2, mo) || !detail::expect(s, pos, '-') ||
      !detail::read_digits(s, pos, 2, d))
    return std::nullopt;
  if (pos >= s.size() || (s[pos] != 'T' && s[pos] != ' ')) return std::nullopt;
  ++pos;
  if (!detail::read_digits(s, pos, 2, h) || !detail::expect(s, pos, ':') ||
      !detail::read_digits(s, pos, 2, mi) || !detail::expect(s, pos, ':') ||
      !detail::read_digits(s, pos, 2, se))
    return std::nullopt;
  if (h > 23 || mi > 59 || se > 59) return std::nullopt;

  ParsedTimestamp out;
  int millis = 0;
  std::size_t frac_digits = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      if (frac_digits < 3) millis = millis * 10 + (s[pos] - '0');
      ++frac_digits;
      ++pos;
    }
    if (frac_digits == 0) return std::nullopt;
  }
  for (std::size_t i = frac_digits; i < 3; ++i) millis *= 10;
  out.coarse = frac_digits < 3;

  Millis offset_ms = 0;
  if (pos < s.size()) {
    char z = s[pos];
    if (z == 'Z') {
      ++pos;
    } else if (z == '+' || z == '-') {
      ++pos;
      int oh, om;
      if (!detail::read_digits(s, pos, 2, oh)) return std::nullopt;
      detail::expect(s, pos, ':');
      if (!detail::read_digits(s, pos, 2, om)) return std::nullopt;
      offset_ms = (oh * kHourMs + om * kMinuteMs) * (z == '+' ? 1 : -1);
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  Millis days = sys_days{ymd}.time_since_epoch().count();
  out.epoch_ms = days * kDayMs + h * kHourMs + mi * kMinuteMs + se * kSecondMs + millis - offset_ms;
  return out;
}

/// Formats as `YYYY-MM-DDTHH:MM:SS.mmm+00:00`.
inline std::string format_iso8601(Millis t) {
  using namespace std::chrono;
  Millis days = detail::floor_div(t, kDayMs);
  Millis rem = t - days * kDayMs;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lld+00:00",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long long>(rem / kHourMs),
                static_cast<long long>(rem % kHourMs / kMinuteMs),
                static_cast<long long>(rem % kMinuteMs / kSecondMs),
                static_cast<long long>(rem % kSecondMs));
  return buf;
}

}  // namespace ppmchart

#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>

#include "unavail/error.hpp"

namespace unavail {

using Minutes = std::chrono::minutes;
using Hours = std::chrono::hours;
using Days = std::chrono::days;

// All timestamps are UTC. Reports live on a minute grid, series on an hour grid.
using MinuteTime = std::chrono::sys_time<Minutes>;
using HourTime = std::chrono::sys_time<Hours>;
using DayTime = std::chrono::sys_days;

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline DayTime make_day(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw InvalidInput("invalid calendar date");
  return sys_days{ymd};
}

// "YYYY-MM-DD"
inline DayTime parse_date(std::string_view text) {
  const auto s = detail::trim(text);
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !detail::read_int(s, 0, 4, y) ||
      !detail::read_int(s, 5, 2, m) || !detail::read_int(s, 8, 2, d))
    throw InvalidInput("invalid date '" + std::string(text) + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw InvalidInput("invalid date '" + std::string(text) + "'");
  return sys_days{ymd};
}

// Time of day with an optional zone designator: "HH:MM", "HH:MM:SS", followed by
// nothing, "Z" or "+hh:mm"/"-hh:mm". Returns the UTC offset from midnight; seconds
// are truncated to the minute.
inline Minutes parse_time_of_day(std::string_view text) {
  const auto s = detail::trim(text);
  int hh = 0, mm = 0, ss = 0;
  if (s.size() < 5 || s[2] != ':' || !detail::read_int(s, 0, 2, hh) || !detail::read_int(s, 3, 2, mm))
    throw InvalidInput("invalid time '" + std::string(text) + "'");
  std::size_t pos = 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!detail::read_int(s, pos + 1, 2, ss)) throw InvalidInput("invalid time '" + std::string(text) + "'");
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
  }
  int offset_min = 0;
  if (pos < s.size()) {
    const char z = s[pos];
    if (z == 'Z' && pos + 1 == s.size()) {
      offset_min = 0;
    } else if ((z == '+' || z == '-') && s.size() == pos + 6 && s[pos + 3] == ':') {
      int oh = 0, om = 0;
      if (!detail::read_int(s, pos + 1, 2, oh) || !detail::read_int(s, pos + 4, 2, om))
        throw InvalidInput("invalid time zone in '" + std::string(text) + "'");
      offset_min = (z == '+' ? 1 : -1) * (oh * 60 + om);
    } else {
      throw InvalidInput("invalid time '" + std::string(text) + "'");
    }
  }
  if (hh > 24 || mm > 59 || ss > 60 || (hh == 24 && (mm != 0 || ss != 0)))
    throw InvalidInput("invalid time '" + std::string(text) + "'");
  return Minutes{hh * 60 + mm - offset_min};
}

// ISO-8601 date-time normalized to UTC: "2017-04-18T22:00Z", "2017-04-18T22:00:00Z",
// "2017-04-18T23:00:00+01:00". A missing zone designator is read as UTC.
inline MinuteTime parse_datetime(std::string_view text) {
  const auto s = detail::trim(text);
  if (s.size() < 16 || (s[10] != 'T' && s[10] != ' '))
    throw InvalidInput("invalid timestamp '" + std::string(text) + "'");
  const DayTime day = parse_date(s.substr(0, 10));
  return MinuteTime{day} + parse_time_of_day(s.substr(11));
}

inline std::string format_date(DayTime d) {
  using namespace std::chrono;
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

// "YYYY-MM-DDTHH:MM:SSZ"
inline std::string format_datetime(MinuteTime t) {
  const auto day = std::chrono::floor<Days>(t);
  const auto mins = (t - MinuteTime{day}).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:00Z", format_date(day).c_str(),
                static_cast<int>(mins / 60), static_cast<int>(mins % 60));
  return buf;
}

inline std::string format_datetime(HourTime t) {
  return format_datetime(std::chrono::time_point_cast<Minutes>(t));
}

// "YYYYMMDDHHMM", the query-parameter form used by the platform API.
inline std::string format_compact(MinuteTime t) {
  std::string s = format_datetime(t);
  std::string out;
  for (std::size_t i = 0; i < 16; ++i)
    if (s[i] >= '0' && s[i] <= '9') out.push_back(s[i]);
  return out;
}

// ISO-8601 durations of the shapes that appear as series resolutions:
// PTnM, PTnH, PnD, PnW.
inline Minutes parse_duration(std::string_view text) {
  const auto s = detail::trim(text);
  if (s.size() < 3 || s[0] != 'P') throw InvalidInput("invalid duration '" + std::string(text) + "'");
  std::size_t pos = 1;
  bool in_time = false;
  long total = 0;
  bool any = false;
  while (pos < s.size()) {
    if (s[pos] == 'T') {
      in_time = true;
      ++pos;
      continue;
    }
    long v = 0;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') v = v * 10 + (s[pos++] - '0');
    if (pos == start || pos >= s.size()) throw InvalidInput("invalid duration '" + std::string(text) + "'");
    const char unit = s[pos++];
    if (in_time && unit == 'H') total += v * 60;
    else if (in_time && unit == 'M') total += v;
    else if (!in_time && unit == 'D') total += v * 1440;
    else if (!in_time && unit == 'W') total += v * 7 * 1440;
    else throw InvalidInput("unsupported duration '" + std::string(text) + "'");
    any = true;
  }
  if (!any || total <= 0) throw InvalidInput("invalid duration '" + std::string(text) + "'");
  return Minutes{total};
}

struct IsoWeek {
  int year;
  unsigned week;  // 1..53
};

inline IsoWeek iso_week(DayTime d) {
  using namespace std::chrono;
  // The ISO week belongs to the year holding its Thursday.
  const weekday wd{d};
  const int iso_wd = static_cast<int>(wd.iso_encoding());  // Mon=1..Sun=7
  const sys_days thursday = d + days{4 - iso_wd};
  const year y = year_month_day{thursday}.year();
  const sys_days jan1{y / January / 1};
  const auto ordinal = (thursday - jan1).count();
  return {static_cast<int>(y), static_cast<unsigned>(ordinal / 7 + 1)};
}

}  // namespace unavail

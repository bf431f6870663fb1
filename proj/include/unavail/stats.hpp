#pragma once

// Comparison statistics: winter windows, mean/IQR, reconciliation error,
// per-window autocorrelation and weekly seasonality profiles.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "unavail/error.hpp"
#include "unavail/ingest.hpp"
#include "unavail/time.hpp"

namespace unavail {

// An ordered set of UTC hours over which statistics are evaluated. Winter
// windows have a gap where the holiday weeks are removed.
struct WinterWindow {
  std::string label;
  std::vector<HourTime> hours;
};

inline constexpr int kWinterWeeks = 20;
inline constexpr std::size_t kWinterHours = 18 * 168;

inline DayTime first_sunday_of_november(int year) {
  using namespace std::chrono;
  return sys_days{std::chrono::year{year} / November / Sunday[1]};
}

// Twenty 7-day weeks starting 00:00 UTC on the first Sunday of November, with
// the two weeks that contain 25 December and 1 January removed.
inline WinterWindow winter_window(int start_year) {
  if (start_year < 1971 || start_year > 2200) throw InvalidInput("winter_window: year out of supported range");
  const DayTime first = first_sunday_of_november(start_year);
  const DayTime christmas = make_day(start_year, 12, 25);
  const DayTime new_year = make_day(start_year + 1, 1, 1);
  WinterWindow w;
  char label[16];
  std::snprintf(label, sizeof label, "%02d/%02d", start_year % 100, (start_year + 1) % 100);
  w.label = label;
  w.hours.reserve(kWinterHours);
  for (int week = 0; week < kWinterWeeks; ++week) {
    const DayTime ws = first + Days{7 * week};
    const DayTime we = ws + Days{7};
    const bool holiday = (christmas >= ws && christmas < we) || (new_year >= ws && new_year < we);
    if (holiday) continue;
    const HourTime h0{ws};
    for (int h = 0; h < 168; ++h) w.hours.push_back(h0 + Hours{h});
  }
  return w;
}

// "16/17" -> 2016
inline int parse_season_label(std::string_view label) {
  int a = 0, b = 0;
  if (label.size() != 5 || label[2] != '/' || !detail::read_int(label, 0, 2, a) || !detail::read_int(label, 3, 2, b) ||
      (a + 1) % 100 != b)
    throw InvalidInput("invalid season label '" + std::string(label) + "' (expected e.g. 16/17)");
  return 2000 + a;
}

// Contiguous window [start, end).
inline WinterWindow make_window(std::string label, HourTime start, HourTime end) {
  if (!(end > start)) throw InvalidInput("window '" + label + "': end must follow start");
  WinterWindow w{std::move(label), {}};
  for (HourTime h = start; h < end; h += Hours{1}) w.hours.push_back(h);
  return w;
}

// Hull of a set of windows, as [first hour, last hour + 1).
inline std::pair<HourTime, HourTime> windows_span(const std::vector<WinterWindow>& windows) {
  if (windows.empty()) throw InvalidInput("no analysis windows");
  HourTime lo = HourTime::max(), hi = HourTime::min();
  for (const auto& w : windows) {
    if (w.hours.empty()) throw InvalidInput("window '" + w.label + "' is empty");
    lo = std::min(lo, w.hours.front());
    hi = std::max(hi, w.hours.back() + Hours{1});
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------

// Linear-interpolation sample quantile (Hyndman-Fan type 7).
inline double quantile_type7(std::vector<double> sample, double q) {
  if (sample.empty()) throw InvalidInput("quantile of an empty sample");
  if (!(q >= 0 && q <= 1)) throw InvalidInput("quantile: q must lie in [0, 1]");
  std::sort(sample.begin(), sample.end());
  const double h = (static_cast<double>(sample.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

struct SummaryStats {
  double mean_mw = 0;
  double iqr_mw = 0;
  std::optional<double> recon_error;
  std::map<long, double> acf;
};

// Triples of `series` at the window's hours.
inline std::vector<HourlyOutageTriple> window_triples(const HourlyOutageSeries& series, const WinterWindow& window) {
  std::vector<HourlyOutageTriple> out;
  out.reserve(window.hours.size());
  for (const HourTime h : window.hours) {
    const auto off = (h - series.start).count();
    if (off < 0 || static_cast<std::size_t>(off) >= series.size())
      throw InvalidInput("series '" + series.subject + "' does not cover window '" + window.label + "' (" +
                         format_datetime(h) + ")");
    out.push_back(series.triples[static_cast<std::size_t>(off)]);
  }
  return out;
}

inline std::vector<double> window_means(const HourlyOutageSeries& series, const WinterWindow& window) {
  std::vector<double> v;
  for (const auto& t : window_triples(series, window)) v.push_back(t.o_mean_mw);
  return v;
}

inline std::pair<double, double> sample_mean_iqr(const std::vector<double>& v) {
  if (v.empty()) throw InvalidInput("summary: empty sample");
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return {mean, quantile_type7(v, 0.75) - quantile_type7(v, 0.25)};
}

// Mean and type-7 IQR of o_mean over the hours of all given windows, pooled.
inline std::pair<double, double> summary(const HourlyOutageSeries& series, const std::vector<WinterWindow>& windows) {
  std::vector<double> v;
  for (const auto& w : windows) {
    const auto m = window_means(series, w);
    v.insert(v.end(), m.begin(), m.end());
  }
  return sample_mean_iqr(v);
}

inline std::pair<double, double> summary(const HourlyOutageSeries& series, const WinterWindow& window) {
  return summary(series, std::vector<WinterWindow>{window});
}

// Relative l1 gap between the reconciled mean and the lower bound.
inline double reconciliation_error(const std::vector<HourlyOutageTriple>& triples) {
  double num = 0, den = 0;
  for (const auto& t : triples) {
    num += std::abs(t.o_mean_mw - t.o_min_mw);
    den += std::abs(t.o_mean_mw);
  }
  if (!(den > 0)) throw StatsError("reconciliation error undefined: series has no outage mass");
  return num / den;
}

inline double reconciliation_error(const HourlyOutageSeries& series) { return reconciliation_error(series.triples); }

inline double reconciliation_error(const HourlyOutageSeries& series, const std::vector<WinterWindow>& windows) {
  std::vector<HourlyOutageTriple> all;
  for (const auto& w : windows) {
    const auto t = window_triples(series, w);
    all.insert(all.end(), t.begin(), t.end());
  }
  return reconciliation_error(all);
}

// Biased sample autocorrelation (denominator: lag-0 sum of squares), which
// keeps |r| <= 1.
inline double sample_acf(const std::vector<double>& x, long lag) {
  if (lag < 0) throw InvalidInput("autocorrelation: negative lag");
  if (static_cast<std::size_t>(lag) >= x.size()) throw InvalidInput("autocorrelation: lag exceeds series length");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double den = 0;
  for (double v : x) den += (v - mean) * (v - mean);
  if (!(den > 0)) throw StatsError("autocorrelation undefined for a constant series");
  if (lag == 0) return 1.0;
  double num = 0;
  for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < x.size(); ++t)
    num += (x[t] - mean) * (x[t + static_cast<std::size_t>(lag)] - mean);
  return num / den;
}

// Per-window autocorrelation of the given samples, averaged with equal weight
// across windows. Windows are never joined.
inline std::map<long, double> mean_window_acf(const std::vector<std::pair<std::string, std::vector<double>>>& windows,
                                              const std::vector<long>& lags) {
  if (windows.empty()) throw InvalidInput("autocorrelation: no windows");
  std::map<long, double> out;
  for (long lag : lags) out[lag] = 0.0;
  for (const auto& [label, x] : windows) {
    for (long lag : lags) {
      try {
        out[lag] += sample_acf(x, lag);
      } catch (const StatsError& e) {
        throw StatsError("window '" + label + "': " + e.what());
      } catch (const InvalidInput& e) {
        throw InvalidInput("window '" + label + "': " + e.what());
      }
    }
  }
  for (auto& [lag, v] : out) v /= static_cast<double>(windows.size());
  return out;
}

inline std::map<long, double> autocorrelation(const HourlyOutageSeries& series, const std::vector<WinterWindow>& windows,
                                              const std::vector<long>& lags) {
  std::vector<std::pair<std::string, std::vector<double>>> samples;
  for (const auto& w : windows) samples.emplace_back(w.label, window_means(series, w));
  return mean_window_acf(samples, lags);
}

inline const std::vector<long>& default_acf_lags() {
  static const std::vector<long> lags{1, 6, 24, 168};
  return lags;
}

// ---------------------------------------------------------------------------
// Weekly seasonality

inline constexpr std::size_t kWeeksPerYear = 52;

// Mean value per ISO week (week 53 folded into week 52), averaged over the ISO
// years present, then divided by the mean of the 52 weekly values.
inline std::array<double, kWeeksPerYear> weekly_profile(const std::vector<HourTime>& hours,
                                                        const std::vector<double>& values) {
  if (hours.size() != values.size()) throw InvalidInput("weekly_profile: length mismatch");
  if (hours.empty()) throw InvalidInput("weekly_profile: empty series");
  const auto [lo, hi] = std::minmax_element(hours.begin(), hours.end());
  if (*hi - *lo + Hours{1} < Hours{365 * 24}) throw InvalidInput("weekly_profile: series spans less than one year");

  std::map<std::pair<int, unsigned>, std::pair<double, std::size_t>> per_year_week;
  for (std::size_t i = 0; i < hours.size(); ++i) {
    IsoWeek wk = iso_week(std::chrono::floor<Days>(hours[i]));
    if (wk.week == 53) wk.week = 52;
    auto& acc = per_year_week[{wk.year, wk.week}];
    acc.first += values[i];
    acc.second += 1;
  }
  std::array<double, kWeeksPerYear> sum{};
  std::array<std::size_t, kWeeksPerYear> years{};
  for (const auto& [key, acc] : per_year_week) {
    sum[key.second - 1] += acc.first / static_cast<double>(acc.second);
    years[key.second - 1] += 1;
  }
  std::array<double, kWeeksPerYear> profile{};
  for (std::size_t w = 0; w < kWeeksPerYear; ++w) {
    if (years[w] == 0) throw InvalidInput("weekly_profile: no data for ISO week " + std::to_string(w + 1));
    profile[w] = sum[w] / static_cast<double>(years[w]);
  }
  const double mean = std::accumulate(profile.begin(), profile.end(), 0.0) / static_cast<double>(kWeeksPerYear);
  if (!(mean > 0)) throw StatsError("weekly_profile: series has zero mean");
  for (double& v : profile) v /= mean;
  return profile;
}

inline std::array<double, kWeeksPerYear> weekly_profile(const HourlyOutageSeries& series) {
  std::vector<HourTime> hours(series.size());
  for (std::size_t i = 0; i < hours.size(); ++i) hours[i] = series.hour(i);
  return weekly_profile(hours, series.means());
}

}  // namespace unavail

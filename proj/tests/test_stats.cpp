#include <gtest/gtest.h>

#include <numeric>

#include "unavail/markov_sim.hpp"
#include "unavail/stats.hpp"

using namespace unavail;

namespace {

HourlyOutageSeries series_of(const std::vector<double>& means, HourTime start = HourTime{make_day(2017, 1, 1)}) {
  HourlyOutageSeries s{"GB", Channel::Total, start, {}};
  for (double v : means) s.triples.push_back({v, v, v});
  return s;
}

// Day-by-day calendar walk, independent of the chrono weekday arithmetic.
DayTime first_sunday_by_walk(int year) {
  DayTime d = make_day(year, 11, 1);
  while (std::chrono::weekday{d} != std::chrono::Sunday) d += Days{1};
  return d;
}

}  // namespace

TEST(WinterWindow, KnownStarts) {
  auto w = winter_window(2016);
  EXPECT_EQ(w.label, "16/17");
  EXPECT_EQ(format_datetime(w.hours.front()), "2016-11-06T00:00:00Z");
  EXPECT_EQ(w.hours.size(), 3024u);
  w = winter_window(2020);
  EXPECT_EQ(format_datetime(w.hours.front()), "2020-11-01T00:00:00Z");
}

TEST(WinterWindow, EveryYearHas3024HoursWithoutHolidayWeeks) {
  for (int year = 1990; year <= 2100; ++year) {
    const auto w = winter_window(year);
    ASSERT_EQ(w.hours.size(), 3024u) << year;
    ASSERT_EQ(w.hours.front(), HourTime{first_sunday_by_walk(year)}) << year;
    ASSERT_TRUE(std::is_sorted(w.hours.begin(), w.hours.end()));
    const HourTime xmas{make_day(year, 12, 25)};
    const HourTime ny{make_day(year + 1, 1, 1)};
    ASSERT_FALSE(std::binary_search(w.hours.begin(), w.hours.end(), xmas)) << year;
    ASSERT_FALSE(std::binary_search(w.hours.begin(), w.hours.end(), ny)) << year;
    // exactly two 168-hour gaps removed from a 20-week span
    ASSERT_EQ(w.hours.back() - w.hours.front() + Hours{1}, Hours{20 * 168}) << year;
  }
}

TEST(WinterWindow, SeasonLabels) {
  EXPECT_EQ(parse_season_label("16/17"), 2016);
  EXPECT_EQ(parse_season_label("99/00"), 2099);
  EXPECT_THROW(parse_season_label("16/18"), InvalidInput);
  EXPECT_THROW(parse_season_label("2016"), InvalidInput);
}

TEST(Summary, ConstantAndTypeSevenQuantiles) {
  const auto w = make_window("w", HourTime{make_day(2017, 1, 1)}, HourTime{make_day(2017, 1, 2)});
  const auto [mean, iqr] = summary(series_of(std::vector<double>(24, 100.0)), w);
  EXPECT_EQ(mean, 100.0);
  EXPECT_EQ(iqr, 0.0);

  EXPECT_DOUBLE_EQ(quantile_type7({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_type7({4, 3, 2, 1}, 0.75), 3.25);
  const auto [m2, iqr2] = sample_mean_iqr({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(m2, 2.5);
  EXPECT_DOUBLE_EQ(iqr2, 1.5);
}

TEST(Summary, RequiresCoverage) {
  const auto w = make_window("w", HourTime{make_day(2017, 1, 1)}, HourTime{make_day(2017, 1, 3)});
  EXPECT_THROW(summary(series_of(std::vector<double>(24, 1.0)), w), InvalidInput);
}

TEST(Summary, MeanIsLinear) {
  Rng rng(4);
  std::vector<double> a(500), b(500), ab(500);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<double>(rng.below(10000)) / 4;
    b[i] = static_cast<double>(rng.below(10000)) / 4;
    ab[i] = a[i] + b[i];
  }
  const auto w = make_window("w", HourTime{make_day(2017, 1, 1)}, HourTime{make_day(2017, 1, 1)} + Hours{500});
  EXPECT_NEAR(summary(series_of(ab), w).first, summary(series_of(a), w).first + summary(series_of(b), w).first, 1e-9);
}

TEST(ReconciliationError, Examples) {
  EXPECT_EQ(reconciliation_error(series_of({10, 20, 30})), 0.0);
  EXPECT_EQ(reconciliation_error(std::vector<HourlyOutageTriple>{{100, 200, 300}}), 0.5);
  EXPECT_THROW(reconciliation_error(series_of({0, 0, 0})), StatsError);
}

TEST(ReconciliationError, ScaleInvarianceAndZeroIff) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<HourlyOutageTriple> t, scaled;
    bool conflict = false;
    for (int h = 0; h < 50; ++h) {
      const double lo = static_cast<double>(rng.below(1000));
      const double hi = rng.below(3) == 0 ? lo + static_cast<double>(rng.below(500)) : lo;
      conflict |= hi > lo;
      t.push_back(HourlyOutageTriple::from_bounds(lo, hi));
      scaled.push_back(HourlyOutageTriple::from_bounds(7 * lo, 7 * hi));
    }
    if (std::all_of(t.begin(), t.end(), [](const auto& x) { return x.o_mean_mw == 0; })) continue;
    const double e = reconciliation_error(t);
    EXPECT_NEAR(reconciliation_error(scaled), e, 1e-12);
    EXPECT_EQ(e == 0.0, !conflict);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
  }
}

TEST(Autocorrelation, KnownValuesAndBounds) {
  EXPECT_DOUBLE_EQ(sample_acf({1, 2, 3, 4}, 1), 0.25);
  EXPECT_EQ(sample_acf({1, 2, 3, 4}, 0), 1.0);
  EXPECT_THROW(sample_acf({1, 2}, 2), InvalidInput);
  Rng rng(10);
  std::vector<double> x(400);
  for (auto& v : x) v = rng.uniform01();
  for (long lag = 0; lag < 400; lag += 7) {
    const double r = sample_acf(x, lag);
    ASSERT_LE(std::abs(r), 1.0);
  }
}

TEST(Autocorrelation, WindowsAreAveragedNotJoined) {
  const HourTime t0{make_day(2017, 1, 1)};
  std::vector<double> v(96);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < 48 ? static_cast<double>(i % 5) : static_cast<double>(i * i % 11);
  const auto s = series_of(v, t0);
  const auto w1 = make_window("a", t0, t0 + Hours{48});
  const auto w2 = make_window("b", t0 + Hours{48}, t0 + Hours{96});
  const auto acf = autocorrelation(s, {w1, w2}, {0, 1, 6});
  const std::vector<double> a(v.begin(), v.begin() + 48), b(v.begin() + 48, v.end());
  EXPECT_EQ(acf.at(0), 1.0);
  EXPECT_DOUBLE_EQ(acf.at(1), (sample_acf(a, 1) + sample_acf(b, 1)) / 2);
  EXPECT_DOUBLE_EQ(acf.at(6), (sample_acf(a, 6) + sample_acf(b, 6)) / 2);
}

TEST(Autocorrelation, ZeroVarianceWindowIsNamed) {
  const HourTime t0{make_day(2017, 1, 1)};
  std::vector<double> v(48, 5.0);
  v[3] = 7;
  const auto s = series_of(v, t0);
  try {
    autocorrelation(s, {make_window("ok", t0, t0 + Hours{24}), make_window("flat", t0 + Hours{24}, t0 + Hours{48})},
                    {1});
    FAIL() << "expected StatsError";
  } catch (const StatsError& e) {
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
}

TEST(Autocorrelation, SimulatedUnitMatchesClosedForm) {
  GeneratorUnit u{"u", Fuel::CCGT, 100, 0.9, 50};
  const auto sim = simulate_unit(u, 1'000'000, 8);
  const auto s = series_of(sim.values_mw);
  const auto w = make_window("all", s.start, s.start + Hours{1'000'000});
  const auto acf = autocorrelation(s, {w}, {1});
  EXPECT_NEAR(acf.at(1), 0.978, 0.02);
  EXPECT_NEAR(acf.at(1), theoretical_unit_acf(transition_rates(u), 1), 0.02);
}

TEST(WeeklyProfile, ConstantIsAllOnes) {
  const HourTime t0{make_day(2019, 6, 1)};
  const auto p = weekly_profile(series_of(std::vector<double>(2 * 365 * 24, 42.0), t0));
  for (double v : p) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(WeeklyProfile, HalfYearStep) {
  // ISO year 2021 runs 2021-01-04 .. 2022-01-02
  const HourTime t0{make_day(2021, 1, 4)};
  std::vector<double> v(364 * 24);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i < 26 * 168 ? 2.0 * 10 : 0.0;
  std::vector<HourTime> hours(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) hours[i] = t0 + Hours{static_cast<long>(i)};
  // 364 days is one day short of a year; extend with the first day of week 1 of 2022
  for (int h = 0; h < 24; ++h) {
    hours.push_back(t0 + Hours{364 * 24 + h});
    v.push_back(2.0 * 10);
  }
  const auto p = weekly_profile(hours, v);
  // week 1 gets data from two ISO years (2021 and 2022): both at 20, so still 20.
  for (std::size_t w = 0; w < 26; ++w) EXPECT_NEAR(p[w], 2.0, 1e-12) << w;
  for (std::size_t w = 26; w < 52; ++w) EXPECT_NEAR(p[w], 0.0, 1e-12) << w;
}

TEST(WeeklyProfile, MeanOneAndSpanCheck) {
  Rng rng(13);
  const HourTime t0{make_day(2019, 12, 20)};  // spans ISO week 53 of 2020
  std::vector<double> v(3 * 365 * 24);
  for (auto& x : v) x = 100 + static_cast<double>(rng.below(1000));
  const auto p = weekly_profile(series_of(v, t0));
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0) / 52.0, 1.0, 1e-9);
  EXPECT_THROW(weekly_profile(series_of(std::vector<double>(300 * 24, 1.0), t0)), InvalidInput);
}

TEST(IsoWeek, KnownDates) {
  EXPECT_EQ(iso_week(make_day(2021, 1, 3)).week, 53u);
  EXPECT_EQ(iso_week(make_day(2021, 1, 3)).year, 2020);
  EXPECT_EQ(iso_week(make_day(2021, 1, 4)).week, 1u);
  EXPECT_EQ(iso_week(make_day(2018, 12, 31)).year, 2019);
  EXPECT_EQ(iso_week(make_day(2018, 12, 31)).week, 1u);
}

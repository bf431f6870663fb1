#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "unavail/markov_sim.hpp"

using namespace unavail;

namespace {

GeneratorUnit unit(int mw, double a, double mttr) {
  GeneratorUnit u;
  u.id = "u";
  u.capacity_mw = mw;
  u.availability = a;
  u.mttr_hours = mttr;
  return u;
}

double lag1_autocorrelation(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - m) * (x[i] - m);
    if (i + 1 < x.size()) num += (x[i] - m) * (x[i + 1] - m);
  }
  return num / den;
}

}  // namespace

TEST(TransitionRates, HandEvaluations) {
  auto r = transition_rates(0.9, 50);
  EXPECT_DOUBLE_EQ(r.repair_rate_mu, 0.02);
  EXPECT_NEAR(r.failure_rate_lambda, 1.0 / 450.0, 1e-17);

  r = transition_rates(1.0, 20);
  EXPECT_DOUBLE_EQ(r.repair_rate_mu, 0.05);
  EXPECT_EQ(r.failure_rate_lambda, 0.0);

  r = transition_rates(0.81, 150);
  EXPECT_NEAR(r.repair_rate_mu, 0.0066667, 5e-8);
  EXPECT_NEAR(r.failure_rate_lambda, 0.0015638, 5e-8);
}

TEST(TransitionRates, ClampsAndRejects) {
  const auto r = transition_rates(0.2, 0.5);
  EXPECT_EQ(r.repair_rate_mu, 1.0);
  EXPECT_EQ(r.failure_rate_lambda, 1.0);
  EXPECT_THROW(transition_rates(0.0, 10), InvalidInput);
  EXPECT_THROW(transition_rates(0.9, 0), InvalidInput);
}

TEST(TransitionRates, DefaultTableRowsAreProbabilities) {
  for (const auto& [fuel, p] : default_fuel_params()) {
    const auto r = transition_rates(p.availability, p.mttr_hours);
    EXPECT_GT(r.repair_rate_mu, 0.0) << fuel_name(fuel);
    EXPECT_LT(r.repair_rate_mu, 1.0) << fuel_name(fuel);
    EXPECT_GT(r.failure_rate_lambda, 0.0) << fuel_name(fuel);
    EXPECT_LT(r.failure_rate_lambda, 1.0) << fuel_name(fuel);
  }
}

TEST(SimulateUnit, PerfectlyAvailableUnitNeverFails) {
  const auto s = simulate_unit(unit(300, 1.0, 20), 5000, 17);
  for (double v : s.values_mw) ASSERT_EQ(v, 0.0);
}

TEST(SimulateUnit, UnitRatesAlternateEveryHour) {
  const auto s = simulate_unit(unit(50, 0.5, 1), 1000, 4);
  for (std::size_t h = 1; h < s.values_mw.size(); ++h) ASSERT_NE(s.values_mw[h], s.values_mw[h - 1]);
  for (double v : s.values_mw) ASSERT_TRUE(v == 0.0 || v == 50.0);
}

TEST(SimulateUnit, StationaryFractionAndAutocorrelation) {
  const auto u = unit(100, 0.9, 50);
  const auto s = simulate_unit(u, 1'000'000, 20211);
  const auto up = std::count(s.values_mw.begin(), s.values_mw.end(), 0.0);
  const double frac = static_cast<double>(up) / 1e6;
  EXPECT_GE(frac, 0.895);
  EXPECT_LE(frac, 0.905);
  EXPECT_NEAR(lag1_autocorrelation(s.values_mw), theoretical_unit_acf(transition_rates(u), 1), 0.02);
}

TEST(SimulateUnit, DeterministicPerSeed) {
  const auto u = unit(100, 0.86, 40);
  EXPECT_EQ(simulate_unit(u, 10000, 5).values_mw, simulate_unit(u, 10000, 5).values_mw);
  EXPECT_NE(simulate_unit(u, 10000, 5).values_mw, simulate_unit(u, 10000, 6).values_mw);
  EXPECT_THROW(simulate_unit(u, 0, 5), InvalidInput);
}

TEST(SimulateFleet, SingleUnitUsesDerivedSeed) {
  const Fleet f{"XX", {unit(400, 0.9, 50)}};
  EXPECT_EQ(simulate_fleet(f, 2000, 42).values_mw, simulate_unit(f.units[0], 2000, derive_seed(42, 0)).values_mw);
}

TEST(SimulateFleet, SumOfDerivedUnitStreams) {
  Rng rng(8);
  const Fleet f = oracle::random_fleet(rng, 20, 600);
  const auto total = simulate_fleet(f, 3000, 77);
  std::vector<double> ref(3000, 0.0);
  for (std::size_t i = 0; i < f.units.size(); ++i) {
    const auto s = simulate_unit(f.units[i], 3000, derive_seed(77, i));
    for (std::size_t h = 0; h < ref.size(); ++h) ref[h] += s.values_mw[h];
  }
  EXPECT_EQ(total.values_mw, ref);
}

TEST(SimulateFleet, AlwaysAvailableFleetIsZero) {
  const Fleet f{"XX", {unit(400, 1.0, 50), unit(100, 1.0, 5)}};
  for (double v : simulate_fleet(f, 1000, 1).values_mw) ASSERT_EQ(v, 0.0);
  EXPECT_THROW(simulate_fleet(Fleet{"XX", {}}, 10, 1), InvalidInput);
}

TEST(SimulateFleet, LongRunMeanMatchesExpectation) {
  // Short repair times keep the integrated autocorrelation time to a few hours,
  // so 1% is roughly three standard errors at 10^6 hours.
  const Fleet f{"XX", {unit(300, 0.9, 2), unit(500, 0.8, 4)}};
  const auto s = simulate_fleet(f, 1'000'000, 3);
  const double mean = std::accumulate(s.values_mw.begin(), s.values_mw.end(), 0.0) / 1e6;
  const double expected = oracle::expected_outage(f);
  EXPECT_NEAR(mean, expected, 0.01 * expected);
}

TEST(TheoreticalAcf, Examples) {
  EXPECT_EQ(theoretical_unit_acf({0.02, 1.0 / 450}, 0), 1.0);
  EXPECT_NEAR(theoretical_unit_acf({0.02, 0.0022222}, 1), 0.9777778, 1e-7);
  EXPECT_EQ(theoretical_unit_acf({1.0, 1.0}, 1), -1.0);
  EXPECT_THROW(theoretical_unit_acf({0.0, 0.0}, 1), InvalidInput);
  EXPECT_THROW(theoretical_unit_acf({0.1, 0.1}, -1), InvalidInput);
}

TEST(TimeseriesCsv, WritesIsoTimestamps) {
  OutageTimeSeries s{HourTime{make_day(2017, 2, 1)}, {0.0, 400.0}};
  EXPECT_EQ(timeseries_to_csv(s),
            "timestamp_utc,outage_mw\n2017-02-01T00:00:00Z,0.000\n2017-02-01T01:00:00Z,400.000\n");
}

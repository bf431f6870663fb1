#pragma once

// Two-state (in service / on outage) discrete-time Markov simulation of unit and
// fleet unavailability, with the closed-form autocorrelation of the unit chain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "unavail/error.hpp"
#include "unavail/fleet_model.hpp"
#include "unavail/rng.hpp"
#include "unavail/time.hpp"

namespace unavail {

struct TransitionRates {
  double repair_rate_mu = 1.0;       // per hour, down -> up
  double failure_rate_lambda = 0.0;  // per hour, up -> down
};

// mu = 1/MTTR, lambda = mu (1/A - 1). Both are used directly as per-hour
// transition probabilities, so they are clamped to [0, 1].
inline TransitionRates transition_rates(double availability, double mttr_hours) {
  if (!(availability > 0.0 && availability <= 1.0))
    throw InvalidInput("transition_rates: availability must lie in (0, 1]");
  if (!(mttr_hours > 0.0) || !std::isfinite(mttr_hours)) throw InvalidInput("transition_rates: mttr_hours must be > 0");
  const double mu = 1.0 / mttr_hours;
  const double lambda = mu * (1.0 / availability - 1.0);
  return {std::min(mu, 1.0), std::clamp(lambda, 0.0, 1.0)};
}

inline TransitionRates transition_rates(const GeneratorUnit& u) { return transition_rates(u.availability, u.mttr_hours); }

struct OutageTimeSeries {
  HourTime start{};
  std::vector<double> values_mw;
};

// Hour 0 is drawn from the stationary distribution (in service with probability
// A); each later hour flips state with probability lambda (up) or mu (down).
inline OutageTimeSeries simulate_unit(const GeneratorUnit& unit, std::size_t n_hours, std::uint64_t seed,
                                      HourTime start = {}) {
  unit.validate();
  if (n_hours < 1) throw InvalidInput("simulate_unit: n_hours must be >= 1");
  const TransitionRates r = transition_rates(unit);
  const double cap = unit.capacity_mw;
  Rng rng(seed);
  OutageTimeSeries out{start, std::vector<double>(n_hours)};
  bool up = rng.uniform01() < unit.availability;
  out.values_mw[0] = up ? 0.0 : cap;
  for (std::size_t h = 1; h < n_hours; ++h) {
    const double u = rng.uniform01();
    if (up) {
      if (u < r.failure_rate_lambda) up = false;
    } else if (u < r.repair_rate_mu) {
      up = true;
    }
    out.values_mw[h] = up ? 0.0 : cap;
  }
  return out;
}

// Unit i runs on derive_seed(seed, i); the hour-wise sum is accumulated in unit
// order over whole-MW values, so it is exact.
inline OutageTimeSeries simulate_fleet(const Fleet& fleet, std::size_t n_hours, std::uint64_t seed,
                                       HourTime start = {}) {
  if (fleet.units.empty()) throw InvalidInput("simulate_fleet: empty fleet");
  if (n_hours < 1) throw InvalidInput("simulate_fleet: n_hours must be >= 1");
  OutageTimeSeries total{start, std::vector<double>(n_hours, 0.0)};
  for (std::size_t i = 0; i < fleet.units.size(); ++i) {
    const auto s = simulate_unit(fleet.units[i], n_hours, derive_seed(seed, i), start);
    for (std::size_t h = 0; h < n_hours; ++h) total.values_mw[h] += s.values_mw[h];
  }
  return total;
}

inline double theoretical_unit_acf(const TransitionRates& r, long lag_hours) {
  if (lag_hours < 0) throw InvalidInput("theoretical_unit_acf: negative lag");
  const double s = r.repair_rate_mu + r.failure_rate_lambda;
  if (!(s > 0.0)) throw InvalidInput("theoretical_unit_acf: mu + lambda must be positive");
  return std::pow(1.0 - s, static_cast<double>(lag_hours));
}

// timestamp_utc,outage_mw on explicit (possibly non-contiguous) hours.
inline std::string timeseries_to_csv(const std::vector<HourTime>& hours, const std::vector<double>& values) {
  if (hours.size() != values.size()) throw InvalidInput("timeseries_to_csv: length mismatch");
  std::ostringstream os;
  os << "timestamp_utc,outage_mw\n";
  for (std::size_t i = 0; i < hours.size(); ++i)
    os << format_datetime(hours[i]) << ',' << format_fixed(values[i], 3) << '\n';
  return os.str();
}

inline std::string timeseries_to_csv(const OutageTimeSeries& s) {
  std::vector<HourTime> hours(s.values_mw.size());
  for (std::size_t i = 0; i < hours.size(); ++i) hours[i] = s.start + Hours{static_cast<long>(i)};
  return timeseries_to_csv(hours, s.values_mw);
}

struct TimedValues {
  std::vector<HourTime> hours;
  std::vector<double> values;
};

inline TimedValues parse_timeseries_csv(const CsvTable& t, std::string_view value_column, const std::string& source) {
  const auto tc = t.column("timestamp_utc");
  const auto vc = t.column(value_column);
  TimedValues out;
  out.hours.reserve(t.rows.size());
  out.values.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    try {
      out.hours.push_back(std::chrono::floor<Hours>(parse_datetime(t.rows[i][tc])));
      out.values.push_back(parse_double(t.rows[i][vc], value_column));
    } catch (const InvalidInput& e) {
      throw ParseError(source + ":" + std::to_string(i + 2), e.what());
    }
  }
  return out;
}

}  // namespace unavail

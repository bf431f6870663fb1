#pragma once

// Representative fleet synthesis and the time-collapsed (non-sequential)
// capacity-outage distribution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "unavail/error.hpp"
#include "unavail/fuel.hpp"
#include "unavail/io.hpp"
#include "unavail/rng.hpp"

namespace unavail {

struct GeneratorUnit {
  std::string id;
  Fuel fuel = Fuel::CCGT;
  int capacity_mw = 1;
  double availability = 1.0;
  double mttr_hours = 1.0;

  void validate() const {
    if (capacity_mw < 1) throw InvalidInput("unit '" + id + "': capacity_mw must be >= 1");
    if (!(availability > 0.0 && availability <= 1.0))
      throw InvalidInput("unit '" + id + "': availability must lie in (0, 1]");
    if (!(mttr_hours > 0.0) || !std::isfinite(mttr_hours))
      throw InvalidInput("unit '" + id + "': mttr_hours must be > 0");
  }
};

struct Fleet {
  std::string zone;
  std::vector<GeneratorUnit> units;

  long long total_capacity_mw() const {
    long long s = 0;
    for (const auto& u : units) s += u.capacity_mw;
    return s;
  }

  std::map<Fuel, long long> capacity_by_fuel() const {
    std::map<Fuel, long long> out;
    for (const auto& u : units) out[u.fuel] += u.capacity_mw;
    return out;
  }
};

// Frequency-weighted multiset of observed unit sizes for one fuel.
struct FuelSizePool {
  Fuel fuel = Fuel::CCGT;
  std::vector<int> sizes_mw;
};

struct RegistryEntry {
  std::string zone;
  Fuel fuel = Fuel::CCGT;
  int capacity_mw = 0;
  std::optional<double> availability;
  std::optional<double> mttr_hours;
};

// Capacities are rounded to whole MW; anything that rounds below 1 MW is rejected.
inline int round_capacity_mw(double mw, std::string_view what) {
  if (!std::isfinite(mw)) throw InvalidInput(std::string(what) + ": capacity is not finite");
  const long long r = std::llround(mw);
  if (r < 1) throw InvalidInput(std::string(what) + ": capacity must be >= 1 MW");
  if (r > 10'000'000) throw InvalidInput(std::string(what) + ": capacity out of range");
  return static_cast<int>(r);
}

inline std::map<Fuel, FuelSizePool> pool_unit_sizes(const std::vector<std::pair<Fuel, int>>& registry) {
  if (registry.empty()) throw InvalidInput("pool_unit_sizes: empty registry");
  std::map<Fuel, FuelSizePool> pools;
  for (const auto& [fuel, mw] : registry) {
    if (mw < 1) throw InvalidInput("pool_unit_sizes: capacities must be positive");
    auto& pool = pools[fuel];
    pool.fuel = fuel;
    pool.sizes_mw.push_back(mw);
  }
  return pools;
}

inline std::map<Fuel, FuelSizePool> pool_unit_sizes(const std::vector<RegistryEntry>& registry) {
  std::vector<std::pair<Fuel, int>> flat;
  flat.reserve(registry.size());
  for (const auto& e : registry) flat.emplace_back(e.fuel, e.capacity_mw);
  return pool_unit_sizes(flat);
}

// Draws sizes uniformly with replacement from each fuel's pool until the running
// total reaches the target, then truncates the final unit so the per-fuel total
// is exact. Fuels are visited in enum order from one generator stream.
inline Fleet synthesize_fleet(const std::string& zone, const std::map<Fuel, long long>& target_mw_by_fuel,
                              const std::map<Fuel, FuelSizePool>& pools,
                              const std::map<Fuel, FuelParams>& params, std::uint64_t seed) {
  Fleet fleet;
  fleet.zone = zone;
  Rng rng(seed);
  for (const auto& [fuel, target] : target_mw_by_fuel) {
    if (target < 0) throw InvalidInput("synthesize_fleet: negative target for " + std::string(fuel_name(fuel)));
    if (target == 0) continue;
    const auto pit = pools.find(fuel);
    if (pit == pools.end() || pit->second.sizes_mw.empty())
      throw MissingPool("synthesize_fleet: no unit-size pool for " + std::string(fuel_name(fuel)) + " in zone " +
                        zone);
    const auto par = params.find(fuel);
    if (par == params.end())
      throw InvalidInput("synthesize_fleet: no availability/MTTR parameters for " + std::string(fuel_name(fuel)));
    const auto& sizes = pit->second.sizes_mw;
    long long remaining = target;
    int k = 0;
    while (remaining > 0) {
      const int drawn = sizes[rng.below(sizes.size())];
      const int mw = static_cast<int>(std::min<long long>(drawn, remaining));
      GeneratorUnit u;
      u.id = zone + "-" + std::string(fuel_name(fuel)) + "-" + std::to_string(++k);
      u.fuel = fuel;
      u.capacity_mw = mw;
      u.availability = par->second.availability;
      u.mttr_hours = par->second.mttr_hours;
      u.validate();
      fleet.units.push_back(std::move(u));
      remaining -= mw;
    }
  }
  return fleet;
}

// Probability mass over total MW on outage, on a 1 MW grid starting at 0.
class CapacityOutagePmf {
 public:
  CapacityOutagePmf() : prob_{1.0} {}

  explicit CapacityOutagePmf(std::vector<double> prob) : prob_(std::move(prob)) {
    if (prob_.empty()) throw InvalidInput("CapacityOutagePmf: empty support");
    double sum = 0;
    for (double p : prob_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidInput("CapacityOutagePmf: negative or non-finite mass");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidInput("CapacityOutagePmf: mass does not sum to 1");
  }

  std::size_t size() const { return prob_.size(); }
  int max_outage_mw() const { return static_cast<int>(prob_.size()) - 1; }
  double operator[](std::size_t mw) const { return mw < prob_.size() ? prob_[mw] : 0.0; }
  const std::vector<double>& probabilities() const { return prob_; }

  double total() const { return std::accumulate(prob_.begin(), prob_.end(), 0.0); }

  double mean() const {
    double m = 0;
    for (std::size_t x = 0; x < prob_.size(); ++x) m += static_cast<double>(x) * prob_[x];
    return m;
  }

  // Discrete inverse CDF: the smallest grid point whose CDF reaches q. A 1e-12
  // slack absorbs accumulated rounding in the running CDF.
  int quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile: q must lie in [0, 1]");
    double cdf = 0;
    for (std::size_t x = 0; x < prob_.size(); ++x) {
      cdf += prob_[x];
      if (cdf >= q - 1e-12) return static_cast<int>(x);
    }
    return max_outage_mw();
  }

  friend bool operator==(const CapacityOutagePmf&, const CapacityOutagePmf&) = default;

 private:
  std::vector<double> prob_;
};

inline CapacityOutagePmf unit_outage_pmf(const GeneratorUnit& unit) {
  unit.validate();
  std::vector<double> p(static_cast<std::size_t>(unit.capacity_mw) + 1, 0.0);
  p[0] = unit.availability;
  p[static_cast<std::size_t>(unit.capacity_mw)] += 1.0 - unit.availability;
  return CapacityOutagePmf(std::move(p));
}

// Exact convolution of independent two-point unit distributions. Units are
// folded in a canonical (capacity, availability) order so any permutation of
// the fleet produces the same bits.
inline CapacityOutagePmf fleet_outage_pmf(const Fleet& fleet) {
  if (fleet.units.empty()) throw InvalidInput("fleet_outage_pmf: empty fleet");
  std::vector<const GeneratorUnit*> order;
  order.reserve(fleet.units.size());
  for (const auto& u : fleet.units) {
    u.validate();
    order.push_back(&u);
  }
  std::sort(order.begin(), order.end(), [](const GeneratorUnit* a, const GeneratorUnit* b) {
    if (a->capacity_mw != b->capacity_mw) return a->capacity_mw < b->capacity_mw;
    return a->availability < b->availability;
  });

  const auto total = static_cast<std::size_t>(fleet.total_capacity_mw());
  std::vector<double> p(total + 1, 0.0);
  p[0] = 1.0;
  std::size_t support = 0;  // highest index that may be non-zero
  for (const GeneratorUnit* u : order) {
    const auto c = static_cast<std::size_t>(u->capacity_mw);
    const double a = u->availability;
    const double q = 1.0 - a;
    const std::size_t next = support + c;
    for (std::size_t x = next + 1; x-- > 0;) {
      const double up = x <= support ? a * p[x] : 0.0;
      const double down = x >= c ? q * p[x - c] : 0.0;
      p[x] = up + down;
    }
    support = next;
  }
  return CapacityOutagePmf(std::move(p));
}

struct PmfStats {
  double mean_mw = 0;
  int q25_mw = 0;
  int q75_mw = 0;
  double iqr_mw = 0;
};

inline PmfStats pmf_stats(const CapacityOutagePmf& pmf) {
  PmfStats s;
  s.mean_mw = pmf.mean();
  s.q25_mw = pmf.quantile(0.25);
  s.q75_mw = pmf.quantile(0.75);
  s.iqr_mw = static_cast<double>(s.q75_mw - s.q25_mw);
  return s;
}

// ---------------------------------------------------------------------------
// CSV formats
//
//   registry / installed capacity / fleet:  zone,fuel,capacity_mw[,availability,mttr_hours]
//   parameters:                             fuel,availability,mttr_hours
//   PMF:                                    outage_mw,probability

inline std::vector<RegistryEntry> parse_registry_csv(const CsvTable& t, const std::string& source) {
  const auto zc = t.column("zone");
  const auto fc = t.column("fuel");
  const auto cc = t.column("capacity_mw");
  const auto ac = t.find("availability");
  const auto mc = t.find("mttr_hours");
  std::vector<RegistryEntry> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string where = source + ":" + std::to_string(i + 2);
    RegistryEntry e;
    e.zone = r[zc];
    try {
      e.fuel = parse_modelled_fuel(r[fc]);
      e.capacity_mw = round_capacity_mw(parse_double(r[cc], "capacity_mw"), where);
      if (ac && !r[*ac].empty()) e.availability = parse_double(r[*ac], "availability");
      if (mc && !r[*mc].empty()) e.mttr_hours = parse_double(r[*mc], "mttr_hours");
    } catch (const InvalidInput& err) {
      throw InvalidInput(where + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<RegistryEntry> read_registry_csv(const fs::path& p) {
  return parse_registry_csv(read_csv(p), p.string());
}

// Installed capacity per fuel for one zone, summed over rows.
inline std::map<Fuel, long long> installed_capacity(const std::vector<RegistryEntry>& rows, const std::string& zone) {
  std::map<Fuel, long long> out;
  for (const auto& r : rows)
    if (r.zone == zone) out[r.fuel] += r.capacity_mw;
  return out;
}

inline std::map<Fuel, FuelParams> read_params_csv(const fs::path& p,
                                                  std::map<Fuel, FuelParams> base = default_fuel_params()) {
  const auto t = read_csv(p);
  const auto fc = t.column("fuel");
  const auto ac = t.column("availability");
  const auto mc = t.column("mttr_hours");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string where = p.string() + ":" + std::to_string(i + 2);
    try {
      const Fuel f = parse_modelled_fuel(r[fc]);
      FuelParams fp{parse_double(r[ac], "availability"), parse_double(r[mc], "mttr_hours")};
      if (!(fp.availability > 0 && fp.availability <= 1) || !(fp.mttr_hours > 0))
        throw InvalidInput("parameters out of range");
      base[f] = fp;
    } catch (const InvalidInput& err) {
      throw InvalidInput(where + ": " + err.what());
    }
  }
  return base;
}

inline std::string fleet_to_csv(const Fleet& fleet) {
  std::ostringstream os;
  os << "zone,fuel,capacity_mw,availability,mttr_hours\n";
  for (const auto& u : fleet.units)
    os << fleet.zone << ',' << fuel_name(u.fuel) << ',' << u.capacity_mw << ',' << format_exact(u.availability)
       << ',' << format_exact(u.mttr_hours) << '\n';
  return os.str();
}

// Rows without availability/MTTR take the fuel's parameters from `params`.
inline Fleet fleet_from_csv(const CsvTable& t, const std::string& source,
                            const std::map<Fuel, FuelParams>& params = default_fuel_params()) {
  const auto rows = parse_registry_csv(t, source);
  Fleet fleet;
  std::map<Fuel, int> counter;
  for (const auto& r : rows) {
    if (fleet.zone.empty()) fleet.zone = r.zone;
    if (r.zone != fleet.zone) throw InvalidInput(source + ": fleet file mixes zones '" + fleet.zone + "' and '" + r.zone + "'");
    GeneratorUnit u;
    u.fuel = r.fuel;
    u.id = r.zone + "-" + std::string(fuel_name(r.fuel)) + "-" + std::to_string(++counter[r.fuel]);
    u.capacity_mw = r.capacity_mw;
    const auto p = params.find(r.fuel);
    if ((!r.availability || !r.mttr_hours) && p == params.end())
      throw InvalidInput(source + ": no parameters for " + std::string(fuel_name(r.fuel)));
    u.availability = r.availability ? *r.availability : p->second.availability;
    u.mttr_hours = r.mttr_hours ? *r.mttr_hours : p->second.mttr_hours;
    u.validate();
    fleet.units.push_back(std::move(u));
  }
  return fleet;
}

inline Fleet read_fleet_csv(const fs::path& p, const std::map<Fuel, FuelParams>& params = default_fuel_params()) {
  return fleet_from_csv(read_csv(p), p.string(), params);
}

inline std::string pmf_to_csv(const CapacityOutagePmf& pmf) {
  std::ostringstream os;
  os << "outage_mw,probability\n";
  const auto& p = pmf.probabilities();
  for (std::size_t x = 0; x < p.size(); ++x) os << x << ',' << format_exact(p[x]) << '\n';
  return os.str();
}

inline CapacityOutagePmf read_pmf_csv(const fs::path& path) {
  const auto t = read_csv(path);
  const auto xc = t.column("outage_mw");
  const auto pc = t.column("probability");
  std::vector<double> p;
  for (const auto& r : t.rows) {
    const long long x = parse_integer(r[xc], "outage_mw");
    if (x < 0) throw InvalidInput(path.string() + ": negative outage_mw");
    if (static_cast<std::size_t>(x) >= p.size()) p.resize(static_cast<std::size_t>(x) + 1, 0.0);
    p[static_cast<std::size_t>(x)] += parse_double(r[pc], "probability");
  }
  return CapacityOutagePmf(std::move(p));
}

}  // namespace unavail

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "unavail/error.hpp"

namespace unavail {

// Dispatchable fuel classes with modelled parameters, plus two report-only
// classes: Renewable (excluded from empirical totals) and Other (kept in the
// empirical data, but there is no default parameter row for it).
enum class Fuel { Biomass, Coal, CCGT, Oil, Hydro, Nuclear, CHP, Waste, Other, Renewable };

inline constexpr std::array<Fuel, 8> kModelledFuels{Fuel::Biomass, Fuel::Coal,    Fuel::CCGT, Fuel::Oil,
                                                    Fuel::Hydro,   Fuel::Nuclear, Fuel::CHP,  Fuel::Waste};

inline std::string_view fuel_name(Fuel f) {
  switch (f) {
    case Fuel::Biomass: return "Biomass";
    case Fuel::Coal: return "Coal";
    case Fuel::CCGT: return "CCGT";
    case Fuel::Oil: return "Oil";
    case Fuel::Hydro: return "Hydro";
    case Fuel::Nuclear: return "Nuclear";
    case Fuel::CHP: return "CHP";
    case Fuel::Waste: return "Waste";
    case Fuel::Other: return "Other";
    case Fuel::Renewable: return "Renewable";
  }
  return "?";
}

inline std::optional<Fuel> try_parse_fuel(std::string_view s) {
  static constexpr std::array<Fuel, 10> all{Fuel::Biomass, Fuel::Coal,    Fuel::CCGT, Fuel::Oil,   Fuel::Hydro,
                                            Fuel::Nuclear, Fuel::CHP,     Fuel::Waste, Fuel::Other, Fuel::Renewable};
  for (Fuel f : all)
    if (fuel_name(f) == s) return f;
  return std::nullopt;
}

inline Fuel parse_fuel(std::string_view s) {
  if (auto f = try_parse_fuel(s)) return *f;
  throw InvalidInput("unknown fuel '" + std::string(s) + "'");
}

// Fuels that carry an availability/MTTR row and can appear in a synthesized fleet.
inline Fuel parse_modelled_fuel(std::string_view s) {
  const Fuel f = parse_fuel(s);
  if (f == Fuel::Other || f == Fuel::Renewable)
    throw InvalidInput("fuel '" + std::string(s) + "' has no availability/MTTR parameters");
  return f;
}

// Platform production-type codes. B11 run-of-river, B16 solar, B18/B19 wind and
// the minor renewables are Renewable; pumped storage and reservoir hydro are
// dispatchable Hydro.
inline Fuel fuel_from_psr_type(std::string_view code) {
  static const std::map<std::string_view, Fuel> table{
      {"B01", Fuel::Biomass}, {"B02", Fuel::Coal},      {"B03", Fuel::Coal},      {"B04", Fuel::CCGT},
      {"B05", Fuel::Coal},    {"B06", Fuel::Oil},       {"B07", Fuel::Oil},       {"B08", Fuel::Coal},
      {"B09", Fuel::Renewable}, {"B10", Fuel::Hydro},   {"B11", Fuel::Renewable}, {"B12", Fuel::Hydro},
      {"B13", Fuel::Renewable}, {"B14", Fuel::Nuclear}, {"B15", Fuel::Renewable}, {"B16", Fuel::Renewable},
      {"B17", Fuel::Waste},   {"B18", Fuel::Renewable}, {"B19", Fuel::Renewable}, {"B20", Fuel::Other},
  };
  const auto it = table.find(code);
  return it == table.end() ? Fuel::Other : it->second;
}

struct FuelParams {
  double availability;
  double mttr_hours;
};

inline constexpr std::string_view kDefaultParamsVersion = "builtin-v1";

// Availability and mean time to repair per fuel class (version builtin-v1).
inline std::map<Fuel, FuelParams> default_fuel_params() {
  return {
      {Fuel::Biomass, {0.86, 40}}, {Fuel::Coal, {0.86, 40}},     {Fuel::CCGT, {0.90, 50}},
      {Fuel::Oil, {0.91, 50}},     {Fuel::Hydro, {0.90, 20}},    {Fuel::Nuclear, {0.81, 150}},
      {Fuel::CHP, {0.90, 50}},     {Fuel::Waste, {0.86, 40}},
  };
}

}  // namespace unavail

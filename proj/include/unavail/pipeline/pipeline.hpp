#pragma once

// End-to-end stages. Each stage reads and writes documented files under the
// output directory only, so stages can be re-run independently:
//
//   fetch     cache/<zone>/<doc_type>/<date>.{xml,zip,json}
//   ingest    series_<zone>.csv, reports_<zone>.jsonl
//   fleet     fleet_<zone>.csv
//   model     pmf_<zone>.csv
//   simulate  simulated_<zone>_draw<k>.csv, simulated_<zone>.meta.json
//   stats     stats.csv
//   plot-data plot_<kind>_<zone>.csv
//   run       all of the above, then manifest.json

#include <algorithm>
#include <functional>
#include <future>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "unavail/error.hpp"
#include "unavail/fleet_model.hpp"
#include "unavail/ingest.hpp"
#include "unavail/io.hpp"
#include "unavail/markov_sim.hpp"
#include "unavail/pipeline/cache.hpp"
#include "unavail/pipeline/config.hpp"
#include "unavail/pipeline/fetch.hpp"
#include "unavail/rng.hpp"
#include "unavail/stats.hpp"

#ifndef UNAVAIL_VERSION
#define UNAVAIL_VERSION "0.0.0"
#endif

namespace unavail::pipeline {

inline constexpr const char* kVersion = UNAVAIL_VERSION;

// Thread-safe sink for progress and warning lines (never part of artifacts).
class Log {
 public:
  Log() = default;
  explicit Log(std::function<void(const std::string&)> sink) : sink_(std::move(sink)) {}
  void operator()(const std::string& line) {
    if (!sink_) return;
    std::lock_guard lock(mu_);
    sink_(line);
  }

 private:
  std::function<void(const std::string&)> sink_;
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Artifact paths

inline fs::path series_path(const PipelineConfig& c, const std::string& z) { return c.output_dir / ("series_" + z + ".csv"); }
inline fs::path reports_path(const PipelineConfig& c, const std::string& z) { return c.output_dir / ("reports_" + z + ".jsonl"); }
inline fs::path fleet_path(const PipelineConfig& c, const std::string& z) { return c.output_dir / ("fleet_" + z + ".csv"); }
inline fs::path pmf_path(const PipelineConfig& c, const std::string& z) { return c.output_dir / ("pmf_" + z + ".csv"); }
inline fs::path simulated_path(const PipelineConfig& c, const std::string& z, int draw) {
  return c.output_dir / ("simulated_" + z + "_draw" + std::to_string(draw) + ".csv");
}
inline fs::path simulated_meta_path(const PipelineConfig& c, const std::string& z) {
  return c.output_dir / ("simulated_" + z + ".meta.json");
}
inline fs::path stats_path(const PipelineConfig& c) { return c.output_dir / "stats.csv"; }
inline fs::path plot_path(const PipelineConfig& c, const std::string& kind, const std::string& z) {
  return c.output_dir / ("plot_" + kind + "_" + z + ".csv");
}
inline fs::path manifest_path(const PipelineConfig& c) { return c.output_dir / "manifest.json"; }

// ---------------------------------------------------------------------------
// Seeds. Every stream depends only on (seed, zone, draw, window label), so a
// zone's results do not change when other zones or windows are added.

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

inline std::uint64_t fleet_seed(std::uint64_t seed, const std::string& zone) { return derive_seed(seed, fnv1a(zone)); }

inline std::uint64_t simulation_seed(std::uint64_t seed, const std::string& zone, int draw, const std::string& window) {
  return derive_seed(derive_seed(derive_seed(seed, fnv1a("simulate:" + zone)), static_cast<std::uint64_t>(draw)),
                     fnv1a(window));
}

// ---------------------------------------------------------------------------
// Error context

[[noreturn]] inline void rethrow_as(ErrorKind kind, const std::string& msg) {
  switch (kind) {
    case ErrorKind::InvalidInput: throw InvalidInput(msg);
    case ErrorKind::MissingPool: throw MissingPool(msg);
    case ErrorKind::Parse: throw ParseError("", msg);
    case ErrorKind::Fetch: throw FetchError(msg);
    case ErrorKind::Auth: throw AuthError(msg);
    case ErrorKind::Stats: throw StatsError(msg);
    case ErrorKind::Usage: throw UsageError(msg);
    case ErrorKind::Io: throw IoError(msg);
  }
  throw Error(kind, msg);
}

// Runs `f`, prefixing any error with the stage name and the input being processed.
template <class F>
auto in_stage(std::string_view stage, const fs::path& input, F&& f) -> decltype(f()) {
  const std::string where = "stage '" + std::string(stage) + "' (" + input.string() + "): ";
  try {
    return f();
  } catch (const Error& e) {
    if (std::string_view(e.what()).rfind("stage '", 0) == 0) throw;
    rethrow_as(e.kind(), where + e.what());
  } catch (const fs::filesystem_error& e) {
    throw IoError(where + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", where + e.what());
  }
}

// Runs `f(i)` for i in [0, n) concurrently; rethrows the failure with the
// lowest index.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  std::vector<std::future<void>> jobs;
  jobs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, [&f, i] { f(i); }));
  std::exception_ptr first;
  for (auto& j : jobs) {
    try {
      j.get();
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

template <class F>
void for_each_zone(const std::vector<std::string>& zones, F&& f) {
  parallel_for(zones.size(), [&](std::size_t i) { f(zones[i]); });
}

// ---------------------------------------------------------------------------
// fetch

// Every UTC day from the first to the last analysis hour. Gaps between windows
// are fetched too: the hourly series covers the whole span, which the weekly
// seasonality profile needs.
inline std::vector<DayTime> window_days(const std::vector<WinterWindow>& windows) {
  const auto [lo, hi] = windows_span(windows);
  std::vector<DayTime> days;
  for (DayTime d = std::chrono::floor<Days>(lo); HourTime{d} < hi; d += Days{1}) days.push_back(d);
  return days;
}

inline std::vector<FetchRequest> fetch_requests(const PipelineConfig& cfg) {
  const auto days = window_days(cfg.analysis_windows());
  std::vector<FetchRequest> out;
  for (const auto& zone : cfg.zones) {
    const std::string code = cfg.zone_code(zone);
    for (const auto& doc : cfg.document_types)
      for (const DayTime d : days) out.push_back({{zone, d, doc}, code});
  }
  return out;
}

inline FetchSummary stage_fetch(const PipelineConfig& cfg, Log& log) {
  return in_stage("fetch", cfg.cache_dir, [&] {
    DiskCache cache(cfg.cache_dir);
    PlatformClient client(cfg.api);
    const auto s = fetch_all(fetch_requests(cfg), client, cache, [&](const std::string& m) { log(m); });
    log("fetch: " + std::to_string(s.cached) + " cached, " + std::to_string(s.fetched) + " downloaded");
    return s;
  });
}

// ---------------------------------------------------------------------------
// ingest

inline std::vector<fs::path> stage_ingest(const PipelineConfig& cfg, Log& log) {
  const auto windows = cfg.analysis_windows();
  const auto [lo, hi] = windows_span(windows);
  const auto n_hours = static_cast<std::size_t>((hi - lo).count());
  const auto days = window_days(windows);
  const auto zone_by_domain = cfg.zone_by_code();
  std::map<std::string, double> nominals;
  if (cfg.unit_nominals_path)
    nominals = in_stage("ingest", *cfg.unit_nominals_path, [&] { return read_unit_nominals_csv(*cfg.unit_nominals_path); });

  for_each_zone(cfg.zones, [&](const std::string& zone) {
    DiskCache cache(cfg.cache_dir);
    std::vector<OutageReport> raw;
    std::size_t n_warnings = 0;
    for (const auto& doc : cfg.document_types) {
      for (const DayTime d : days) {
        const CacheKey key{zone, d, doc};
        in_stage("ingest", cache.record_path(key), [&] {
          const auto entry = cache.get(key);
          if (!entry) throw IoError("day not in cache; run the fetch stage first");
          ParseOptions opt;
          opt.source = cache.payload_path(key, entry->payload).string();
          opt.zone = zone;
          opt.zone_by_domain = zone_by_domain;
          auto res = parse_document(entry->payload, opt);
          for (const auto& w : res.warnings) log("warning: " + w.location + ": " + w.message);
          n_warnings += res.warnings.size();
          std::move(res.reports.begin(), res.reports.end(), std::back_inserter(raw));
        });
      }
    }
    auto reports = deduplicate(raw);
    for (const auto& m : apply_registry_nominals(reports, nominals)) log("note: " + m);
    FilterCounts counts;
    reports = filter_reports(reports, &counts);
    log("ingest " + zone + ": " + std::to_string(raw.size()) + " intervals parsed, " + std::to_string(reports.size()) +
        " kept (" + std::to_string(counts.withdrawn) + " withdrawn, " + std::to_string(counts.renewable) +
        " renewable, " + std::to_string(counts.implausible) + " above 133% of nominal), " +
        std::to_string(n_warnings) + " warnings");
    const auto series = in_stage("ingest", cfg.cache_dir / zone, [&] { return build_zone_series(zone, reports, lo, n_hours); });
    write_file(reports_path(cfg, zone), reports_to_jsonl(reports));
    write_file(series_path(cfg, zone), zone_series_to_csv(series));
  });
  std::vector<fs::path> out;
  for (const auto& z : cfg.zones) {
    out.push_back(reports_path(cfg, z));
    out.push_back(series_path(cfg, z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// fleet / model

inline std::map<Fuel, FuelParams> model_params(const PipelineConfig& cfg) {
  if (!cfg.model_params_path) return default_fuel_params();
  return in_stage("params", *cfg.model_params_path, [&] { return read_params_csv(*cfg.model_params_path); });
}

inline std::vector<fs::path> stage_fleet(const PipelineConfig& cfg, Log& log) {
  const auto params = model_params(cfg);
  const auto pools = in_stage("fleet", cfg.registry_path,
                              [&] { return pool_unit_sizes(read_registry_csv(cfg.registry_path)); });
  const auto installed = in_stage("fleet", cfg.installed_capacity_path,
                                  [&] { return read_registry_csv(cfg.installed_capacity_path); });
  std::vector<fs::path> out;
  for (const auto& zone : cfg.zones) {
    in_stage("fleet", cfg.installed_capacity_path, [&] {
      const auto targets = installed_capacity(installed, zone);
      if (targets.empty()) throw InvalidInput("no installed capacity listed for zone '" + zone + "'");
      const Fleet fleet = synthesize_fleet(zone, targets, pools, params, fleet_seed(cfg.seed, zone));
      write_file(fleet_path(cfg, zone), fleet_to_csv(fleet));
      log("fleet " + zone + ": " + std::to_string(fleet.units.size()) + " units, " +
          std::to_string(fleet.total_capacity_mw()) + " MW");
    });
    out.push_back(fleet_path(cfg, zone));
  }
  return out;
}

inline std::vector<fs::path> stage_model(const PipelineConfig& cfg, Log& log) {
  const auto params = model_params(cfg);
  std::vector<fs::path> out;
  for_each_zone(cfg.zones, [&](const std::string& zone) {
    in_stage("model", fleet_path(cfg, zone), [&] {
      const auto pmf = fleet_outage_pmf(read_fleet_csv(fleet_path(cfg, zone), params));
      write_file(pmf_path(cfg, zone), pmf_to_csv(pmf));
      log("model " + zone + ": mean outage " + format_fixed(pmf.mean(), 1) + " MW");
    });
  });
  for (const auto& z : cfg.zones) out.push_back(pmf_path(cfg, z));
  return out;
}

// ---------------------------------------------------------------------------
// simulate

inline nlohmann::ordered_json params_record(const PipelineConfig& cfg) {
  nlohmann::ordered_json p;
  if (cfg.model_params_path) {
    p["source"] = cfg.model_params_path->filename().string();
    p["sha256"] = sha256_hex(read_file(*cfg.model_params_path));
  } else {
    p["source"] = std::string(kDefaultParamsVersion);
  }
  return p;
}

// Each window is simulated independently (stationary start) and written in
// window order, on the window's own hours.
inline std::vector<fs::path> stage_simulate(const PipelineConfig& cfg, Log& log) {
  const auto params = model_params(cfg);
  const auto windows = cfg.analysis_windows();
  const auto prec = in_stage("simulate", cfg.model_params_path.value_or(fs::path("<builtin>")),
                             [&] { return params_record(cfg); });
  for_each_zone(cfg.zones, [&](const std::string& zone) {
    in_stage("simulate", fleet_path(cfg, zone), [&] {
      const Fleet fleet = read_fleet_csv(fleet_path(cfg, zone), params);
      nlohmann::ordered_json meta;
      meta["zone"] = zone;
      meta["seed"] = cfg.seed;
      meta["rng"] = kRngName;
      meta["params"] = prec;
      meta["fleet_units"] = fleet.units.size();
      meta["draws"] = nlohmann::ordered_json::array();
      for (int d = 1; d <= cfg.model_draws; ++d) {
        std::vector<HourTime> hours;
        std::vector<double> values;
        nlohmann::ordered_json draw;
        draw["draw"] = d;
        draw["file"] = simulated_path(cfg, zone, d).filename().string();
        draw["windows"] = nlohmann::ordered_json::array();
        for (const auto& w : windows) {
          const std::uint64_t s = simulation_seed(cfg.seed, zone, d, w.label);
          const auto sim = simulate_fleet(fleet, w.hours.size(), s);
          hours.insert(hours.end(), w.hours.begin(), w.hours.end());
          values.insert(values.end(), sim.values_mw.begin(), sim.values_mw.end());
          draw["windows"].push_back({{"label", w.label}, {"seed", s}, {"hours", w.hours.size()}});
        }
        write_file(simulated_path(cfg, zone, d), timeseries_to_csv(hours, values));
        meta["draws"].push_back(std::move(draw));
      }
      write_file(simulated_meta_path(cfg, zone), meta.dump(2) + "\n");
      log("simulate " + zone + ": " + std::to_string(cfg.model_draws) + " draws");
    });
  });
  std::vector<fs::path> out;
  for (const auto& z : cfg.zones) {
    for (int d = 1; d <= cfg.model_draws; ++d) out.push_back(simulated_path(cfg, z, d));
    out.push_back(simulated_meta_path(cfg, z));
  }
  return out;
}

// Simulated values split back into the configured windows.
inline std::vector<std::pair<std::string, std::vector<double>>> read_simulated_windows(
    const fs::path& p, const std::vector<WinterWindow>& windows) {
  const auto tv = parse_timeseries_csv(read_csv(p), "outage_mw", p.string());
  std::vector<std::pair<std::string, std::vector<double>>> out;
  std::size_t pos = 0;
  for (const auto& w : windows) {
    if (pos + w.hours.size() > tv.hours.size())
      throw InvalidInput("simulated series does not cover window '" + w.label + "'");
    for (std::size_t i = 0; i < w.hours.size(); ++i)
      if (tv.hours[pos + i] != w.hours[i])
        throw ParseError(p.string() + ":" + std::to_string(pos + i + 2),
                         "timestamp does not match window '" + w.label + "'; re-run the simulate stage");
    out.emplace_back(w.label, std::vector<double>(tv.values.begin() + static_cast<long>(pos),
                                                  tv.values.begin() + static_cast<long>(pos + w.hours.size())));
    pos += w.hours.size();
  }
  if (pos != tv.hours.size()) throw InvalidInput("simulated series has hours outside the configured windows");
  return out;
}

// ---------------------------------------------------------------------------
// stats

inline const char* kStatsHeader =
    "zone,channel,mean_mw,iqr_mw,recon_error,recon_error_max,acf_1,acf_6,acf_24,acf_168\n";

struct StatsRow {
  std::string zone, channel;
  double mean_mw = 0, iqr_mw = 0;
  std::optional<double> recon_error, recon_error_max;
  std::map<long, double> acf;
};

inline std::string stats_row_csv(const StatsRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_fixed(*v, 6) : std::string(); };
  std::ostringstream os;
  os << r.zone << ',' << r.channel << ',' << format_fixed(r.mean_mw, 3) << ',' << format_fixed(r.iqr_mw, 3) << ','
     << opt(r.recon_error) << ',' << opt(r.recon_error_max);
  for (long lag : default_acf_lags()) {
    const auto it = r.acf.find(lag);
    os << ',' << (it == r.acf.end() ? std::string() : format_fixed(it->second, 6));
  }
  os << '\n';
  return os.str();
}

// Rows for the empirical channels and the model. Statistics that are undefined
// for the Forced or Planned channel (no outage mass, zero variance) are left
// blank with a warning; for Total and the model they are errors.
inline std::vector<StatsRow> zone_stats(const PipelineConfig& cfg, const std::string& zone,
                                        const std::vector<WinterWindow>& windows, Log& log) {
  std::vector<StatsRow> rows;
  const auto series = in_stage("stats", series_path(cfg, zone), [&] { return read_zone_series_csv(series_path(cfg, zone), zone); });
  for (const Channel ch : {Channel::Forced, Channel::Planned, Channel::Total}) {
    in_stage("stats", series_path(cfg, zone), [&] {
      const auto& s = series.get(ch);
      StatsRow r;
      r.zone = zone;
      r.channel = std::string(channel_name(ch));
      std::tie(r.mean_mw, r.iqr_mw) = summary(s, windows);
      const bool strict = ch == Channel::Total;
      auto lenient = [&](auto&& f) {
        try {
          f();
        } catch (const StatsError& e) {
          if (strict) throw;
          log("warning: " + zone + " " + r.channel + ": " + e.what());
        }
      };
      lenient([&] { r.recon_error = reconciliation_error(s, windows); });
      lenient([&] {
        double mx = 0;
        for (const auto& w : windows) mx = std::max(mx, reconciliation_error(s, std::vector<WinterWindow>{w}));
        r.recon_error_max = mx;
      });
      lenient([&] { r.acf = autocorrelation(s, windows, default_acf_lags()); });
      rows.push_back(std::move(r));
    });
  }
  in_stage("stats", pmf_path(cfg, zone), [&] {
    const auto ps = pmf_stats(read_pmf_csv(pmf_path(cfg, zone)));
    StatsRow r;
    r.zone = zone;
    r.channel = "model";
    r.mean_mw = ps.mean_mw;
    r.iqr_mw = ps.iqr_mw;
    for (long lag : default_acf_lags()) r.acf[lag] = 0;
    for (int d = 1; d <= cfg.model_draws; ++d) {
      const fs::path p = simulated_path(cfg, zone, d);
      const auto acf = in_stage("stats", p, [&] { return mean_window_acf(read_simulated_windows(p, windows), default_acf_lags()); });
      for (const auto& [lag, v] : acf) r.acf[lag] += v / cfg.model_draws;
    }
    rows.push_back(std::move(r));
  });
  return rows;
}

inline std::vector<fs::path> stage_stats(const PipelineConfig& cfg, Log& log) {
  const auto windows = cfg.analysis_windows();
  std::vector<std::vector<StatsRow>> per_zone(cfg.zones.size());
  parallel_for(cfg.zones.size(), [&](std::size_t i) { per_zone[i] = zone_stats(cfg, cfg.zones[i], windows, log); });
  std::string csv = kStatsHeader;
  for (const auto& rows : per_zone)
    for (const auto& r : rows) csv += stats_row_csv(r);
  write_file(stats_path(cfg), csv);
  return {stats_path(cfg)};
}

// ---------------------------------------------------------------------------
// plot data

inline const std::vector<std::string>& plot_kinds() {
  static const std::vector<std::string> k{"histogram", "seasonal", "timeseries"};
  return k;
}

// Pooled window hours binned at histogram_bin_mw: frequencies of the empirical
// Total and Forced outage next to the model PMF mass per bin.
inline std::string histogram_csv(const std::vector<double>& total, const std::vector<double>& forced,
                                 const CapacityOutagePmf& pmf, int bin_mw) {
  if (total.empty() || total.size() != forced.size()) throw InvalidInput("histogram: empty or mismatched samples");
  double top = static_cast<double>(pmf.max_outage_mw());
  for (double v : total) top = std::max(top, v);
  for (double v : forced) top = std::max(top, v);
  const auto n_bins = static_cast<std::size_t>(std::floor(top / bin_mw)) + 1;
  std::vector<double> ft(n_bins, 0), ff(n_bins, 0), mp(n_bins, 0);
  auto bin = [&](double v) { return std::min(n_bins - 1, static_cast<std::size_t>(std::floor(std::max(v, 0.0) / bin_mw))); };
  const double w = 1.0 / static_cast<double>(total.size());
  for (double v : total) ft[bin(v)] += w;
  for (double v : forced) ff[bin(v)] += w;
  const auto& p = pmf.probabilities();
  for (std::size_t x = 0; x < p.size(); ++x) mp[bin(static_cast<double>(x))] += p[x];
  std::ostringstream os;
  os << "bin_gw,freq_total,freq_forced,model_prob\n";
  for (std::size_t b = 0; b < n_bins; ++b)
    os << format_fixed(static_cast<double>(b) * bin_mw / 1000.0, 3) << ',' << format_fixed(ft[b], 8) << ','
       << format_fixed(ff[b], 8) << ',' << format_fixed(mp[b], 8) << '\n';
  return os.str();
}

// timestamp_utc,zone(optional),demand_mw
inline TimedValues read_demand_csv(const fs::path& p, const std::string& zone) {
  const auto t = read_csv(p);
  CsvTable filtered{t.header, {}};
  const auto zc = t.find("zone");
  for (const auto& r : t.rows)
    if (!zc || r[*zc] == zone) filtered.rows.push_back(r);
  if (filtered.rows.empty()) throw InvalidInput("no demand rows for zone '" + zone + "'");
  return parse_timeseries_csv(filtered, "demand_mw", p.string());
}

inline std::string seasonal_csv(const PipelineConfig& cfg, const UnitSeries& s, const std::string& zone, Log& log) {
  std::vector<std::pair<std::string, std::optional<std::array<double, kWeeksPerYear>>>> cols;
  cols.emplace_back("total", weekly_profile(s.total));
  for (const Channel ch : {Channel::Forced, Channel::Planned}) {
    try {
      cols.emplace_back(std::string(channel_name(ch)), weekly_profile(s.get(ch)));
    } catch (const StatsError& e) {
      log("warning: " + zone + " " + std::string(channel_name(ch)) + " profile: " + e.what());
      cols.emplace_back(std::string(channel_name(ch)), std::nullopt);
    }
  }
  if (cfg.demand_path) {
    const auto d = in_stage("plot-data", *cfg.demand_path, [&] { return read_demand_csv(*cfg.demand_path, zone); });
    cols.emplace_back("demand", in_stage("plot-data", *cfg.demand_path, [&] { return weekly_profile(d.hours, d.values); }));
  }
  std::ostringstream os;
  os << "week";
  for (const auto& [name, _] : cols) os << ',' << name << "_profile";
  os << '\n';
  for (std::size_t w = 0; w < kWeeksPerYear; ++w) {
    os << w + 1;
    for (const auto& [_, prof] : cols) os << ',' << (prof ? format_fixed((*prof)[w], 6) : std::string());
    os << '\n';
  }
  return os.str();
}

inline std::string timeseries_csv(const PipelineConfig& cfg, const UnitSeries& s, const std::string& zone,
                                  const std::vector<WinterWindow>& windows) {
  std::vector<std::vector<std::pair<std::string, std::vector<double>>>> draws;
  for (int d = 1; d <= cfg.model_draws; ++d) {
    const fs::path p = simulated_path(cfg, zone, d);
    draws.push_back(in_stage("plot-data", p, [&] { return read_simulated_windows(p, windows); }));
  }
  std::ostringstream os;
  os << "timestamp_utc,empirical_total";
  for (int d = 1; d <= cfg.model_draws; ++d) os << ",draw_" << d;
  os << '\n';
  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    const auto emp = window_means(s.total, windows[wi]);
    for (std::size_t i = 0; i < windows[wi].hours.size(); ++i) {
      os << format_datetime(windows[wi].hours[i]) << ',' << format_fixed(emp[i], 3);
      for (const auto& dr : draws) os << ',' << format_fixed(dr[wi].second[i], 3);
      os << '\n';
    }
  }
  return os.str();
}

inline std::vector<fs::path> stage_plot(const PipelineConfig& cfg, const std::string& kind, Log& log) {
  if (std::find(plot_kinds().begin(), plot_kinds().end(), kind) == plot_kinds().end())
    throw UsageError("unknown plot-data kind '" + kind + "' (histogram, seasonal or timeseries)");
  const auto windows = cfg.analysis_windows();
  std::vector<fs::path> out;
  for (const auto& zone : cfg.zones) {
    const fs::path sp = series_path(cfg, zone);
    const auto series = in_stage("plot-data", sp, [&] { return read_zone_series_csv(sp, zone); });
    std::string csv;
    if (kind == "histogram") {
      const auto pmf = in_stage("plot-data", pmf_path(cfg, zone), [&] { return read_pmf_csv(pmf_path(cfg, zone)); });
      in_stage("plot-data", sp, [&] {
        std::vector<double> total, forced;
        for (const auto& w : windows) {
          const auto t = window_means(series.total, w);
          const auto f = window_means(series.forced, w);
          total.insert(total.end(), t.begin(), t.end());
          forced.insert(forced.end(), f.begin(), f.end());
        }
        csv = histogram_csv(total, forced, pmf, cfg.histogram_bin_mw);
      });
    } else if (kind == "seasonal") {
      csv = in_stage("plot-data", sp, [&] { return seasonal_csv(cfg, series, zone, log); });
    } else {
      csv = in_stage("plot-data", sp, [&] { return timeseries_csv(cfg, series, zone, windows); });
    }
    write_file(plot_path(cfg, kind, zone), csv);
    out.push_back(plot_path(cfg, kind, zone));
  }
  return out;
}

// ---------------------------------------------------------------------------
// run

inline std::string manifest_json(const PipelineConfig& cfg, std::vector<fs::path> artifacts) {
  std::sort(artifacts.begin(), artifacts.end());
  artifacts.erase(std::unique(artifacts.begin(), artifacts.end()), artifacts.end());
  nlohmann::ordered_json m;
  m["tool"] = "unavail";
  m["version"] = kVersion;
  m["config_sha256"] = sha256_hex(cfg.canonical.dump());
  m["seed"] = cfg.seed;
  m["rng"] = kRngName;
  m["params"] = params_record(cfg);
  m["zones"] = cfg.zones;
  m["document_types"] = cfg.document_types;
  m["windows"] = nlohmann::ordered_json::array();
  for (const auto& w : cfg.analysis_windows())
    m["windows"].push_back({{"label", w.label},
                            {"first_hour", format_datetime(w.hours.front())},
                            {"last_hour", format_datetime(w.hours.back())},
                            {"hours", w.hours.size()}});
  m["model_draws"] = cfg.model_draws;
  m["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : artifacts)
    m["artifacts"].push_back({{"path", fs::relative(a, cfg.output_dir).generic_string()}, {"sha256", sha256_hex(read_file(a))}});
  return m.dump(2) + "\n";
}

// All stages in order. Seasonal profiles need a year of data and are skipped
// (with a note) for shorter spans.
inline std::vector<fs::path> run_pipeline(const PipelineConfig& cfg, Log& log) {
  std::vector<fs::path> artifacts;
  auto add = [&](std::vector<fs::path> v) { artifacts.insert(artifacts.end(), v.begin(), v.end()); };
  stage_fetch(cfg, log);
  add(stage_ingest(cfg, log));
  add(stage_fleet(cfg, log));
  add(stage_model(cfg, log));
  add(stage_simulate(cfg, log));
  add(stage_stats(cfg, log));
  add(stage_plot(cfg, "histogram", log));
  add(stage_plot(cfg, "timeseries", log));
  const auto [lo, hi] = windows_span(cfg.analysis_windows());
  if (hi - lo >= Hours{365 * 24})
    add(stage_plot(cfg, "seasonal", log));
  else
    log("plot-data: seasonal profiles skipped (analysis span shorter than one year)");
  write_file(manifest_path(cfg), manifest_json(cfg, artifacts));
  artifacts.push_back(manifest_path(cfg));
  return artifacts;
}

}  // namespace unavail::pipeline

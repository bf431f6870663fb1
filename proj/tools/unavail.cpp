// unavail: command-line front end for the outage data and model pipeline.
//
//   unavail <subcommand> --config <path> [--zone Z]... [--season 16/17]... [--seed N]
//
// Exit codes: 0 success, 1 other error, 2 usage, 3 auth, 4 fetch, 5 parse, 6 stats.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unavail/pipeline/pipeline.hpp"

namespace {

using namespace unavail;
using namespace unavail::pipeline;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage: return 2;
    case ErrorKind::Auth: return 3;
    case ErrorKind::Fetch: return 4;
    case ErrorKind::Parse: return 5;
    case ErrorKind::Stats: return 6;
    default: return 1;
  }
}

struct Common {
  std::string config;
  std::vector<std::string> zones;
  std::vector<std::string> seasons;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Pipeline configuration (JSON)")->required()->check(CLI::ExistingFile);
  sub->add_option("--zone", c.zones, "Zone to process (repeatable; overrides the config)");
  sub->add_option("--season", c.seasons, "Winter label such as 16/17 (repeatable; overrides the config)");
  sub->add_option("--seed", c.seed, "Random seed (overrides the config)");
  sub->add_flag("-q,--quiet", c.quiet, "Only print warnings and errors");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generator unavailability: platform data ingestion, outage models and comparison statistics"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;
  std::string plot_kind;
  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs{
      {"fetch", "Download uncached days from the platform into the cache"},
      {"ingest", "Parse cached documents into reconciled hourly series per zone"},
      {"fleet", "Synthesize a unit fleet per zone from the registry"},
      {"model", "Convolve the fleet into a capacity-outage PMF"},
      {"simulate", "Draw time-sequential fleet outage series"},
      {"stats", "Compute comparison statistics (mean, IQR, reconciliation error, ACF)"},
      {"plot-data", "Write plot-ready CSV (histogram, seasonal, timeseries)"},
      {"run", "Run every stage and write the manifest"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, common);
    if (std::string(s.name) == "plot-data")
      sub->add_option("kind", plot_kind, "histogram | seasonal | timeseries")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  Log log([&](const std::string& line) {
    const bool important = line.rfind("warning:", 0) == 0;
    if (important || !common.quiet) std::cerr << line << '\n';
  });

  try {
    const PipelineConfig cfg = load_config(common.config, {common.zones, common.seasons, common.seed});
    std::vector<fs::path> written;
    if (cmd == "fetch") {
      stage_fetch(cfg, log);
    } else if (cmd == "ingest") {
      written = stage_ingest(cfg, log);
    } else if (cmd == "fleet") {
      written = stage_fleet(cfg, log);
    } else if (cmd == "model") {
      written = stage_model(cfg, log);
    } else if (cmd == "simulate") {
      written = stage_simulate(cfg, log);
    } else if (cmd == "stats") {
      written = stage_stats(cfg, log);
    } else if (cmd == "plot-data") {
      written = stage_plot(cfg, plot_kind, log);
    } else {
      written = run_pipeline(cfg, log);
    }
    for (const auto& p : written) std::cout << p.string() << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

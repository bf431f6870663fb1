#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unavail/error.hpp"
#include "unavail/io.hpp"
#include "unavail/stats.hpp"
#include "unavail/time.hpp"

namespace unavail::pipeline {

struct ApiSettings {
  std::string base_url = "https://web-api.tp.entsoe.eu/api";
  std::string token_env = "ENTSOE_API_TOKEN";
  std::string token;  // resolved secret; never written to any artifact
  int request_delay_ms = 500;
  int max_retries = 4;
  int backoff_ms = 1000;
  int max_in_flight = 4;
  int timeout_s = 60;
  int page_size = 200;
  int max_pages = 100;
};

struct WindowSpec {
  std::string label;
  MinuteTime start{};
  MinuteTime end{};
};

struct PipelineConfig {
  std::vector<std::string> zones;
  std::vector<std::string> seasons;  // winter labels such as "16/17"
  std::vector<WindowSpec> windows;   // extra contiguous analysis windows
  fs::path cache_dir;
  fs::path output_dir;
  std::optional<fs::path> model_params_path;
  fs::path registry_path;            // unit sizes pooled for fleet synthesis
  fs::path installed_capacity_path;  // per-zone, per-fuel targets
  std::optional<fs::path> unit_nominals_path;
  std::optional<fs::path> demand_path;
  std::vector<std::string> document_types{"A80", "A77"};
  std::uint64_t seed = 1;
  int model_draws = 3;
  int histogram_bin_mw = 500;
  std::map<std::string, std::string> zone_codes;  // zone -> EIC domain code
  ApiSettings api;

  nlohmann::ordered_json canonical;  // effective settings as written, secret removed

  std::vector<WinterWindow> analysis_windows() const {
    std::vector<WinterWindow> out;
    for (const auto& s : seasons) out.push_back(winter_window(parse_season_label(s)));
    for (const auto& w : windows)
      out.push_back(make_window(w.label, std::chrono::floor<Hours>(w.start), std::chrono::ceil<Hours>(w.end)));
    if (out.empty()) throw UsageError("no seasons or windows configured");
    return out;
  }

  std::string zone_code(const std::string& zone) const {
    const auto it = zone_codes.find(zone);
    if (it == zone_codes.end()) throw UsageError("no platform domain code configured for zone '" + zone + "'");
    return it->second;
  }

  std::map<std::string, std::string> zone_by_code() const {
    std::map<std::string, std::string> out;
    for (const auto& [z, c] : zone_codes) out[c] = z;
    return out;
  }
};

// Bidding-zone EIC codes used when the config does not override them.
inline std::map<std::string, std::string> default_zone_codes() {
  return {
      {"BE", "10YBE----------2"}, {"DE", "10Y1001A1001A82H"}, {"DK", "10Y1001A1001A65H"},
      {"ES", "10YES-REE------0"}, {"FR", "10YFR-RTE------C"}, {"GB", "10YGB----------A"},
      {"IE", "10Y1001A1001A59C"}, {"NL", "10YNL----------L"}, {"NO", "10YNO-0--------C"},
  };
}

struct Overrides {
  std::vector<std::string> zones;
  std::vector<std::string> seasons;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace detail

// JSON config. Relative paths are resolved against the config file's directory.
// The API token comes from the environment variable named by api.token_env, or
// from api.token in the file.
inline PipelineConfig parse_config(const std::string& text, const fs::path& base_dir, const Overrides& ov = {},
                                   const std::string& source = "<config>") {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(source + ": malformed config: " + e.what());
  }
  if (!j.is_object()) throw UsageError(source + ": config must be a JSON object");

  PipelineConfig c;
  try {
    if (!ov.zones.empty()) j["zones"] = ov.zones;
    if (!ov.seasons.empty()) j["seasons"] = ov.seasons;
    if (ov.seed) j["seed"] = *ov.seed;

    c.zones = j.value("zones", std::vector<std::string>{});
    c.seasons = j.value("seasons", std::vector<std::string>{});
    for (const auto& s : c.seasons) parse_season_label(s);
    if (j.contains("windows")) {
      for (const auto& w : j.at("windows")) {
        WindowSpec spec{w.at("label").get<std::string>(), parse_datetime(w.at("start").get<std::string>()),
                        parse_datetime(w.at("end").get<std::string>())};
        if (!(spec.end > spec.start)) throw UsageError("window '" + spec.label + "': end must follow start");
        c.windows.push_back(std::move(spec));
      }
    }
    c.cache_dir = detail::resolve(base_dir, j.value("cache_dir", std::string("cache")));
    c.output_dir = detail::resolve(base_dir, j.value("output_dir", std::string("out")));
    c.registry_path = detail::resolve(base_dir, j.at("registry_path").get<std::string>());
    c.installed_capacity_path = detail::resolve(base_dir, j.at("installed_capacity_path").get<std::string>());
    auto opt_path = [&](const char* key) -> std::optional<fs::path> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return detail::resolve(base_dir, j.at(key).get<std::string>());
    };
    c.model_params_path = opt_path("model_params_path");
    c.unit_nominals_path = opt_path("unit_nominals_path");
    c.demand_path = opt_path("demand_path");
    c.document_types = j.value("document_types", c.document_types);
    for (const auto& d : c.document_types)
      if (d != "A77" && d != "A80") throw UsageError("unsupported document type '" + d + "' (A77 or A80)");
    c.seed = j.value("seed", c.seed);
    c.model_draws = j.value("model_draws", c.model_draws);
    c.histogram_bin_mw = j.value("histogram_bin_mw", c.histogram_bin_mw);
    c.zone_codes = default_zone_codes();
    if (j.contains("zone_codes"))
      for (const auto& [z, code] : j.at("zone_codes").items()) c.zone_codes[z] = code.get<std::string>();

    if (j.contains("api")) {
      const auto& a = j.at("api");
      c.api.base_url = a.value("base_url", c.api.base_url);
      c.api.token_env = a.value("token_env", c.api.token_env);
      c.api.token = a.value("token", std::string());
      c.api.request_delay_ms = a.value("request_delay_ms", c.api.request_delay_ms);
      c.api.max_retries = a.value("max_retries", c.api.max_retries);
      c.api.backoff_ms = a.value("backoff_ms", c.api.backoff_ms);
      c.api.max_in_flight = a.value("max_in_flight", c.api.max_in_flight);
      c.api.timeout_s = a.value("timeout_s", c.api.timeout_s);
      c.api.page_size = a.value("page_size", c.api.page_size);
      c.api.max_pages = a.value("max_pages", c.api.max_pages);
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(source + ": " + e.what());
  } catch (const InvalidInput& e) {
    throw UsageError(source + ": " + e.what());
  }
  if (!c.api.token_env.empty()) {
    if (const char* env = std::getenv(c.api.token_env.c_str()); env && *env) c.api.token = env;
  }
  if (c.zones.empty()) throw UsageError(source + ": no zones configured");
  for (std::size_t i = 0; i < c.zones.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (c.zones[i] == c.zones[k]) throw UsageError(source + ": zone '" + c.zones[i] + "' listed twice");
  if (c.model_draws < 1) throw UsageError(source + ": model_draws must be >= 1");
  if (c.histogram_bin_mw < 1) throw UsageError(source + ": histogram_bin_mw must be >= 1");
  if (c.api.page_size < 1 || c.api.max_in_flight < 1 || c.api.max_retries < 0)
    throw UsageError(source + ": invalid api settings");

  c.canonical = j;
  if (c.canonical.contains("api")) c.canonical["api"].erase("token");
  return c;
}

inline PipelineConfig load_config(const fs::path& path, const Overrides& ov = {}) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  return parse_config(text, fs::absolute(path).parent_path(), ov, path.string());
}

}  // namespace unavail::pipeline

#pragma once

// Client for the transparency platform's unavailability endpoint. Each UTC day
// is requested separately, following the platform's offset paging, and stored
// in the disk cache before it is returned. Cached days never touch the network.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "unavail/error.hpp"
#include "unavail/pipeline/cache.hpp"
#include "unavail/pipeline/config.hpp"
#include "unavail/time.hpp"
#include "unavail/zip.hpp"

namespace unavail::pipeline {

// Serializes request start times so consecutive calls are at least `delay` apart.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds delay) : delay_(delay) {}

  void acquire() {
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      slot = std::max(now, next_);
      next_ = slot + delay_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::mutex mu_;
  std::chrono::milliseconds delay_;
  std::chrono::steady_clock::time_point next_{};
};

struct HttpResult {
  int status = 0;  // 0: no response (connection failure, timeout)
  std::string body;
  std::string error;
};

class PlatformClient {
 public:
  explicit PlatformClient(ApiSettings settings)
      : settings_(std::move(settings)), limiter_(std::chrono::milliseconds(settings_.request_delay_ms)) {
    const std::string& url = settings_.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw UsageError("api.base_url must include a scheme: '" + url + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  }

  const ApiSettings& settings() const { return settings_; }

  // One GET. Thread-safe: each call uses its own connection.
  HttpResult get(const httplib::Params& params) {
    limiter_.acquire();
    httplib::Client cli(origin_);
    cli.set_connection_timeout(settings_.timeout_s, 0);
    cli.set_read_timeout(settings_.timeout_s, 0);
    cli.set_follow_location(true);
    auto res = cli.Get(path_, params, httplib::Headers{});
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
  }

 private:
  ApiSettings settings_;
  RateLimiter limiter_;
  std::string origin_;
  std::string path_;
};

struct FetchRequest {
  CacheKey key;
  std::string domain_code;
};

namespace detail {

inline std::string xml_root_name(std::string_view doc) {
  std::size_t pos = 0;
  while ((pos = doc.find('<', pos)) != std::string_view::npos) {
    if (pos + 1 < doc.size() && (doc[pos + 1] == '?' || doc[pos + 1] == '!')) {
      ++pos;
      continue;
    }
    const auto end = doc.find_first_of(" \t\r\n/>", pos + 1);
    std::string name(doc.substr(pos + 1, end - pos - 1));
    if (const auto colon = name.find(':'); colon != std::string::npos) name.erase(0, colon + 1);
    return name;
  }
  return {};
}

inline bool is_acknowledgement(std::string_view body) {
  return !zip::looks_like_zip(body) && xml_root_name(body) == "Acknowledgement_MarketDocument";
}

// Documents carried by one response page.
inline std::vector<zip::Entry> page_documents(const std::string& body, int page) {
  if (zip::looks_like_zip(body)) {
    auto entries = zip::read_entries(body);
    for (auto& e : entries) e.name = "p" + std::to_string(page) + "/" + e.name;
    return entries;
  }
  if (is_acknowledgement(body)) return {};
  return {{"p" + std::to_string(page) + ".xml", body}};
}

inline std::string utc_now_iso() {
  return format_datetime(std::chrono::floor<Minutes>(std::chrono::system_clock::now()));
}

// GET with retries: 401/403 fail immediately; 429, 5xx and transport failures
// are retried with exponential backoff; other statuses fail without retry.
inline std::string get_with_retry(PlatformClient& client, const httplib::Params& params, const std::string& what) {
  const ApiSettings& s = client.settings();
  std::string last;
  for (int attempt = 0; attempt <= s.max_retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long long>(s.backoff_ms) << (attempt - 1)));
    const HttpResult r = client.get(params);
    if (r.status == 200) return r.body;
    if (r.status == 401 || r.status == 403)
      throw AuthError(what + ": platform rejected the API token (HTTP " + std::to_string(r.status) + ")");
    // The platform answers "no data" with an acknowledgement document.
    if (r.status == 400 && is_acknowledgement(r.body) && r.body.find("No matching data") != std::string::npos)
      return r.body;
    last = r.status == 0 ? r.error : "HTTP " + std::to_string(r.status);
    const bool retryable = r.status == 0 || r.status == 429 || r.status >= 500;
    if (!retryable) throw FetchError(what + ": " + last);
  }
  throw FetchError(what + ": giving up after " + std::to_string(s.max_retries + 1) + " attempts (" + last + ")");
}

}  // namespace detail

// Raw document(s) for one zone/day/document type, served from the cache when
// present and otherwise fetched, cached and returned. Multi-page days are
// bundled into a single stored ZIP of all page documents.
inline CacheEntry fetch_day(const FetchRequest& req, PlatformClient& client, DiskCache& cache) {
  if (auto hit = cache.get(req.key)) return *hit;
  const ApiSettings& s = client.settings();
  if (s.token.empty())
    throw AuthError("no API token: set the " + s.token_env + " environment variable or api.token in the config");

  const std::string what =
      req.key.zone + " " + req.key.doc_type + " " + format_date(req.key.date);
  const MinuteTime start{req.key.date};
  const MinuteTime end = start + Days{1};
  std::vector<std::string> pages;
  std::vector<zip::Entry> documents;
  for (int page = 0;; ++page) {
    if (page >= s.max_pages) throw FetchError(what + ": more than " + std::to_string(s.max_pages) + " pages");
    httplib::Params params{{"securityToken", s.token},
                           {"documentType", req.key.doc_type},
                           {"BiddingZone_Domain", req.domain_code},
                           {"periodStart", format_compact(start)},
                           {"periodEnd", format_compact(end)}};
    if (page > 0) params.emplace("offset", std::to_string(page * s.page_size));
    std::string body = detail::get_with_retry(client, params, what);
    std::vector<zip::Entry> docs;
    try {
      docs = detail::page_documents(body, page);
    } catch (const ParseError& e) {
      throw FetchError(what + ": malformed response: " + e.what());
    }
    const bool more = static_cast<int>(docs.size()) >= s.page_size;
    pages.push_back(std::move(body));
    for (auto& d : docs) documents.push_back(std::move(d));
    if (!more) break;
  }
  std::string payload = pages.size() == 1 ? std::move(pages.front()) : zip::write_stored(documents);
  return cache.put(req.key, std::move(payload), detail::utc_now_iso(), static_cast<int>(pages.size()));
}

struct FetchSummary {
  std::size_t cached = 0;
  std::size_t fetched = 0;
};

// Fetches all requests with at most `max_in_flight` concurrent downloads.
// On failure the error of the earliest failing request (in input order) is
// rethrown after all workers stop.
inline FetchSummary fetch_all(const std::vector<FetchRequest>& requests, PlatformClient& client, DiskCache& cache,
                              const std::function<void(const std::string&)>& log = {}) {
  FetchSummary summary;
  std::vector<const FetchRequest*> todo;
  for (const auto& r : requests) {
    if (cache.contains(r.key))
      ++summary.cached;
    else
      todo.push_back(&r);
  }
  if (todo.empty()) return summary;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t first_error_index = todo.size();
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size() || failed.load()) return;
      try {
        fetch_day(*todo[i], client, cache);
        std::lock_guard lock(mu);
        ++summary.fetched;
        if (log) log("fetched " + todo[i]->key.zone + " " + todo[i]->key.doc_type + " " + format_date(todo[i]->key.date));
      } catch (...) {
        std::lock_guard lock(mu);
        failed = true;
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(client.settings().max_in_flight), todo.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return summary;
}

}  // namespace unavail::pipeline

#pragma once

// Append-only on-disk cache of raw platform responses: one payload file per
// (zone, UTC day, document type), next to a small JSON record holding the
// content hash and fetch time. The record is written last and marks the entry
// as complete; an existing entry is never rewritten.

#include <optional>
#include <string>

#include "json.hpp"
#include "unavail/error.hpp"
#include "unavail/io.hpp"
#include "unavail/time.hpp"
#include "unavail/zip.hpp"

namespace unavail::pipeline {

struct CacheKey {
  std::string zone;
  DayTime date{};
  std::string doc_type;
};

struct CacheEntry {
  CacheKey key;
  std::string payload;
  std::string fetched_at;  // ISO-8601 UTC
  std::string sha256;
  int pages = 1;
};

class DiskCache {
 public:
  explicit DiskCache(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }

  fs::path directory(const CacheKey& k) const { return root_ / k.zone / k.doc_type; }
  fs::path record_path(const CacheKey& k) const { return directory(k) / (format_date(k.date) + ".json"); }
  fs::path payload_path(const CacheKey& k, std::string_view payload) const {
    return directory(k) / (format_date(k.date) + (zip::looks_like_zip(payload) ? ".zip" : ".xml"));
  }

  bool contains(const CacheKey& k) const { return fs::exists(record_path(k)); }

  // The entry, with its payload verified against the recorded hash.
  std::optional<CacheEntry> get(const CacheKey& k) const {
    const fs::path rec_path = record_path(k);
    if (!fs::exists(rec_path)) return std::nullopt;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(read_file(rec_path));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("corrupt cache record '" + rec_path.string() + "': " + e.what());
    }
    CacheEntry e;
    e.key = k;
    const fs::path payload = directory(k) / rec.at("file").get<std::string>();
    e.payload = read_file(payload);
    e.fetched_at = rec.at("fetched_at").get<std::string>();
    e.sha256 = rec.at("sha256").get<std::string>();
    e.pages = rec.value("pages", 1);
    if (sha256_hex(e.payload) != e.sha256)
      throw IoError("cache entry '" + payload.string() + "' does not match its recorded hash");
    return e;
  }

  // Stores the entry unless one already exists; returns what is on disk.
  CacheEntry put(const CacheKey& k, std::string payload, std::string fetched_at, int pages = 1) {
    if (auto existing = get(k)) return *existing;
    CacheEntry e{k, std::move(payload), std::move(fetched_at), {}, pages};
    e.sha256 = sha256_hex(e.payload);
    const fs::path file = payload_path(k, e.payload);
    write_file(file, e.payload);
    nlohmann::ordered_json rec;
    rec["zone"] = k.zone;
    rec["date"] = format_date(k.date);
    rec["document_type"] = k.doc_type;
    rec["file"] = file.filename().string();
    rec["bytes"] = e.payload.size();
    rec["sha256"] = e.sha256;
    rec["pages"] = pages;
    rec["fetched_at"] = e.fetched_at;
    write_file(record_path(k), rec.dump(2) + "\n");
    return e;
  }

 private:
  fs::path root_;
};

}  // namespace unavail::pipeline

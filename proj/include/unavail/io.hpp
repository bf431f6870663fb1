#pragma once

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "unavail/error.hpp"

namespace unavail {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open '" + p.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes through a temporary sibling and renames, so readers never observe a
// partially written file.
inline void write_file(const fs::path& p, std::string_view bytes) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, p);
}

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

// Fixed-point formatting that never prints "-0.000".
inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// Round-trip-exact formatting for probabilities and other values that are read back.
inline std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Minimal CSV: comma separated, header row, optional double quotes around fields.
class CsvTable {
 public:
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }

  std::size_t column(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw InvalidInput("missing CSV column '" + std::string(name) + "'");
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

inline CsvTable parse_csv(std::string_view text, const std::string& source = "<csv>") {
  CsvTable t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (nl == text.size()) break;
      continue;
    }
    auto fields = detail::split_csv_line(line);
    if (t.header.empty()) {
      if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
      t.header = std::move(fields);
    } else {
      if (fields.size() != t.header.size())
        throw ParseError(source + ":" + std::to_string(line_no),
                         "expected " + std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
      t.rows.push_back(std::move(fields));
    }
    if (nl == text.size()) break;
  }
  if (t.header.empty()) throw ParseError(source, "empty CSV (no header)");
  return t;
}

inline CsvTable read_csv(const fs::path& p) { return parse_csv(read_file(p), p.string()); }

inline double parse_double(std::string_view s, std::string_view what) {
  std::string tmp(s);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tmp, &used);
  } catch (const std::exception&) {
    throw InvalidInput("invalid number '" + tmp + "' for " + std::string(what));
  }
  if (used != tmp.size() || !std::isfinite(v))
    throw InvalidInput("invalid number '" + tmp + "' for " + std::string(what));
  return v;
}

inline long long parse_integer(std::string_view s, std::string_view what) {
  std::string tmp(s);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tmp, &used);
  } catch (const std::exception&) {
    throw InvalidInput("invalid integer '" + tmp + "' for " + std::string(what));
  }
  if (used != tmp.size()) throw InvalidInput("invalid integer '" + tmp + "' for " + std::string(what));
  return v;
}

}  // namespace unavail

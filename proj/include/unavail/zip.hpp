#pragma once

// Reader for the ZIP containers the platform API returns when a query matches
// more than one document (stored and deflated entries), plus a writer for
// stored archives used to bundle multi-page responses into a single file.

#include <zlib.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unavail/error.hpp"

namespace unavail::zip {

struct Entry {
  std::string name;
  std::string data;
};

inline bool looks_like_zip(std::string_view bytes) {
  return bytes.size() >= 4 && bytes.substr(0, 4) == std::string_view("PK\x03\x04", 4);
}

namespace detail {

inline std::uint32_t le(std::string_view b, std::size_t pos, int n) {
  if (pos + static_cast<std::size_t>(n) > b.size()) throw ParseError("zip", "truncated archive");
  std::uint32_t v = 0;
  for (int i = n - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[pos + static_cast<std::size_t>(i)]);
  return v;
}

inline std::string inflate_raw(std::string_view in, std::size_t expected, const std::string& name) {
  if (expected == 0) return {};
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ParseError("zip:" + name, "inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected) throw ParseError("zip:" + name, "corrupt deflate stream");
  return out;
}

}  // namespace detail

// Entries in central-directory order.
inline std::vector<Entry> read_entries(std::string_view bytes) {
  using detail::le;
  if (bytes.size() < 22) throw ParseError("zip", "archive too short");
  // End-of-central-directory record, searched backwards past a trailing comment.
  std::size_t eocd = std::string_view::npos;
  const std::size_t lowest = bytes.size() > 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
  for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
    if (le(bytes, i, 4) == 0x06054b50) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string_view::npos) throw ParseError("zip", "end of central directory not found");
  const std::uint32_t count = le(bytes, eocd + 10, 2);
  std::size_t pos = le(bytes, eocd + 16, 4);

  std::vector<Entry> out;
  out.reserve(count);
  for (std::uint32_t k = 0; k < count; ++k) {
    if (le(bytes, pos, 4) != 0x02014b50) throw ParseError("zip", "bad central directory entry " + std::to_string(k));
    const std::uint32_t method = le(bytes, pos + 10, 2);
    const std::uint32_t crc = le(bytes, pos + 16, 4);
    const std::uint32_t csize = le(bytes, pos + 20, 4);
    const std::uint32_t usize = le(bytes, pos + 24, 4);
    const std::uint32_t name_len = le(bytes, pos + 28, 2);
    const std::uint32_t extra_len = le(bytes, pos + 30, 2);
    const std::uint32_t comment_len = le(bytes, pos + 32, 2);
    const std::uint32_t local = le(bytes, pos + 42, 4);
    if (pos + 46 + name_len > bytes.size()) throw ParseError("zip", "truncated central directory");
    Entry e;
    e.name = std::string(bytes.substr(pos + 46, name_len));
    pos += 46 + name_len + extra_len + comment_len;

    if (le(bytes, local, 4) != 0x04034b50) throw ParseError("zip:" + e.name, "bad local header");
    const std::size_t data_at = local + 30 + le(bytes, local + 26, 2) + le(bytes, local + 28, 2);
    if (data_at + csize > bytes.size()) throw ParseError("zip:" + e.name, "truncated entry data");
    const std::string_view raw = bytes.substr(data_at, csize);
    if (method == 0) {
      e.data = std::string(raw);
    } else if (method == 8) {
      e.data = detail::inflate_raw(raw, usize, e.name);
    } else {
      throw ParseError("zip:" + e.name, "unsupported compression method " + std::to_string(method));
    }
    const auto actual = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(e.data.data()), static_cast<uInt>(e.data.size())));
    if (actual != crc) throw ParseError("zip:" + e.name, "CRC mismatch");
    if (e.name.empty() || e.name.back() != '/') out.push_back(std::move(e));
  }
  return out;
}

namespace detail {

inline void put_le(std::string& out, std::uint32_t v, int n) {
  for (int i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace detail

// Uncompressed archive with fixed (zero) timestamps, so identical entries give
// identical bytes.
inline std::string write_stored(const std::vector<Entry>& entries) {
  using detail::put_le;
  if (entries.size() > 0xffff) throw InvalidInput("zip: too many entries");
  std::string body, central;
  for (const auto& e : entries) {
    if (e.data.size() > 0xffffffffULL || body.size() > 0xffffffffULL || e.name.size() > 0xffff)
      throw InvalidInput("zip: entry too large");
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(e.data.data()), static_cast<uInt>(e.data.size())));
    const auto size = static_cast<std::uint32_t>(e.data.size());
    const auto offset = static_cast<std::uint32_t>(body.size());
    const auto name_len = static_cast<std::uint32_t>(e.name.size());

    put_le(body, 0x04034b50, 4);
    put_le(body, 20, 2);  // version needed
    put_le(body, 0, 2);   // flags
    put_le(body, 0, 2);   // method: stored
    put_le(body, 0, 2);   // time
    put_le(body, 0x21, 2);  // date: 1980-01-01
    put_le(body, crc, 4);
    put_le(body, size, 4);
    put_le(body, size, 4);
    put_le(body, name_len, 2);
    put_le(body, 0, 2);
    body += e.name;
    body += e.data;

    put_le(central, 0x02014b50, 4);
    put_le(central, 20, 2);  // version made by
    put_le(central, 20, 2);
    put_le(central, 0, 2);
    put_le(central, 0, 2);
    put_le(central, 0, 2);
    put_le(central, 0x21, 2);
    put_le(central, crc, 4);
    put_le(central, size, 4);
    put_le(central, size, 4);
    put_le(central, name_len, 2);
    put_le(central, 0, 2);  // extra
    put_le(central, 0, 2);  // comment
    put_le(central, 0, 2);  // disk
    put_le(central, 0, 2);  // internal attrs
    put_le(central, 0, 4);  // external attrs
    put_le(central, offset, 4);
    central += e.name;
  }
  std::string out = body + central;
  put_le(out, 0x06054b50, 4);
  put_le(out, 0, 2);
  put_le(out, 0, 2);
  put_le(out, static_cast<std::uint32_t>(entries.size()), 2);
  put_le(out, static_cast<std::uint32_t>(entries.size()), 2);
  put_le(out, static_cast<std::uint32_t>(central.size()), 4);
  put_le(out, static_cast<std::uint32_t>(body.size()), 4);
  put_le(out, 0, 2);
  return out;
}

}  // namespace unavail::zip

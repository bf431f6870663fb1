#pragma once

// Builders for platform unavailability XML documents and ZIP containers.

#include <zlib.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fixture {

struct Point {
  long position;
  double quantity;  // available MW
};

struct Series {
  std::string business = "A54";
  std::string unit = "48W00000UNIT001A";
  std::string psr = "B04";
  double nominal = 400;
  std::string start;  // interval, e.g. "2017-02-01T00:00Z"
  std::string end;
  std::string resolution = "PT1M";
  std::vector<Point> points;
  std::string curve = "A03";
  std::string domain = "10YGB----------A";
};

inline std::string num(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

inline std::string document(const std::string& mrid, int revision, const std::vector<Series>& series,
                            const std::string& status = "A05", const std::string& type = "A80") {
  std::string x = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  x += "<Unavailability_MarketDocument xmlns=\"urn:iec62325.351:tc57wg16:451-6:outagedocument:3:0\">\n";
  x += "  <mRID>" + mrid + "</mRID>\n";
  x += "  <revisionNumber>" + std::to_string(revision) + "</revisionNumber>\n";
  x += "  <type>" + type + "</type>\n";
  x += "  <process.processType>A26</process.processType>\n";
  x += "  <createdDateTime>2017-01-01T00:00:00Z</createdDateTime>\n";
  for (const auto& s : series) {
    x += "  <TimeSeries>\n";
    x += "    <mRID>1</mRID>\n";
    x += "    <businessType>" + s.business + "</businessType>\n";
    x += "    <biddingZone_Domain.mRID codingScheme=\"A01\">" + s.domain + "</biddingZone_Domain.mRID>\n";
    x += "    <quantity_Measure_Unit.name>MAW</quantity_Measure_Unit.name>\n";
    x += "    <curveType>" + s.curve + "</curveType>\n";
    x += "    <production_RegisteredResource.mRID codingScheme=\"A01\">" + s.unit + "-PU</production_RegisteredResource.mRID>\n";
    x += "    <production_RegisteredResource.name>Test Station</production_RegisteredResource.name>\n";
    x += "    <production_RegisteredResource.pSRType.psrType>" + s.psr + "</production_RegisteredResource.pSRType.psrType>\n";
    x += "    <production_RegisteredResource.pSRType.powerSystemResources.mRID codingScheme=\"A01\">" + s.unit +
         "</production_RegisteredResource.pSRType.powerSystemResources.mRID>\n";
    x += "    <production_RegisteredResource.pSRType.powerSystemResources.nominalP unit=\"MAW\">" + num(s.nominal) +
         "</production_RegisteredResource.pSRType.powerSystemResources.nominalP>\n";
    x += "    <Available_Period>\n";
    x += "      <timeInterval><start>" + s.start + "</start><end>" + s.end + "</end></timeInterval>\n";
    x += "      <resolution>" + s.resolution + "</resolution>\n";
    for (const auto& p : s.points)
      x += "      <Point><position>" + std::to_string(p.position) + "</position><quantity>" + num(p.quantity) +
           "</quantity></Point>\n";
    x += "    </Available_Period>\n";
    x += "  </TimeSeries>\n";
  }
  x += "  <docStatus><value>" + status + "</value></docStatus>\n";
  x += "  <Reason><code>B18</code></Reason>\n";
  x += "</Unavailability_MarketDocument>\n";
  return x;
}

inline std::string acknowledgement() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<Acknowledgement_MarketDocument xmlns=\"urn:iec62325.351:tc57wg16:451-1:acknowledgementdocument:7:0\">\n"
         "  <mRID>ack</mRID>\n"
         "  <Reason><code>999</code><text>No matching data found</text></Reason>\n"
         "</Acknowledgement_MarketDocument>\n";
}

inline void put16(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
}
inline void put32(std::string& s, std::uint32_t v) {
  put16(s, v & 0xffff);
  put16(s, v >> 16);
}

inline std::string deflate_raw(const std::string& in) {
  z_stream zs{};
  deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY);
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  return out;
}

// Entries alternate between stored and deflated.
inline std::string zip(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string body, central;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [name, data] = entries[i];
    const bool deflated = i % 2 == 1;
    const std::string payload = deflated ? deflate_raw(data) : data;
    const auto crc = static_cast<std::uint32_t>(
        crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
    const auto offset = static_cast<std::uint32_t>(body.size());
    put32(body, 0x04034b50);
    put16(body, 20);
    put16(body, 0);
    put16(body, deflated ? 8 : 0);
    put16(body, 0);
    put16(body, 0);
    put32(body, crc);
    put32(body, static_cast<std::uint32_t>(payload.size()));
    put32(body, static_cast<std::uint32_t>(data.size()));
    put16(body, static_cast<std::uint32_t>(name.size()));
    put16(body, 0);
    body += name;
    body += payload;

    put32(central, 0x02014b50);
    put16(central, 20);
    put16(central, 20);
    put16(central, 0);
    put16(central, deflated ? 8 : 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, crc);
    put32(central, static_cast<std::uint32_t>(payload.size()));
    put32(central, static_cast<std::uint32_t>(data.size()));
    put16(central, static_cast<std::uint32_t>(name.size()));
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put16(central, 0);
    put32(central, 0);
    put32(central, offset);
    central += name;
  }
  std::string out = body + central;
  put32(out, 0x06054b50);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint32_t>(entries.size()));
  put16(out, static_cast<std::uint32_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, static_cast<std::uint32_t>(body.size()));
  put16(out, 0);
  return out;
}

}  // namespace fixture

#pragma once

// Outage report ingestion: platform XML / JSON-lines parsing, de-duplication,
// plausibility filtering and min/max reconciliation into hourly series.

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <iterator>
#include <vector>

#include "json.hpp"

#include "unavail/error.hpp"
#include "unavail/fuel.hpp"
#include "unavail/io.hpp"
#include "unavail/time.hpp"
#include "unavail/zip.hpp"

namespace unavail {

enum class OutageKind { Forced, Planned };
enum class ReportStatus { Active, Withdrawn };

inline std::string_view kind_name(OutageKind k) { return k == OutageKind::Forced ? "Forced" : "Planned"; }
inline std::string_view status_name(ReportStatus s) { return s == ReportStatus::Active ? "Active" : "Withdrawn"; }

// One unavailability interval for one unit. A platform document with several
// time series or curve points yields one report per interval, all sharing the
// document's report_id and revision.
struct OutageReport {
  std::string report_id;
  int revision = 1;
  std::string unit_id;
  std::string zone;
  Fuel fuel = Fuel::Other;
  double nominal_mw = 0;
  MinuteTime start{};
  MinuteTime end{};
  double unavailable_mw = 0;
  OutageKind kind = OutageKind::Forced;
  ReportStatus status = ReportStatus::Active;

  void validate() const {
    if (!(end > start)) throw InvalidInput("report '" + report_id + "': end must be after start");
    if (!(unavailable_mw >= 0) || !std::isfinite(unavailable_mw))
      throw InvalidInput("report '" + report_id + "': unavailable_mw must be >= 0");
    if (!(nominal_mw > 0) || !std::isfinite(nominal_mw))
      throw InvalidInput("report '" + report_id + "': nominal_mw must be > 0");
  }

  friend bool operator==(const OutageReport&, const OutageReport&) = default;
};

struct ParseWarning {
  std::string location;
  std::string message;
};

struct ParseResult {
  std::vector<OutageReport> reports;
  std::vector<ParseWarning> warnings;  // skipped records and value corrections
};

struct ParseOptions {
  std::string source = "<input>";
  // Zone assigned to every report; when empty, the document's bidding-zone
  // EIC code is looked up in zone_by_domain, falling back to the raw code.
  std::string zone;
  std::map<std::string, std::string> zone_by_domain;
};

// ---------------------------------------------------------------------------
// JSON-lines mirror format

inline nlohmann::ordered_json report_to_json(const OutageReport& r) {
  nlohmann::ordered_json j;
  j["report_id"] = r.report_id;
  j["revision"] = r.revision;
  j["unit_id"] = r.unit_id;
  j["zone"] = r.zone;
  j["fuel"] = std::string(fuel_name(r.fuel));
  j["nominal_mw"] = r.nominal_mw;
  j["start"] = format_datetime(r.start);
  j["end"] = format_datetime(r.end);
  j["unavailable_mw"] = r.unavailable_mw;
  j["kind"] = std::string(kind_name(r.kind));
  j["status"] = std::string(status_name(r.status));
  return j;
}

inline std::string reports_to_jsonl(const std::vector<OutageReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += report_to_json(r).dump();
    out += '\n';
  }
  return out;
}

namespace detail {

inline void parse_jsonl(std::string_view text, const ParseOptions& opt, ParseResult& res) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = opt.source + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where, std::string("malformed JSON: ") + e.what());
    }
    try {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind != "Forced" && kind != "Planned") {
        res.warnings.push_back({where, "skipped record with unknown kind '" + kind + "'"});
        continue;
      }
      OutageReport r;
      r.report_id = j.at("report_id").get<std::string>();
      r.revision = j.at("revision").get<int>();
      r.unit_id = j.at("unit_id").get<std::string>();
      r.zone = opt.zone.empty() ? j.at("zone").get<std::string>() : opt.zone;
      r.fuel = parse_fuel(j.at("fuel").get<std::string>());
      r.nominal_mw = j.at("nominal_mw").get<double>();
      r.start = parse_datetime(j.at("start").get<std::string>());
      r.end = parse_datetime(j.at("end").get<std::string>());
      r.unavailable_mw = j.at("unavailable_mw").get<double>();
      r.kind = kind == "Forced" ? OutageKind::Forced : OutageKind::Planned;
      const std::string status = j.value("status", std::string("Active"));
      if (status != "Active" && status != "Withdrawn") throw InvalidInput("unknown status '" + status + "'");
      r.status = status == "Active" ? ReportStatus::Active : ReportStatus::Withdrawn;
      r.validate();
      res.reports.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where, std::string("bad record: ") + e.what());
    } catch (const InvalidInput& e) {
      throw ParseError(where, e.what());
    }
  }
}

using boost::property_tree::ptree;

inline std::string_view local_name(std::string_view n) {
  const auto colon = n.find(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

inline const ptree* child(const ptree& t, std::string_view name) {
  for (const auto& [k, v] : t)
    if (local_name(k) == name) return &v;
  return nullptr;
}

inline std::vector<const ptree*> children(const ptree& t, std::string_view name) {
  std::vector<const ptree*> out;
  for (const auto& [k, v] : t)
    if (local_name(k) == name) out.push_back(&v);
  return out;
}

inline std::optional<std::string> text_of(const ptree& t, std::string_view name) {
  const ptree* c = child(t, name);
  if (!c) return std::nullopt;
  return std::string(trim(c->data()));
}

inline std::string require_text(const ptree& t, std::string_view name, const std::string& where) {
  auto v = text_of(t, name);
  if (!v || v->empty()) throw ParseError(where, "missing element '" + std::string(name) + "'");
  return *v;
}

template <class F>
auto located(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw ParseError(where, e.what());
  }
}

inline void parse_unavailability_doc(const ptree& doc, const ParseOptions& opt, const std::string& src,
                                     ParseResult& res) {
  const std::string report_id = require_text(doc, "mRID", src);
  const int revision = located(src, [&] {
    return static_cast<int>(parse_integer(require_text(doc, "revisionNumber", src), "revisionNumber"));
  });
  ReportStatus status = ReportStatus::Active;
  if (const ptree* ds = child(doc, "docStatus")) {
    const auto v = text_of(*ds, "value").value_or("");
    // A13 withdrawn, A09 cancelled
    if (v == "A13" || v == "A09") status = ReportStatus::Withdrawn;
  }

  const auto series = children(doc, "TimeSeries");
  for (std::size_t si = 0; si < series.size(); ++si) {
    const ptree& ts = *series[si];
    const std::string where = src + ": TimeSeries[" + std::to_string(si + 1) + "]";
    const std::string business = text_of(ts, "businessType").value_or("");
    OutageKind kind;
    if (business == "A53") {
      kind = OutageKind::Planned;
    } else if (business == "A54") {
      kind = OutageKind::Forced;
    } else {
      res.warnings.push_back({where, "skipped record with unknown business type '" + business + "'"});
      continue;
    }

    std::string zone = opt.zone;
    if (zone.empty()) {
      const std::string domain = text_of(ts, "biddingZone_Domain.mRID").value_or("");
      const auto it = opt.zone_by_domain.find(domain);
      zone = it == opt.zone_by_domain.end() ? domain : it->second;
    }
    std::string unit = text_of(ts, "production_RegisteredResource.pSRType.powerSystemResources.mRID").value_or("");
    if (unit.empty()) unit = require_text(ts, "production_RegisteredResource.mRID", where);
    const Fuel fuel = fuel_from_psr_type(text_of(ts, "production_RegisteredResource.pSRType.psrType").value_or(""));
    const double nominal = located(where, [&] {
      return parse_double(
          require_text(ts, "production_RegisteredResource.pSRType.powerSystemResources.nominalP", where), "nominalP");
    });
    if (!(nominal > 0)) throw ParseError(where, "nominalP must be positive");
    const std::string curve = text_of(ts, "curveType").value_or("A03");

    const auto periods = children(ts, "Available_Period");
    for (std::size_t pi = 0; pi < periods.size(); ++pi) {
      const ptree& period = *periods[pi];
      const std::string pwhere = where + "/Available_Period[" + std::to_string(pi + 1) + "]";
      const ptree* iv = child(period, "timeInterval");
      if (!iv) throw ParseError(pwhere, "missing element 'timeInterval'");
      const MinuteTime pstart = located(pwhere, [&] { return parse_datetime(require_text(*iv, "start", pwhere)); });
      const MinuteTime pend = located(pwhere, [&] { return parse_datetime(require_text(*iv, "end", pwhere)); });
      if (!(pend > pstart)) throw ParseError(pwhere, "interval end must follow start");
      const Minutes step = located(pwhere, [&] { return parse_duration(require_text(period, "resolution", pwhere)); });

      struct Pt {
        long position;
        double quantity;
      };
      std::vector<Pt> pts;
      const auto points = children(period, "Point");
      for (std::size_t k = 0; k < points.size(); ++k) {
        const std::string ptw = pwhere + "/Point[" + std::to_string(k + 1) + "]";
        Pt p{};
        located(ptw, [&] {
          p.position = static_cast<long>(parse_integer(require_text(*points[k], "position", ptw), "position"));
          p.quantity = parse_double(require_text(*points[k], "quantity", ptw), "quantity");
          return 0;
        });
        if (p.position < 1) throw ParseError(ptw, "position must be >= 1");
        pts.push_back(p);
      }
      std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.position < b.position; });

      for (std::size_t k = 0; k < pts.size(); ++k) {
        // A03 (variable-sized blocks): a point holds until the next point or the
        // end of the interval. A01: each point covers exactly one resolution step.
        const MinuteTime s = pstart + step * (pts[k].position - 1);
        MinuteTime e = pend;
        if (curve == "A01") e = s + step;
        else if (k + 1 < pts.size()) e = pstart + step * (pts[k + 1].position - 1);
        e = std::min(e, pend);
        if (!(e > s)) continue;
        OutageReport r;
        r.report_id = report_id;
        r.revision = revision;
        r.unit_id = unit;
        r.zone = zone;
        r.fuel = fuel;
        r.nominal_mw = nominal;
        r.start = s;
        r.end = e;
        r.kind = kind;
        r.status = status;
        // The platform reports the capacity still available.
        double o = nominal - pts[k].quantity;
        if (o < 0) {
          res.warnings.push_back({pwhere, "available capacity above nominal; outage clamped to 0 MW"});
          o = 0;
        }
        r.unavailable_mw = o;
        res.reports.push_back(std::move(r));
      }
    }
  }
}

inline void parse_xml(std::string_view text, const ParseOptions& opt, ParseResult& res) {
  ptree tree;
  try {
    std::istringstream in{std::string(text)};
    boost::property_tree::read_xml(in, tree, boost::property_tree::xml_parser::trim_whitespace);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw ParseError(opt.source + ":" + std::to_string(e.line()), "malformed XML: " + e.message());
  }
  for (const auto& [name, doc] : tree) {
    const auto root = local_name(name);
    if (root == "<xmlcomment>" || root == "<xmlattr>") continue;
    if (root == "Unavailability_MarketDocument") {
      parse_unavailability_doc(doc, opt, opt.source, res);
    } else if (root == "Acknowledgement_MarketDocument") {
      // "No matching data found" and similar; carries no reports.
    } else {
      throw ParseError(opt.source, "unexpected document root '" + std::string(root) + "'");
    }
  }
}

}  // namespace detail

// Accepts a platform unavailability XML document, a ZIP of such documents, or
// the normalized JSON-lines format. Blank input yields no reports.
inline ParseResult parse_document(std::string_view raw, const ParseOptions& opt = {}) {
  ParseResult res;
  if (zip::looks_like_zip(raw)) {
    for (const auto& e : zip::read_entries(raw)) {
      ParseOptions sub = opt;
      sub.source = opt.source + "!" + e.name;
      auto part = parse_document(e.data, sub);
      std::move(part.reports.begin(), part.reports.end(), std::back_inserter(res.reports));
      std::move(part.warnings.begin(), part.warnings.end(), std::back_inserter(res.warnings));
    }
    return res;
  }
  std::string_view body = raw;
  if (body.substr(0, 3) == "\xEF\xBB\xBF") body.remove_prefix(3);
  const auto t = detail::trim(body);
  if (t.empty()) return res;
  if (t.front() == '<') {
    detail::parse_xml(t, opt, res);
  } else if (t.front() == '{') {
    detail::parse_jsonl(t, opt, res);
  } else {
    throw ParseError(opt.source + ":1", "unrecognized document format");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Cleaning

// Keeps only the highest revision of each report_id, then collapses exact
// duplicates (the same document fetched for several days). First occurrence
// order is preserved.
inline std::vector<OutageReport> deduplicate(const std::vector<OutageReport>& reports) {
  std::map<std::string, int> latest;
  for (const auto& r : reports) {
    auto [it, inserted] = latest.emplace(r.report_id, r.revision);
    if (!inserted) it->second = std::max(it->second, r.revision);
  }
  std::set<std::string> seen;
  std::vector<OutageReport> out;
  for (const auto& r : reports) {
    if (r.revision != latest[r.report_id]) continue;
    const std::string k = report_to_json(r).dump();
    if (seen.insert(k).second) out.push_back(r);
  }
  return out;
}

inline constexpr double kMaxOutageOverNominal = 1.33;

struct FilterCounts {
  std::size_t withdrawn = 0;
  std::size_t renewable = 0;
  std::size_t implausible = 0;
};

// Drops withdrawn reports, renewable units, and any single report whose
// reduction exceeds 133% of the unit's nominal capacity.
inline std::vector<OutageReport> filter_reports(const std::vector<OutageReport>& reports,
                                                FilterCounts* counts = nullptr) {
  FilterCounts c;
  std::vector<OutageReport> out;
  for (const auto& r : reports) {
    if (r.status == ReportStatus::Withdrawn) {
      ++c.withdrawn;
    } else if (r.fuel == Fuel::Renewable) {
      ++c.renewable;
    } else if (r.unavailable_mw > kMaxOutageOverNominal * r.nominal_mw) {
      ++c.implausible;
    } else {
      out.push_back(r);
    }
  }
  if (counts) *counts = c;
  return out;
}

// Replaces each report's nominal capacity with the registry value when the unit
// is listed. Returns one message per unit whose reported nominal disagreed.
inline std::vector<std::string> apply_registry_nominals(std::vector<OutageReport>& reports,
                                                        const std::map<std::string, double>& nominal_by_unit) {
  std::map<std::string, std::pair<double, double>> mismatches;
  for (auto& r : reports) {
    const auto it = nominal_by_unit.find(r.unit_id);
    if (it == nominal_by_unit.end()) continue;
    if (std::abs(it->second - r.nominal_mw) > 1e-6) mismatches.emplace(r.unit_id, std::make_pair(r.nominal_mw, it->second));
    r.nominal_mw = it->second;
  }
  std::vector<std::string> msgs;
  for (const auto& [unit, v] : mismatches)
    msgs.push_back("unit " + unit + ": reported nominal " + format_fixed(v.first, 3) + " MW, registry " +
                   format_fixed(v.second, 3) + " MW (registry used)");
  return msgs;
}

// unit_id,nominal_mw
inline std::map<std::string, double> read_unit_nominals_csv(const fs::path& p) {
  const auto t = read_csv(p);
  const auto uc = t.column("unit_id");
  const auto nc = t.column("nominal_mw");
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double v = parse_double(t.rows[i][nc], "nominal_mw");
    if (!(v > 0)) throw InvalidInput(p.string() + ":" + std::to_string(i + 2) + ": nominal_mw must be positive");
    out[t.rows[i][uc]] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hourly reconciliation

struct HourlyOutageTriple {
  double o_min_mw = 0;
  double o_mean_mw = 0;
  double o_max_mw = 0;

  static HourlyOutageTriple from_bounds(double lo, double hi) { return {lo, (lo + hi) / 2.0, hi}; }
  friend bool operator==(const HourlyOutageTriple&, const HourlyOutageTriple&) = default;
};

enum class Channel { Forced, Planned, Total };

inline std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::Forced: return "forced";
    case Channel::Planned: return "planned";
    case Channel::Total: return "total";
  }
  return "?";
}

struct HourlyOutageSeries {
  std::string subject;
  Channel channel = Channel::Total;
  HourTime start{};
  std::vector<HourlyOutageTriple> triples;

  std::size_t size() const { return triples.size(); }
  HourTime hour(std::size_t i) const { return start + Hours{static_cast<long>(i)}; }
  std::vector<double> means() const {
    std::vector<double> v(triples.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = triples[i].o_mean_mw;
    return v;
  }
};

// Time-averaged instantaneous min and max over all active reports, per hour.
// Minutes with no active report count as 0 MW for both bounds. Reports are
// clipped to the period.
inline std::vector<HourlyOutageTriple> reconcile_hourly(const std::vector<const OutageReport*>& reports,
                                                        HourTime start, std::size_t n_hours) {
  const MinuteTime t0 = std::chrono::time_point_cast<Minutes>(start);
  const long span = static_cast<long>(n_hours) * 60;

  // (minute offset, +1 start / -1 end, value)
  std::vector<std::tuple<long, int, double>> events;
  events.reserve(reports.size() * 2);
  for (const OutageReport* r : reports) {
    const long s = std::max<long>(0, (r->start - t0).count());
    const long e = std::min<long>(span, (r->end - t0).count());
    if (e <= s) continue;
    events.emplace_back(s, +1, r->unavailable_mw);
    events.emplace_back(e, -1, r->unavailable_mw);
  }
  std::sort(events.begin(), events.end());

  std::vector<double> sum_min(n_hours, 0.0), sum_max(n_hours, 0.0);
  std::multiset<double> active;
  long cursor = 0;
  auto accumulate = [&](long until) {
    if (active.empty()) {
      cursor = until;
      return;
    }
    const double lo = *active.begin();
    const double hi = *active.rbegin();
    while (cursor < until) {
      const long hour = cursor / 60;
      const long seg_end = std::min(until, (hour + 1) * 60);
      const double len = static_cast<double>(seg_end - cursor);
      sum_min[static_cast<std::size_t>(hour)] += len * lo;
      sum_max[static_cast<std::size_t>(hour)] += len * hi;
      cursor = seg_end;
    }
  };
  for (const auto& [at, delta, value] : events) {
    accumulate(at);
    if (delta > 0) active.insert(value);
    else active.erase(active.find(value));
  }
  accumulate(span);

  std::vector<HourlyOutageTriple> out(n_hours);
  for (std::size_t h = 0; h < n_hours; ++h) out[h] = HourlyOutageTriple::from_bounds(sum_min[h] / 60.0, sum_max[h] / 60.0);
  return out;
}

inline HourlyOutageTriple hourly_outage(const std::vector<OutageReport>& reports, HourTime hour) {
  std::vector<const OutageReport*> ptrs;
  for (const auto& r : reports) ptrs.push_back(&r);
  return reconcile_hourly(ptrs, hour, 1)[0];
}

struct UnitSeries {
  HourlyOutageSeries forced;
  HourlyOutageSeries planned;
  HourlyOutageSeries total;

  const HourlyOutageSeries& get(Channel c) const {
    return c == Channel::Forced ? forced : c == Channel::Planned ? planned : total;
  }
};

// Forced and Planned use only their own reports; Total reconciles all reports
// together regardless of kind.
inline UnitSeries unit_series(const std::string& subject, const std::vector<OutageReport>& reports, HourTime start,
                              std::size_t n_hours) {
  std::vector<const OutageReport*> forced, planned, all;
  for (const auto& r : reports) {
    all.push_back(&r);
    (r.kind == OutageKind::Forced ? forced : planned).push_back(&r);
  }
  UnitSeries u;
  u.forced = {subject, Channel::Forced, start, reconcile_hourly(forced, start, n_hours)};
  u.planned = {subject, Channel::Planned, start, reconcile_hourly(planned, start, n_hours)};
  u.total = {subject, Channel::Total, start, reconcile_hourly(all, start, n_hours)};
  return u;
}

// Hour-wise sums of the bounds over units, taken in a canonical order so that
// the result does not depend on how the units were listed.
inline UnitSeries zone_aggregate(const std::string& zone, const std::vector<UnitSeries>& units, HourTime start,
                                 std::size_t n_hours) {
  for (const auto& u : units)
    for (Channel c : {Channel::Forced, Channel::Planned, Channel::Total})
      if (u.get(c).start != start || u.get(c).size() != n_hours)
        throw InvalidInput("zone_aggregate: series for '" + u.get(c).subject + "' covers a different period");

  std::vector<const UnitSeries*> order;
  for (const auto& u : units) order.push_back(&u);
  auto key = [](const UnitSeries* u, Channel c) {
    std::vector<double> v;
    for (const auto& t : u->get(c).triples) {
      v.push_back(t.o_min_mw);
      v.push_back(t.o_max_mw);
    }
    return v;
  };
  std::sort(order.begin(), order.end(), [&](const UnitSeries* a, const UnitSeries* b) {
    if (a->total.subject != b->total.subject) return a->total.subject < b->total.subject;
    for (Channel c : {Channel::Forced, Channel::Planned, Channel::Total}) {
      const auto ka = key(a, c), kb = key(b, c);
      if (ka != kb) return ka < kb;
    }
    return false;
  });

  auto sum = [&](Channel c) {
    std::vector<double> lo(n_hours, 0.0), hi(n_hours, 0.0);
    for (const UnitSeries* u : order) {
      const auto& t = u->get(c).triples;
      for (std::size_t h = 0; h < n_hours; ++h) {
        lo[h] += t[h].o_min_mw;
        hi[h] += t[h].o_max_mw;
      }
    }
    HourlyOutageSeries s{zone, c, start, std::vector<HourlyOutageTriple>(n_hours)};
    for (std::size_t h = 0; h < n_hours; ++h) s.triples[h] = HourlyOutageTriple::from_bounds(lo[h], hi[h]);
    return s;
  };
  return {sum(Channel::Forced), sum(Channel::Planned), sum(Channel::Total)};
}

inline UnitSeries zone_aggregate(const std::string& zone, const std::vector<UnitSeries>& units) {
  if (units.empty()) throw InvalidInput("zone_aggregate: no unit series");
  return zone_aggregate(zone, units, units.front().total.start, units.front().total.size());
}

// Groups cleaned reports by unit and reconciles each unit over the period.
inline UnitSeries build_zone_series(const std::string& zone, const std::vector<OutageReport>& reports, HourTime start,
                                    std::size_t n_hours) {
  std::map<std::string, std::vector<OutageReport>> by_unit;
  for (const auto& r : reports) by_unit[r.unit_id].push_back(r);
  std::vector<UnitSeries> units;
  units.reserve(by_unit.size());
  for (const auto& [unit, rs] : by_unit) units.push_back(unit_series(unit, rs, start, n_hours));
  return zone_aggregate(zone, units, start, n_hours);
}

// ---------------------------------------------------------------------------
// Zone series CSV

inline std::string zone_series_to_csv(const UnitSeries& z) {
  std::ostringstream os;
  os << "timestamp_utc,forced_min,forced,forced_max,planned_min,planned,planned_max,total_min,total,total_max\n";
  const std::size_t n = z.total.size();
  for (std::size_t h = 0; h < n; ++h) {
    os << format_datetime(z.total.hour(h));
    for (const auto* s : {&z.forced, &z.planned, &z.total}) {
      const auto& t = s->triples[h];
      os << ',' << format_fixed(t.o_min_mw, 3) << ',' << format_fixed(t.o_mean_mw, 3) << ','
         << format_fixed(t.o_max_mw, 3);
    }
    os << '\n';
  }
  return os.str();
}

// The mean column is recomputed as the midpoint of the stored bounds.
inline UnitSeries zone_series_from_csv(const CsvTable& t, const std::string& zone, const std::string& source) {
  const auto tc = t.column("timestamp_utc");
  UnitSeries z;
  z.forced = {zone, Channel::Forced, {}, {}};
  z.planned = {zone, Channel::Planned, {}, {}};
  z.total = {zone, Channel::Total, {}, {}};
  HourTime prev{};
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string where = source + ":" + std::to_string(i + 2);
    const HourTime h = detail::located(where, [&] { return std::chrono::floor<Hours>(parse_datetime(r[tc])); });
    if (i == 0) {
      z.forced.start = z.planned.start = z.total.start = h;
    } else if (h != prev + Hours{1}) {
      throw ParseError(where, "hourly series is not contiguous");
    }
    prev = h;
    for (auto* s : {&z.forced, &z.planned, &z.total}) {
      const std::string base(channel_name(s->channel));
      const double lo = detail::located(where, [&] { return parse_double(r[t.column(base + "_min")], base + "_min"); });
      const double hi = detail::located(where, [&] { return parse_double(r[t.column(base + "_max")], base + "_max"); });
      s->triples.push_back(HourlyOutageTriple::from_bounds(lo, hi));
    }
  }
  return z;
}

inline UnitSeries read_zone_series_csv(const fs::path& p, const std::string& zone) {
  return zone_series_from_csv(read_csv(p), zone, p.string());
}

}  // namespace unavail

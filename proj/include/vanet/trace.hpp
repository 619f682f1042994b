#pragma once

// GPS trace ingestion: CSV parsing, bounding-box filtering, per-vehicle
// snapshot extraction and the local planar projection.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vanet/errors.hpp"

namespace vanet {

inline constexpr double kEarthRadiusM = 6371000.0;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct GpsRecord {
  std::string vehicle_id;
  double timestamp = 0.0;  // seconds since epoch
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GpsRecord&, const GpsRecord&) = default;
};

struct BoundingBox {
  double lon_min = 116.25;
  double lon_max = 116.55;
  double lat_min = 39.8;
  double lat_max = 40.05;

  void validate() const {
    if (!(lon_min < lon_max) || !(lat_min < lat_max)) {
      throw ConfigError("bounding box must satisfy lon_min < lon_max and lat_min < lat_max");
    }
  }

  bool contains(double lon, double lat) const {
    return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
  }

  GeoPoint south_west() const { return {lon_min, lat_min}; }
};

struct VehicleSnapshot {
  double instant = 0.0;
  std::map<std::string, Point> positions;  // sorted by vehicle id; this is the node order
  GeoPoint origin;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
};

struct ParseResult {
  std::vector<GpsRecord> records;
  std::size_t malformed = 0;
  std::size_t outside_bbox = 0;
};

// Equirectangular projection about `origin`.
inline Point project(double lon, double lat, GeoPoint origin) {
  constexpr double deg = std::numbers::pi / 180.0;
  return {kEarthRadiusM * (lon - origin.lon) * deg * std::cos(origin.lat * deg),
          kEarthRadiusM * (lat - origin.lat) * deg};
}

inline GeoPoint unproject(Point p, GeoPoint origin) {
  constexpr double deg = std::numbers::pi / 180.0;
  return {origin.lon + p.x / (kEarthRadiusM * deg * std::cos(origin.lat * deg)),
          origin.lat + p.y / (kEarthRadiusM * deg)};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<int> parse_fixed_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DDTHH:MM:SS[Z]", interpreted as UTC.
inline std::optional<double> parse_iso8601(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  auto y = parse_fixed_int(s.substr(0, 4));
  auto mo = parse_fixed_int(s.substr(5, 2));
  auto d = parse_fixed_int(s.substr(8, 2));
  auto h = parse_fixed_int(s.substr(11, 2));
  auto mi = parse_fixed_int(s.substr(14, 2));
  auto sec = parse_fixed_int(s.substr(17, 2));
  if (!y || !mo || !d || !h || !mi || !sec) return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok() || *h > 23 || *mi > 59 || *sec > 60) return std::nullopt;
  auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + *h * 3600.0 + *mi * 60.0 + *sec;
}

inline std::optional<double> parse_timestamp(std::string_view s) {
  if (auto v = parse_double(s)) return v;
  return parse_iso8601(s);
}

}  // namespace detail

// Parses one `vehicle_id,timestamp,lon,lat` line. Returns nullopt when malformed.
inline std::optional<GpsRecord> parse_record(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (fields.size() != 4) return std::nullopt;
  auto id = detail::trim(fields[0]);
  auto ts = detail::parse_timestamp(fields[1]);
  auto lon = detail::parse_double(fields[2]);
  auto lat = detail::parse_double(fields[3]);
  if (id.empty() || !ts || !lon || !lat) return std::nullopt;
  if (*lon < -180.0 || *lon > 180.0 || *lat < -90.0 || *lat > 90.0) return std::nullopt;
  return GpsRecord{std::string(id), *ts, *lon, *lat};
}

// Reads a trace CSV. Blank lines and a literal header line are skipped;
// malformed lines are counted, not fatal.
inline ParseResult parse_trace(const std::string& path, const BoundingBox& bbox) {
  bbox.validate();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file: " + path);
  ParseResult result;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    auto view = detail::trim(line);
    if (view.empty()) continue;
    if (first && view.rfind("vehicle_id", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    auto rec = parse_record(view);
    if (!rec) {
      ++result.malformed;
      continue;
    }
    if (!bbox.contains(rec->lon, rec->lat)) {
      ++result.outside_bbox;
      continue;
    }
    result.records.push_back(std::move(*rec));
  }
  if (in.bad()) throw IoError("read failure on trace file: " + path);
  if (result.records.empty()) throw EmptyDatasetError("no valid in-box records in " + path);
  return result;
}

// Picks, per vehicle, the record nearest to `t` within `window` seconds.
// Ties go to the earlier timestamp, then to the earlier record in input order.
inline VehicleSnapshot snapshot(const std::vector<GpsRecord>& records, double t, double window,
                                GeoPoint origin) {
  if (!(window > 0.0)) throw DomainError("snapshot window must be positive");
  std::map<std::string, const GpsRecord*> best;
  for (const auto& rec : records) {
    double gap = std::abs(rec.timestamp - t);
    if (!(gap <= window)) continue;
    auto [it, inserted] = best.try_emplace(rec.vehicle_id, &rec);
    if (inserted) continue;
    const GpsRecord* cur = it->second;
    double cur_gap = std::abs(cur->timestamp - t);
    if (gap < cur_gap || (gap == cur_gap && rec.timestamp < cur->timestamp)) it->second = &rec;
  }
  if (best.empty()) throw EmptySnapshotError("no vehicle has a record within the snapshot window");
  VehicleSnapshot snap;
  snap.instant = t;
  snap.origin = origin;
  for (const auto& [id, rec] : best) snap.positions.emplace(id, project(rec->lon, rec->lat, origin));
  return snap;
}

// Overload anchoring the projection at the south-west corner of the records.
inline VehicleSnapshot snapshot(const std::vector<GpsRecord>& records, double t, double window) {
  if (records.empty()) throw EmptySnapshotError("no records");
  GeoPoint origin{records.front().lon, records.front().lat};
  for (const auto& r : records) {
    origin.lon = std::min(origin.lon, r.lon);
    origin.lat = std::min(origin.lat, r.lat);
  }
  return snapshot(records, t, window, origin);
}

}  // namespace vanet

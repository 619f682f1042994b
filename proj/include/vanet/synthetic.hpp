#pragma once

// Synthetic taxi traces: Gaussian downtown hot spots over a uniform
// background, emitted in the trace CSV format.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/trace.hpp"

namespace vanet {

struct SyntheticConfig {
  std::size_t vehicles = 2000;
  std::size_t clusters = 5;
  std::uint64_t seed = 1;
  BoundingBox bbox;
  double cluster_sigma_m = 600.0;
  double background_fraction = 0.1;
  std::size_t records_per_vehicle = 3;
  double start_time = 1201996800.0;  // 2008-02-03T00:00:00Z
  double interval_s = 60.0;
  double drift_sigma_m = 25.0;

  // Instant at which every vehicle has a record within interval_s / 2.
  double reference_instant() const { return start_time + interval_s * static_cast<double>(records_per_vehicle / 2); }
};

// Records are grouped per vehicle (ids v00000, v00001, ...) in time order.
inline std::vector<GpsRecord> generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.vehicles < 1) throw ConfigError("synthetic generator needs n >= 1");
  if (cfg.records_per_vehicle < 1) throw ConfigError("records_per_vehicle must be >= 1");
  if (cfg.background_fraction < 0.0 || cfg.background_fraction > 1.0) {
    throw ConfigError("background_fraction must lie in [0, 1]");
  }
  cfg.bbox.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const GeoPoint origin = cfg.bbox.south_west();
  const Point extent = project(cfg.bbox.lon_max, cfg.bbox.lat_max, origin);
  auto inside = [&](Point p) { return p.x >= 0.0 && p.y >= 0.0 && p.x <= extent.x && p.y <= extent.y; };

  // Hot-spot centers keep two sigmas clear of the box edge when the box allows.
  std::vector<Point> centers;
  const double margin_x = std::min(2.0 * cfg.cluster_sigma_m, extent.x / 4.0);
  const double margin_y = std::min(2.0 * cfg.cluster_sigma_m, extent.y / 4.0);
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    centers.push_back({margin_x + unit(rng) * (extent.x - 2.0 * margin_x),
                       margin_y + unit(rng) * (extent.y - 2.0 * margin_y)});
  }

  std::vector<GpsRecord> records;
  records.reserve(cfg.vehicles * cfg.records_per_vehicle);
  const int width = cfg.vehicles > 99999 ? static_cast<int>(std::to_string(cfg.vehicles - 1).size()) : 5;
  for (std::size_t v = 0; v < cfg.vehicles; ++v) {
    std::string id = std::to_string(v);
    id = "v" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0') + id;
    Point p;
    bool background = centers.empty() || unit(rng) < cfg.background_fraction;
    if (background) {
      p = {unit(rng) * extent.x, unit(rng) * extent.y};
    } else {
      const Point& c = centers[static_cast<std::size_t>(unit(rng) * static_cast<double>(centers.size())) %
                               centers.size()];
      do {
        p = {c.x + cfg.cluster_sigma_m * gauss(rng), c.y + cfg.cluster_sigma_m * gauss(rng)};
      } while (!inside(p));
    }
    for (std::size_t k = 0; k < cfg.records_per_vehicle; ++k) {
      if (k > 0) {
        Point q{p.x + cfg.drift_sigma_m * gauss(rng), p.y + cfg.drift_sigma_m * gauss(rng)};
        if (inside(q)) p = q;
      }
      double jitter = std::floor(unit(rng) * 10.0);
      GeoPoint geo = unproject(p, origin);
      records.push_back({id, cfg.start_time + cfg.interval_s * static_cast<double>(k) + jitter, geo.lon, geo.lat});
    }
  }
  return records;
}

}  // namespace vanet

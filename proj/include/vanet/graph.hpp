#pragma once

// Geometric vehicular graph with per-link communication impedance, plus the
// per-vehicle (V2I) impedance built on the uplink throughput model.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/trace.hpp"

namespace vanet {

// Defaults are a non-normative working point, not calibrated values.
struct ImpedanceParams {
  double alpha = 1.0;
  double beta = 0.01;
  double mu = 0.1;
  double zeta = 0.5;
  double upsilon = 1.0;
  double psi = 1.0;
  double xi = 1.0;
  double theta = 100.0;  // energy-noise ratio scale, meters
  double r = 500.0;      // communication range, meters
  double r_c = 300.0;    // cell radius, meters
  double f_c = 2000.0;   // carrier frequency, MHz
  double floor_R = 1e-6;

  void validate() const {
    if (!(r > 0.0)) throw ConfigError("r must be positive");
    if (!(r_c > 0.0)) throw ConfigError("r_c must be positive");
    if (!(f_c > 0.0)) throw ConfigError("f_c must be positive");
    if (!(floor_R > 0.0)) throw ConfigError("floor_R must be positive");
    if (alpha < 0.0 || beta < 0.0 || mu < 0.0 || zeta < 0.0) {
      throw ConfigError("alpha, beta, mu, zeta must be nonnegative");
    }
  }
};

struct ThroughputParams {
  double tau = 0.1;       // channel-estimation time fraction
  double varsigma = 0.1;  // wireless-energy-transfer time fraction
  double p_tx_dbm = 23.0;
  double noise_dbm = -104.0;
  double shadowing_sigma_db = 0.0;  // 0 disables the log-normal shadowing draw

  void validate() const {
    if (tau < 0.0 || varsigma < 0.0 || !(tau + varsigma < 1.0)) {
      throw DomainError("throughput requires tau >= 0, varsigma >= 0, tau + varsigma < 1");
    }
  }
};

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  double distance = 0.0;  // meters
  int handovers = 0;
  double impedance = std::numeric_limits<double>::quiet_NaN();
};

struct VanetGraph {
  std::vector<std::string> ids;
  std::vector<Point> positions;
  std::vector<std::vector<int>> adjacency;   // sorted neighbor lists
  std::vector<std::vector<int>> edge_of;     // parallel to adjacency: index into edges
  std::vector<Edge> edges;                   // sorted by (u, v)
  std::vector<double> betweenness;           // empty until the metrics pass fills it
  double range = 0.0;

  std::size_t size() const { return ids.size(); }
  std::size_t edge_count() const { return edges.size(); }
  int degree(int i) const { return static_cast<int>(adjacency[i].size()); }
  std::span<const int> neighbors(int i) const { return adjacency[i]; }

  std::optional<std::size_t> find_edge(int i, int j) const {
    const auto& adj = adjacency[i];
    auto it = std::lower_bound(adj.begin(), adj.end(), j);
    if (it == adj.end() || *it != j) return std::nullopt;
    return static_cast<std::size_t>(edge_of[i][it - adj.begin()]);
  }

  bool has_edge(int i, int j) const { return find_edge(i, j).has_value(); }

  const Edge& edge(int i, int j) const {
    auto e = find_edge(i, j);
    if (!e) throw NotAnEdgeError("(" + std::to_string(i) + ", " + std::to_string(j) + ") is not an edge");
    return edges[*e];
  }

  double weight(int i, int j) const { return edge(i, j).impedance; }

  bool has_impedances() const {
    return std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return std::isfinite(e.impedance); });
  }

  // Builds adjacency from an explicit edge list; positions default to the origin.
  static VanetGraph from_edges(std::size_t n, const std::vector<std::pair<int, int>>& edge_list,
                               std::vector<Point> positions = {}) {
    VanetGraph g;
    g.ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) g.ids.push_back(std::to_string(i));
    g.positions = positions.empty() ? std::vector<Point>(n) : std::move(positions);
    if (g.positions.size() != n) throw DomainError("positions size does not match node count");
    std::vector<Edge> edges;
    for (auto [a, b] : edge_list) {
      if (a == b) throw DomainError("self-loops are not allowed");
      if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n) {
        throw DomainError("edge endpoint out of range");
      }
      Edge e;
      e.u = std::min(a, b);
      e.v = std::max(a, b);
      e.distance = vanet::distance(g.positions[e.u], g.positions[e.v]);
      edges.push_back(e);
    }
    g.set_edges(std::move(edges));
    return g;
  }

  // Installs an edge list (deduplicated, sorted) and rebuilds adjacency.
  void set_edges(std::vector<Edge> list) {
    std::sort(list.begin(), list.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
               list.end());
    edges = std::move(list);
    adjacency.assign(size(), {});
    edge_of.assign(size(), {});
    for (std::size_t k = 0; k < edges.size(); ++k) {
      adjacency[edges[k].u].push_back(edges[k].v);
      adjacency[edges[k].v].push_back(edges[k].u);
    }
    for (std::size_t i = 0; i < size(); ++i) {
      auto& adj = adjacency[i];
      std::sort(adj.begin(), adj.end());
      edge_of[i].resize(adj.size());
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
      int u = edges[k].u, v = edges[k].v;
      auto iu = std::lower_bound(adjacency[u].begin(), adjacency[u].end(), v) - adjacency[u].begin();
      auto iv = std::lower_bound(adjacency[v].begin(), adjacency[v].end(), u) - adjacency[v].begin();
      edge_of[u][iu] = static_cast<int>(k);
      edge_of[v][iv] = static_cast<int>(k);
    }
  }
};

// COST-231 urban path loss in dB; d in km, f_c in MHz.
inline double path_loss(double d_km, double f_c_mhz) {
  if (!(d_km > 0.0) || !(f_c_mhz > 0.0)) throw DomainError("path_loss requires d > 0 and f_c > 0");
  return 42.6 + 26.0 * std::log10(d_km) + 20.0 * std::log10(f_c_mhz);
}

// Side of the square cell that has the same area as a disk of radius r_c.
inline double cell_side(double r_c) { return std::sqrt(std::numbers::pi) * r_c; }

namespace detail {

// Grid lines m*side with lo < m*side < hi.
inline int lines_strictly_between(double a, double b, double side) {
  double lo = std::min(a, b), hi = std::max(a, b);
  if (!(hi > lo)) return 0;
  auto first = static_cast<std::int64_t>(std::floor(lo / side)) + 1;
  auto last = static_cast<std::int64_t>(std::ceil(hi / side)) - 1;
  // floor/ceil on the quotient can be off by one ulp; settle against the products.
  while (static_cast<double>(first - 1) * side > lo) --first;
  while (!(static_cast<double>(first) * side > lo)) ++first;
  while (static_cast<double>(last + 1) * side < hi) ++last;
  while (!(static_cast<double>(last) * side < hi)) --last;
  return last >= first ? static_cast<int>(last - first + 1) : 0;
}

// Power term of the impedance model; a negative base is clamped to zero so
// that fractional exponents stay real.
inline double power_term(double base, double exponent) {
  return std::pow(std::max(base, 0.0), exponent);
}

}  // namespace detail

// Number of cell-grid boundary lines crossed by the open segment a -> b.
inline int handover_count(Point a, Point b, double r_c) {
  if (!(r_c > 0.0)) throw DomainError("r_c must be positive");
  double side = cell_side(r_c);
  return detail::lines_strictly_between(a.x, b.x, side) + detail::lines_strictly_between(a.y, b.y, side);
}

// Geometric graph: (i, j) is an edge iff distance <= params.r. Neighbor search
// runs over a uniform grid with cell size r. Impedances stay unset.
inline VanetGraph build_graph(std::vector<std::string> ids, std::vector<Point> positions,
                              const ImpedanceParams& params) {
  params.validate();
  if (ids.size() != positions.size()) throw DomainError("ids and positions differ in length");
  VanetGraph g;
  g.ids = std::move(ids);
  g.positions = std::move(positions);
  g.range = params.r;
  const double r = params.r;
  auto cell_of = [r](Point p) {
    return std::pair<std::int64_t, std::int64_t>(static_cast<std::int64_t>(std::floor(p.x / r)),
                                                 static_cast<std::int64_t>(std::floor(p.y / r)));
  };
  auto key = [](std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
  };
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    auto [cx, cy] = cell_of(g.positions[i]);
    grid[key(cx, cy)].push_back(static_cast<int>(i));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.positions.size(); ++i) {
    auto [cx, cy] = cell_of(g.positions[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find(key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        for (int j : it->second) {
          if (j <= static_cast<int>(i)) continue;
          double d = distance(g.positions[i], g.positions[j]);
          if (d <= r) {
            Edge e;
            e.u = static_cast<int>(i);
            e.v = j;
            e.distance = d;
            e.handovers = handover_count(g.positions[i], g.positions[j], params.r_c);
            edges.push_back(e);
          }
        }
      }
    }
  }
  g.set_edges(std::move(edges));
  return g;
}

inline VanetGraph build_graph(const VehicleSnapshot& snap, const ImpedanceParams& params) {
  if (snap.empty()) throw EmptySnapshotError("cannot build a graph from an empty snapshot");
  std::vector<std::string> ids;
  std::vector<Point> pos;
  ids.reserve(snap.size());
  pos.reserve(snap.size());
  for (const auto& [id, p] : snap.positions) {
    ids.push_back(id);
    pos.push_back(p);
  }
  return build_graph(std::move(ids), std::move(pos), params);
}

// Link communication impedance of edge (i, j). Needs g.betweenness.
// Coincident vehicles (d = 0) sit at the floor: the SNR term diverges there.
inline double link_impedance(const VanetGraph& g, int i, int j, const ImpedanceParams& params) {
  const Edge& e = g.edge(i, j);
  if (g.betweenness.size() != g.size()) throw DomainError("link_impedance needs betweenness computed first");
  if (!(e.distance > 0.0)) return params.floor_R;
  double load = g.degree(i) * g.betweenness[i] + g.degree(j) * g.betweenness[j];
  int ns = handover_count(g.positions[i], g.positions[j], params.r_c);
  double value = params.alpha * detail::power_term(load, params.upsilon) +
                 params.beta * detail::power_term(path_loss(e.distance / 1000.0, params.f_c), params.psi) -
                 params.mu * std::pow(params.theta / e.distance, params.xi) + params.zeta * ns;
  return std::max(params.floor_R, value);
}

// Fills every edge's impedance (and refreshes its handover count for params.r_c).
inline void assign_impedances(VanetGraph& g, const ImpedanceParams& params) {
  params.validate();
  for (auto& e : g.edges) {
    e.handovers = handover_count(g.positions[e.u], g.positions[e.v], params.r_c);
    e.impedance = link_impedance(g, e.u, e.v, params);
  }
}

// Uplink rate with a deterministic SINR from path loss; `shadow_db` is an
// optional extra attenuation draw.
inline double throughput(const ThroughputParams& tp, double d_km, double f_c_mhz, double shadow_db = 0.0) {
  tp.validate();
  if (!(d_km > 0.0)) throw DomainError("throughput requires d > 0");
  double sinr_db = tp.p_tx_dbm - path_loss(d_km, f_c_mhz) - shadow_db - tp.noise_dbm;
  double gamma = std::pow(10.0, sinr_db / 10.0);
  return (1.0 - tp.tau - tp.varsigma) * std::log2(1.0 + gamma);
}

inline double rate_from_sinr(const ThroughputParams& tp, double gamma) {
  tp.validate();
  return (1.0 - tp.tau - tp.varsigma) * std::log2(1.0 + gamma);
}

inline double vehicle_impedance(const VanetGraph& g, int i, double rate, const ImpedanceParams& params) {
  if (g.betweenness.size() != g.size() && params.alpha != 0.0) {
    throw DomainError("vehicle_impedance needs betweenness computed first");
  }
  double kb = g.betweenness.empty() ? 0.0 : g.degree(i) * g.betweenness[i];
  return params.alpha * detail::power_term(kb, params.upsilon) + params.beta * detail::power_term(rate, params.psi);
}

// Distance from a vehicle to the center of its square cell, floored at 1 m.
inline double distance_to_cell_center(Point p, double r_c) {
  double side = cell_side(r_c);
  Point center{(std::floor(p.x / side) + 0.5) * side, (std::floor(p.y / side) + 0.5) * side};
  return std::max(1.0, distance(p, center));
}

// Per-vehicle impedances, each vehicle served by the station at its cell center.
// Shadowing draws come from `seed` in node order when enabled.
inline std::vector<double> vehicle_impedances(const VanetGraph& g, const ThroughputParams& tp,
                                              const ImpedanceParams& params, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadow(0.0, tp.shadowing_sigma_db > 0.0 ? tp.shadowing_sigma_db : 1.0);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double d_km = distance_to_cell_center(g.positions[i], params.r_c) / 1000.0;
    double s = tp.shadowing_sigma_db > 0.0 ? shadow(rng) : 0.0;
    out[i] = vehicle_impedance(g, static_cast<int>(i), throughput(tp, d_km, params.f_c, s), params);
  }
  return out;
}

}  // namespace vanet

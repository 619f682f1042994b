#pragma once

// Base-station placement by farthest-first selection over the generalized
// distance, followed by nearest-center assignment.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/trace.hpp"

namespace vanet {

struct ClusterConfig {
  std::size_t k = 1;
  double epsilon = 0.5;
  std::optional<int> seed_index;  // defaults to the minimum-impedance vehicle

  void validate(std::size_t n) const {
    if (k < 1 || k > n) throw ConfigError("cluster count k must satisfy 1 <= k <= N");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
    if (seed_index && (*seed_index < 0 || static_cast<std::size_t>(*seed_index) >= n)) {
      throw ConfigError("seed_index out of range");
    }
  }
};

struct ClusterResult {
  std::vector<int> centers;  // selection order
  std::vector<int> labels;   // index into centers, per node
  double radius = 0.0;       // max generalized distance of a non-center node to its center
};

// D_ij = eps (R_i + R_j) + (1 - eps) d_ij. Not a metric: D_ii = 2 eps R_i.
inline double generalized_distance(int i, int j, std::span<const double> impedance,
                                   std::span<const Point> positions, double epsilon) {
  return epsilon * (impedance[i] + impedance[j]) + (1.0 - epsilon) * distance(positions[i], positions[j]);
}

inline int default_seed(std::span<const double> impedance) {
  if (impedance.empty()) throw ConfigError("no vehicles to cluster");
  return static_cast<int>(std::min_element(impedance.begin(), impedance.end()) - impedance.begin());
}

// Farthest-first traversal. Candidates exclude existing centers; argmax ties
// go to the smallest node id.
inline std::vector<int> select_centers(std::span<const Point> positions, std::span<const double> impedance,
                                       const ClusterConfig& config) {
  const std::size_t n = positions.size();
  if (impedance.size() != n) throw DomainError("impedance and positions differ in length");
  config.validate(n);
  std::vector<int> centers{config.seed_index ? *config.seed_index : default_seed(impedance)};
  std::vector<char> is_center(n, 0);
  is_center[centers.front()] = 1;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centers.size() < config.k) {
    int last = centers.back();
    int best = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (is_center[j]) continue;
      nearest[j] = std::min(nearest[j], generalized_distance(static_cast<int>(j), last, impedance, positions,
                                                             config.epsilon));
      if (nearest[j] > best_value) {
        best_value = nearest[j];
        best = static_cast<int>(j);
      }
    }
    centers.push_back(best);
    is_center[best] = 1;
  }
  return centers;
}

// Nearest-center labels; ties go to the earlier-selected center. Centers
// label themselves.
inline ClusterResult assign(std::span<const Point> positions, std::vector<int> centers,
                            std::span<const double> impedance, double epsilon) {
  if (centers.empty()) throw ConfigError("assign needs at least one center");
  const std::size_t n = positions.size();
  ClusterResult result;
  result.labels.assign(n, -1);
  for (std::size_t c = 0; c < centers.size(); ++c) result.labels[centers[c]] = static_cast<int>(c);
  for (std::size_t i = 0; i < n; ++i) {
    if (result.labels[i] >= 0) continue;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d = generalized_distance(static_cast<int>(i), centers[c], impedance, positions, epsilon);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    result.labels[i] = best;
    result.radius = std::max(result.radius, best_d);
  }
  result.centers = std::move(centers);
  return result;
}

inline ClusterResult cluster(std::span<const Point> positions, std::span<const double> impedance,
                             const ClusterConfig& config) {
  return assign(positions, select_centers(positions, impedance, config), impedance, config.epsilon);
}

// Radius for k = 1..k_max with the same seed; farthest-first prefixes nest,
// so each entry reuses the longer selection.
inline std::vector<double> elbow_sweep(std::span<const Point> positions, std::span<const double> impedance,
                                       ClusterConfig config, std::size_t k_max) {
  config.k = k_max;
  auto all = select_centers(positions, impedance, config);
  std::vector<double> radii;
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<int> prefix(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    radii.push_back(assign(positions, std::move(prefix), impedance, config.epsilon).radius);
  }
  return radii;
}

}  // namespace vanet

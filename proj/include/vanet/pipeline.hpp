#pragma once

// Two-pass construction: geometry first, then betweenness, then impedances
// (link impedance consumes k_i B_i).

#include <cstdint>
#include <vector>

#include "vanet/graph.hpp"
#include "vanet/metrics.hpp"
#include "vanet/trace.hpp"

namespace vanet {

inline void weigh_graph(VanetGraph& g, const ImpedanceParams& params, unsigned threads = 1) {
  fill_betweenness(g, threads);
  assign_impedances(g, params);
}

inline VanetGraph build_weighted_graph(const VehicleSnapshot& snap, const ImpedanceParams& params,
                                       unsigned threads = 1) {
  auto g = build_graph(snap, params);
  weigh_graph(g, params, threads);
  return g;
}

}  // namespace vanet

#pragma once

// Parameter sweeps behind the impedance-vs-frequency and
// handover-vs-cell-radius tables.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/graph.hpp"
#include "vanet/trace.hpp"

namespace vanet {

struct ImpedanceSweepRow {
  double f_c = 0.0;
  double r = 0.0;
  double mean_impedance = std::numeric_limits<double>::quiet_NaN();
  std::size_t edges = 0;
  bool flagged = false;  // empty graph at this range
};

struct HandoverSweepRow {
  double r_c = 0.0;
  double r = 0.0;
  double mean_handovers = std::numeric_limits<double>::quiet_NaN();
  std::size_t edges = 0;
  bool flagged = false;
};

namespace detail {

// Runs task(i) for i in [0, count) on a small pool; results are written by
// index so output order never depends on scheduling.
template <typename Task>
void run_pool(std::size_t count, unsigned threads, Task&& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

}  // namespace detail

// Mean link impedance per (r, f_c) with the topology term switched off
// (alpha = 0), so betweenness is not needed. Rows come out r-major.
inline std::vector<ImpedanceSweepRow> sweep_impedance(const VehicleSnapshot& snap, ImpedanceParams params,
                                                      const std::vector<double>& f_c_list,
                                                      const std::vector<double>& r_list, unsigned threads = 1) {
  if (f_c_list.empty() || r_list.empty()) throw ConfigError("sweep lists must be non-empty");
  params.alpha = 0.0;
  std::vector<ImpedanceSweepRow> rows(f_c_list.size() * r_list.size());
  detail::run_pool(r_list.size(), threads, [&](std::size_t ri) {
    ImpedanceParams p = params;
    p.r = r_list[ri];
    auto g = build_graph(snap, p);
    g.betweenness.assign(g.size(), 0.0);
    for (std::size_t fi = 0; fi < f_c_list.size(); ++fi) {
      p.f_c = f_c_list[fi];
      auto& row = rows[ri * f_c_list.size() + fi];
      row.f_c = p.f_c;
      row.r = p.r;
      row.edges = g.edge_count();
      if (g.edge_count() == 0) {
        row.flagged = true;
        continue;
      }
      double sum = 0.0;
      for (const auto& e : g.edges) sum += link_impedance(g, e.u, e.v, p);
      row.mean_impedance = sum / static_cast<double>(g.edge_count());
    }
  });
  return rows;
}

// Mean handover count per edge for each (r, r_c). Rows come out r-major.
inline std::vector<HandoverSweepRow> sweep_handover(const VehicleSnapshot& snap, ImpedanceParams params,
                                                    const std::vector<double>& r_c_list,
                                                    const std::vector<double>& r_list, unsigned threads = 1) {
  if (r_c_list.empty() || r_list.empty()) throw ConfigError("sweep lists must be non-empty");
  std::vector<HandoverSweepRow> rows(r_c_list.size() * r_list.size());
  detail::run_pool(r_list.size(), threads, [&](std::size_t ri) {
    ImpedanceParams p = params;
    p.r = r_list[ri];
    auto g = build_graph(snap, p);
    for (std::size_t ci = 0; ci < r_c_list.size(); ++ci) {
      auto& row = rows[ri * r_c_list.size() + ci];
      row.r_c = r_c_list[ci];
      row.r = p.r;
      row.edges = g.edge_count();
      if (g.edge_count() == 0) {
        row.flagged = true;
        continue;
      }
      double sum = 0.0;
      for (const auto& e : g.edges) sum += handover_count(g.positions[e.u], g.positions[e.v], row.r_c);
      row.mean_handovers = sum / static_cast<double>(g.edge_count());
    }
  });
  return rows;
}

}  // namespace vanet

#pragma once

// V2V traffic allocation: commodities routed on fixed impedance-shortest
// paths, then split to meet demand Q under per-link capacity.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/graph.hpp"
#include "vanet/optim.hpp"

namespace vanet {

struct ShortestPath {
  std::vector<int> nodes;
  double impedance = 0.0;
};

// Minimum-impedance s-t path. Ties: fewer hops, then the lexicographically
// smallest node sequence.
inline ShortestPath dijkstra(const VanetGraph& g, int s, int t) {
  const auto n = static_cast<int>(g.size());
  if (s < 0 || s >= n || t < 0 || t >= n) throw DomainError("dijkstra endpoint out of range");
  if (!g.has_impedances()) throw DomainError("dijkstra needs edge impedances");
  if (s == t) return {{s}, 0.0};

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> hops(n, std::numeric_limits<int>::max());
  std::vector<char> done(n, 0);
  using Label = std::tuple<double, int, int>;
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  dist[s] = 0.0;
  hops[s] = 0;
  heap.emplace(0.0, 0, s);
  while (!heap.empty()) {
    auto [d, h, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    const auto& adj = g.adjacency[v];
    for (std::size_t k = 0; k < adj.size(); ++k) {
      int w = adj[k];
      double w_imp = g.edges[g.edge_of[v][k]].impedance;
      if (!(w_imp > 0.0)) throw DomainError("dijkstra needs positive impedances");
      double nd = d + w_imp;
      if (nd < dist[w] || (nd == dist[w] && h + 1 < hops[w])) {
        dist[w] = nd;
        hops[w] = h + 1;
        heap.emplace(nd, h + 1, w);
      }
    }
  }
  if (!done[t]) throw NoPathError("no path from " + g.ids[s] + " to " + g.ids[t]);

  // Tight predecessor DAG, nodes that reach t through it, then a greedy walk
  // from s picking the smallest admissible successor.
  auto tight = [&](int u, int v, double w_imp) {
    return done[u] && dist[u] + w_imp == dist[v] && hops[u] + 1 == hops[v];
  };
  std::vector<char> on_path(n, 0);
  std::vector<int> stack{t};
  on_path[t] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    const auto& adj = g.adjacency[v];
    for (std::size_t k = 0; k < adj.size(); ++k) {
      int u = adj[k];
      if (!on_path[u] && tight(u, v, g.edges[g.edge_of[v][k]].impedance)) {
        on_path[u] = 1;
        stack.push_back(u);
      }
    }
  }
  ShortestPath path;
  path.nodes.push_back(s);
  int cur = s;
  while (cur != t) {
    const auto& adj = g.adjacency[cur];
    int next = -1;
    for (std::size_t k = 0; k < adj.size(); ++k) {
      int w = adj[k];
      if (on_path[w] && tight(cur, w, g.edges[g.edge_of[cur][k]].impedance)) {
        next = w;
        break;  // adjacency is sorted
      }
    }
    path.nodes.push_back(next);
    cur = next;
  }
  path.impedance = dist[t];
  return path;
}

struct TrafficProblem {
  std::vector<int> sources;
  int destination = -1;
  double demand = 0.0;  // Q
  std::vector<ShortestPath> paths;             // one per source
  std::vector<std::pair<int, int>> edge_keys;  // rows of the incidence, (u < v)
  MatrixXd incidence;                          // E x n
  VectorXd cost;                               // R_w
  VectorXd capacity;                           // length E

  Eigen::Index commodities() const { return cost.size(); }
  Eigen::Index edges() const { return incidence.rows(); }

  BarrierProblem barrier_problem() const { return {cost, incidence, demand, capacity, std::nullopt}; }
};

// Routes every source to `destination`; keeps only edges used by some path.
// A per-edge capacity map (keyed by (u < v)) overrides the uniform capacity.
inline TrafficProblem build_problem(const VanetGraph& g, const std::vector<int>& sources, int destination,
                                    double demand, double capacity,
                                    const std::map<std::pair<int, int>, double>& edge_capacity = {}) {
  if (sources.empty()) throw DomainError("traffic problem needs at least one source");
  if (!(demand > 0.0)) throw DomainError("demand Q must be positive");
  if (!(capacity > 0.0)) throw DomainError("link capacity c must be positive");
  TrafficProblem p;
  p.sources = sources;
  p.destination = destination;
  p.demand = demand;
  std::map<std::pair<int, int>, std::vector<int>> users;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] == destination) throw DomainError("source " + g.ids.at(sources[i]) + " is the destination");
    ShortestPath path;
    try {
      path = dijkstra(g, sources[i], destination);
    } catch (const NoPathError&) {
      throw NoPathError("source " + g.ids[sources[i]] + " cannot reach destination " + g.ids[destination]);
    }
    for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
      int a = path.nodes[k], b = path.nodes[k + 1];
      users[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(i));
    }
    p.paths.push_back(std::move(path));
  }
  const auto n = static_cast<Eigen::Index>(sources.size());
  const auto e = static_cast<Eigen::Index>(users.size());
  p.incidence = MatrixXd::Zero(e, n);
  p.capacity = VectorXd::Constant(e, capacity);
  Eigen::Index row = 0;
  for (const auto& [key, list] : users) {
    p.edge_keys.push_back(key);
    for (int j : list) p.incidence(row, j) = 1.0;
    if (auto it = edge_capacity.find(key); it != edge_capacity.end()) p.capacity[row] = it->second;
    ++row;
  }
  p.cost.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) p.cost[j] = p.paths[j].impedance;
  return p;
}

enum class AllocationMethod { simplex, barrier };

struct Allocation {
  VectorXd x;
  double cost = 0.0;
  VectorXd edge_load;  // m_uv per incidence row
  SolveReport report;

  bool ok() const { return report.optimal(); }
};

inline Allocation allocate(const TrafficProblem& p, AllocationMethod method, double gap_tol = 1e-6,
                           BarrierOptions options = {}) {
  Allocation a;
  auto bp = p.barrier_problem();
  if (method == AllocationMethod::simplex) {
    a.report = solve_lp(bp.as_lp());
  } else {
    options.gap_tol = gap_tol;
    a.report = barrier_solve(bp, options);
  }
  if (!a.report.optimal()) return a;
  a.x = a.report.x;
  a.cost = p.cost.dot(a.x);
  a.edge_load = p.incidence * a.x;
  return a;
}

}  // namespace vanet

#pragma once

// Complex-network statistics over hop-count shortest paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "vanet/errors.hpp"
#include "vanet/graph.hpp"

namespace vanet {

struct DegreeDistribution {
  std::vector<std::size_t> counts;  // counts[k] = number of nodes with degree k
  std::size_t nodes = 0;

  double p(std::size_t k) const {
    return k < counts.size() && nodes > 0 ? static_cast<double>(counts[k]) / static_cast<double>(nodes) : 0.0;
  }
};

struct CentralityVector {
  std::vector<double> values;
  std::string warning;  // non-empty when the result is degenerate
};

struct Components {
  std::vector<int> label;              // component index per node
  std::vector<std::vector<int>> members;  // sorted node lists, in order of smallest member
  int largest = -1;                    // ties go to the component with the smallest node id
};

struct PathLengthSummary {
  double mean = 0.0;
  std::size_t component_size = 0;
  std::size_t component_count = 0;
  std::size_t pairs = 0;
};

struct PowerLawFit {
  double exponent = 0.0;  // least-squares slope of log p(k) on log k
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

inline DegreeDistribution degree_distribution(const VanetGraph& g) {
  DegreeDistribution dist;
  dist.nodes = g.size();
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto k = static_cast<std::size_t>(g.degree(static_cast<int>(i)));
    if (k >= dist.counts.size()) dist.counts.resize(k + 1, 0);
    ++dist.counts[k];
  }
  return dist;
}

namespace detail {

// Edges among a sorted node set, by sorted-list intersection.
inline std::size_t edges_within(const VanetGraph& g, const std::vector<int>& sorted_nodes) {
  std::size_t twice = 0;
  for (int u : sorted_nodes) {
    auto adj = g.neighbors(u);
    auto a = adj.begin();
    auto b = sorted_nodes.begin();
    while (a != adj.end() && b != sorted_nodes.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++twice;
        ++a;
        ++b;
      }
    }
  }
  return twice / 2;
}

inline double pair_density(std::size_t edges, std::size_t m) {
  if (m <= 1) return 0.0;
  return static_cast<double>(edges) / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
}

}  // namespace detail

inline double clustering_coefficient(const VanetGraph& g, int i) {
  const auto& adj = g.adjacency[i];
  return detail::pair_density(detail::edges_within(g, adj), adj.size());
}

inline std::vector<double> clustering_coefficients(const VanetGraph& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = clustering_coefficient(g, static_cast<int>(i));
  return out;
}

inline double average_clustering(const VanetGraph& g) {
  if (g.size() == 0) return 0.0;
  auto c = clustering_coefficients(g);
  return std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(g.size());
}

// Density of the subgraph induced by nodes one or two hops from i (i excluded).
inline double two_neighbor_clustering(const VanetGraph& g, int i) {
  std::vector<int> ball(g.adjacency[i].begin(), g.adjacency[i].end());
  for (int u : g.adjacency[i]) {
    for (int w : g.adjacency[u]) {
      if (w != i) ball.push_back(w);
    }
  }
  std::sort(ball.begin(), ball.end());
  ball.erase(std::unique(ball.begin(), ball.end()), ball.end());
  return detail::pair_density(detail::edges_within(g, ball), ball.size());
}

inline std::vector<double> two_neighbor_clusterings(const VanetGraph& g) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = two_neighbor_clustering(g, static_cast<int>(i));
  return out;
}

namespace detail {

// One Brandes pass from `s`: hop-count BFS, path counts, then dependency
// accumulation. delta[v] receives sum over t of sigma_sv * sigma_vt / sigma_st.
struct BrandesWorkspace {
  std::vector<int> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<int> order;

  explicit BrandesWorkspace(std::size_t n) : dist(n), sigma(n), delta(n) { order.reserve(n); }

  void run(const VanetGraph& g, int s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      int v = order[head];
      for (int w : g.adjacency[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int w = *it;
      for (int v : g.adjacency[w]) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
    }
    delta[s] = 0.0;
  }
};

// Sources are processed in fixed blocks; each block sums its sources in order
// and blocks are reduced in block order, so the result does not depend on the
// thread count.
template <typename PerSource>
std::vector<double> blocked_source_sum(const VanetGraph& g, unsigned threads, PerSource&& per_source) {
  constexpr std::size_t kBlock = 32;
  const std::size_t n = g.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
  auto work = [&](std::size_t first_block, std::size_t stride) {
    BrandesWorkspace ws(n);
    for (std::size_t b = first_block; b < blocks; b += stride) {
      auto& acc = partial[b];
      for (std::size_t s = b * kBlock; s < std::min(n, (b + 1) * kBlock); ++s) {
        ws.run(g, static_cast<int>(s));
        per_source(static_cast<int>(s), ws, acc);
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(blocks, 1)));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  std::vector<double> total(n, 0.0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < n; ++i) total[i] += p[i];
  }
  return total;
}

}  // namespace detail

// Normalized betweenness, 2/((N-1)(N-2)) times the unordered-pair sum.
// threads = 0 uses the hardware concurrency; output is identical for any value.
inline CentralityVector betweenness(const VanetGraph& g, unsigned threads = 1) {
  const std::size_t n = g.size();
  CentralityVector out;
  if (n < 3) {
    out.values.assign(n, 0.0);
    out.warning = "betweenness needs N >= 3; returning zeros";
    return out;
  }
  auto sums = detail::blocked_source_sum(g, threads, [](int, const detail::BrandesWorkspace& ws,
                                                        std::vector<double>& acc) {
    for (std::size_t v = 0; v < acc.size(); ++v) acc[v] += ws.delta[v];
  });
  // Each unordered pair is seen from both endpoints.
  double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = sums[i] * scale;
  return out;
}

inline void fill_betweenness(VanetGraph& g, unsigned threads = 1) { g.betweenness = betweenness(g, threads).values; }

inline Components connected_components(const VanetGraph& g) {
  Components c;
  c.label.assign(g.size(), -1);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (c.label[s] >= 0) continue;
    int id = static_cast<int>(c.members.size());
    std::vector<int> members{static_cast<int>(s)};
    c.label[s] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (int w : g.adjacency[members[head]]) {
        if (c.label[w] < 0) {
          c.label[w] = id;
          members.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    c.members.push_back(std::move(members));
  }
  for (std::size_t k = 0; k < c.members.size(); ++k) {
    if (c.largest < 0 || c.members[k].size() > c.members[c.largest].size()) c.largest = static_cast<int>(k);
  }
  return c;
}

// Mean hop distance over unordered pairs of the largest component.
inline PathLengthSummary average_path_length(const VanetGraph& g) {
  auto comps = connected_components(g);
  PathLengthSummary out;
  out.component_count = comps.members.size();
  if (comps.largest < 0 || comps.members[comps.largest].size() < 2) {
    throw UndefinedMetricError("average path length needs a component with at least 2 nodes");
  }
  const auto& members = comps.members[comps.largest];
  out.component_size = members.size();
  std::vector<int> dist(g.size(), -1);
  std::vector<int> queue;
  queue.reserve(members.size());
  std::uint64_t total = 0;
  for (int s : members) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int w : g.adjacency[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (int t : members) {
      if (t > s) total += static_cast<std::uint64_t>(dist[t]);
    }
  }
  const auto m = static_cast<std::uint64_t>(members.size());
  out.pairs = static_cast<std::size_t>(m * (m - 1) / 2);
  out.mean = static_cast<double>(total) / static_cast<double>(out.pairs);
  return out;
}

// Log-log least squares over k >= max(k_min, 1) with p(k) > 0. Degrees seen
// fewer than `min_count` times are left out; in a sampled heavy tail those
// singleton bins sit on a floor of 1/N and flatten the slope.
inline PowerLawFit powerlaw_fit(const DegreeDistribution& dist, std::size_t k_min, std::size_t min_count = 1) {
  std::vector<double> xs, ys;
  for (std::size_t k = std::max<std::size_t>(k_min, 1); k < dist.counts.size(); ++k) {
    if (dist.counts[k] == 0 || dist.counts[k] < min_count) continue;
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(dist.p(k)));
  }
  if (xs.size() < 3) throw FitError("power-law fit needs at least 3 distinct degrees with nonzero mass");
  const double n = static_cast<double>(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  PowerLawFit fit;
  fit.points = xs.size();
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

}  // namespace vanet

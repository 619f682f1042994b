#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vanet/metrics.hpp"

namespace {

vanet::VanetGraph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return vanet::VanetGraph::from_edges(n, e);
}

vanet::VanetGraph star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return vanet::VanetGraph::from_edges(leaves + 1, e);
}

vanet::VanetGraph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return vanet::VanetGraph::from_edges(n, e);
}

vanet::VanetGraph small_random(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(3, 12);
  std::uniform_real_distribution<double> radius(200.0, 700.0);
  return oracle::random_geometric(rng, size(rng), 1000.0, radius(rng));
}

}  // namespace

TEST(DegreeDistribution, RegularAndStar) {
  auto k4 = vanet::degree_distribution(complete(4));
  EXPECT_EQ(k4.p(3), 1.0);
  auto s4 = vanet::degree_distribution(star(4));
  EXPECT_DOUBLE_EQ(s4.p(1), 0.8);
  EXPECT_DOUBLE_EQ(s4.p(4), 0.2);
}

TEST(DegreeDistribution, MatchesAdjacencyScan) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_geometric(rng, 30, 1000.0, 250.0);
    auto dist = vanet::degree_distribution(g);
    auto deg = oracle::degrees(oracle::adjacency_matrix(g));
    std::vector<std::size_t> counts(30, 0);
    for (int d : deg) ++counts[d];
    double total = 0.0;
    for (std::size_t k = 0; k < 30; ++k) {
      EXPECT_EQ(dist.p(k), static_cast<double>(counts[k]) / 30.0);
      total += dist.p(k);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_LE(dist.counts.size(), 30u);
  }
}

TEST(Clustering, HandCases) {
  auto k3 = complete(3);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(vanet::clustering_coefficient(k3, i), 1.0);
    EXPECT_EQ(vanet::two_neighbor_clustering(k3, i), 1.0);
  }
  EXPECT_EQ(vanet::clustering_coefficient(star(4), 0), 0.0);
  EXPECT_EQ(vanet::clustering_coefficient(star(4), 1), 0.0);
  auto p3 = path(3);
  EXPECT_EQ(vanet::two_neighbor_clustering(p3, 0), 1.0);
  EXPECT_EQ(vanet::two_neighbor_clustering(vanet::VanetGraph::from_edges(2, {{0, 1}}), 0), 0.0);
}

TEST(Clustering, MatchesTripleLoopAndBallOracles) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = oracle::random_geometric(rng, 20, 1000.0, 300.0);
    auto a = oracle::adjacency_matrix(g);
    auto c = vanet::clustering_coefficients(g);
    auto c2 = vanet::two_neighbor_clusterings(g);
    double mean = 0.0;
    for (int i = 0; i < 20; ++i) {
      EXPECT_NEAR(c[i], oracle::clustering(a, i), 1e-12);
      EXPECT_NEAR(c2[i], oracle::two_neighbor(a, i), 1e-12);
      EXPECT_GE(c[i], 0.0);
      EXPECT_LE(c[i], 1.0);
      EXPECT_GE(c2[i], 0.0);
      EXPECT_LE(c2[i], 1.0);
      mean += c[i];
    }
    EXPECT_NEAR(vanet::average_clustering(g), mean / 20.0, 1e-12);
  }
}

TEST(Betweenness, AnalyticCases) {
  auto p3 = vanet::betweenness(path(3)).values;
  EXPECT_EQ(p3[1], 1.0);
  EXPECT_EQ(p3[0], 0.0);
  auto s4 = vanet::betweenness(star(4)).values;
  EXPECT_EQ(s4[0], 1.0);
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(s4[i], 0.0);
  for (double b : vanet::betweenness(complete(6)).values) EXPECT_EQ(b, 0.0);
}

TEST(Betweenness, TinyGraphsWarn) {
  auto r = vanet::betweenness(vanet::VanetGraph::from_edges(2, {{0, 1}}));
  EXPECT_EQ(r.values, std::vector<double>(2, 0.0));
  EXPECT_FALSE(r.warning.empty());
}

TEST(Betweenness, MatchesPathEnumerationOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = small_random(rng);
    auto a = oracle::adjacency_matrix(g);
    auto got = vanet::betweenness(g).values;
    auto want = oracle::betweenness(a);
    const double n = static_cast<double>(g.size());
    double mass = 0.0, oracle_mass = 0.0;
    auto pc = oracle::enumerate_shortest_paths(a);
    for (std::size_t s = 0; s < g.size(); ++s)
      for (std::size_t t = s + 1; t < g.size(); ++t)
        for (std::size_t i = 0; i < g.size(); ++i)
          if (i != s && i != t) oracle_mass += pc.ratio[s][t][i];
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-10);
      EXPECT_GE(got[i], 0.0);
      EXPECT_LE(got[i], 1.0);
      if (g.degree(static_cast<int>(i)) <= 1) {
        EXPECT_EQ(got[i], 0.0);
      }
      mass += got[i] * (n - 1.0) * (n - 2.0) / 2.0;
    }
    EXPECT_NEAR(mass, oracle_mass, 1e-9);
  }
}

TEST(Betweenness, BitIdenticalAcrossThreadCounts) {
  std::mt19937_64 rng(4);
  auto g = oracle::random_geometric(rng, 400, 3000.0, 300.0);
  auto one = vanet::betweenness(g, 1).values;
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(vanet::betweenness(g, t).values, one);
}

TEST(Betweenness, RelabelingEquivariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = oracle::random_geometric(rng, 40, 1500.0, 350.0);
    std::vector<int> perm(g.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<int, int>> e;
    for (const auto& edge : g.edges) e.emplace_back(perm[edge.u], perm[edge.v]);
    auto h = vanet::VanetGraph::from_edges(g.size(), e);
    auto bg = vanet::betweenness(g).values, bh = vanet::betweenness(h).values;
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(bg[i], bh[perm[i]], 1e-12);
  }
}

TEST(PathLength, HandCases) {
  for (int n = 2; n <= 9; ++n) EXPECT_EQ(vanet::average_path_length(complete(n)).mean, 1.0);
  EXPECT_DOUBLE_EQ(vanet::average_path_length(path(4)).mean, 5.0 / 3.0);
  EXPECT_THROW(vanet::average_path_length(vanet::VanetGraph::from_edges(3, {})), vanet::UndefinedMetricError);
}

TEST(PathLength, LargestComponentTieGoesToSmallestId) {
  // Components {0,1,2} as a path and {3,4,5} as a triangle: equal size.
  auto g = vanet::VanetGraph::from_edges(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto r = vanet::average_path_length(g);
  EXPECT_DOUBLE_EQ(r.mean, 4.0 / 3.0);
  EXPECT_EQ(r.component_size, 3u);
  EXPECT_EQ(r.component_count, 2u);
}

TEST(PathLength, MatchesFloydWarshall) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = small_random(rng);
    auto a = oracle::adjacency_matrix(g);
    if (g.edge_count() == 0) {
      EXPECT_THROW(vanet::average_path_length(g), vanet::UndefinedMetricError);
      continue;
    }
    EXPECT_NEAR(vanet::average_path_length(g).mean, oracle::average_path_length(a), 1e-10);
  }
}

TEST(PowerLaw, ExactHistogram) {
  vanet::DegreeDistribution d;
  d.counts.assign(51, 0);
  for (std::size_t k = 1; k <= 50; ++k) d.counts[k] = static_cast<std::size_t>(std::llround(1e8 / (k * k)));
  d.nodes = std::accumulate(d.counts.begin(), d.counts.end(), std::size_t{0});
  auto fit = vanet::powerlaw_fit(d, 1);
  EXPECT_NEAR(fit.exponent, -2.0, 1e-6);
  EXPECT_NEAR(fit.r2, 1.0, 1e-9);
}

TEST(PowerLaw, DegenerateSupport) {
  auto d = vanet::degree_distribution(complete(5));
  EXPECT_THROW(vanet::powerlaw_fit(d, 1), vanet::FitError);
}

TEST(PowerLaw, SampledZipfMatchesRegressionOracle) {
  // Inverse-CDF sampling of p(k) proportional to k^-2.5, truncated at 1e6.
  const std::size_t kmax = 1000000;
  std::vector<double> cdf(kmax);
  double acc = 0.0;
  for (std::size_t k = 1; k <= kmax; ++k) cdf[k - 1] = acc += std::pow(static_cast<double>(k), -2.5);
  for (auto& c : cdf) c /= acc;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    vanet::DegreeDistribution d;
    d.nodes = 10000;
    for (std::size_t i = 0; i < d.nodes; ++i) {
      auto k = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u(rng)) - cdf.begin()) + 1;
      if (k >= d.counts.size()) d.counts.resize(k + 1, 0);
      ++d.counts[k];
    }
    for (std::size_t min_count : {std::size_t{1}, std::size_t{10}}) {
      std::vector<double> xs, ys;
      for (std::size_t k = 1; k < d.counts.size(); ++k) {
        if (d.counts[k] >= std::max<std::size_t>(min_count, 1)) {
          xs.push_back(std::log(static_cast<double>(k)));
          ys.push_back(std::log(static_cast<double>(d.counts[k]) / 1e4));
        }
      }
      Eigen::MatrixXd X(xs.size(), 2);
      Eigen::VectorXd y(ys.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        X(i, 0) = xs[i];
        X(i, 1) = 1.0;
        y[i] = ys[i];
      }
      Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
      auto fit = vanet::powerlaw_fit(d, 1, min_count);
      EXPECT_NEAR(fit.exponent, beta[0], 1e-9);
      EXPECT_NEAR(fit.intercept, beta[1], 1e-9);
      if (min_count == 10) {
        EXPECT_GE(fit.exponent, -2.9);
        EXPECT_LE(fit.exponent, -2.1);
      }
    }
  }
}

TEST(Components, LabelsAndLargest) {
  auto g = vanet::VanetGraph::from_edges(7, {{0, 1}, {2, 3}, {3, 4}, {5, 6}});
  auto c = vanet::connected_components(g);
  EXPECT_EQ(c.members.size(), 3u);
  EXPECT_EQ(c.largest, 1);
  EXPECT_EQ(c.members[1], (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(c.label[6], 2);
}

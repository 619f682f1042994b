#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vanet/config.hpp"
#include "vanet/io.hpp"
#include "vanet/pipeline.hpp"
#include "vanet/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

vanet::VehicleSnapshot synthetic_snapshot(std::size_t n, std::uint64_t seed) {
  vanet::SyntheticConfig cfg;
  cfg.vehicles = n;
  cfg.seed = seed;
  auto records = vanet::generate_synthetic(cfg);
  return vanet::snapshot(records, cfg.reference_instant(), 60.0, cfg.bbox.south_west());
}

}  // namespace

TEST(Config, ParsesDocument) {
  vanet::RunConfig cfg;
  vanet::apply_config_text(cfg, R"(# defaults
[graph]
r = 750
f_c = 1800   # MHz
k = 3
method = "barrier"
sweep_r = [100, 200.5, 300]
dataset = "a#b.csv"
)");
  EXPECT_EQ(cfg.impedance.r, 750.0);
  EXPECT_EQ(cfg.impedance.f_c, 1800.0);
  EXPECT_EQ(cfg.cluster.k, 3u);
  EXPECT_EQ(cfg.method, "barrier");
  EXPECT_EQ(cfg.sweep_r, (std::vector<double>{100, 200.5, 300}));
  EXPECT_EQ(cfg.dataset, "a#b.csv");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  vanet::RunConfig cfg;
  EXPECT_THROW(vanet::apply_config_text(cfg, "nonsense = 1\n"), vanet::ConfigError);
  EXPECT_THROW(vanet::apply_config_text(cfg, "r = fast\n"), vanet::ConfigError);
  EXPECT_THROW(vanet::apply_config_text(cfg, "just a line\n"), vanet::ConfigError);
  try {
    vanet::apply_config_text(cfg, "r = 1\nbogus = 2\n", "run.toml");
    FAIL();
  } catch (const vanet::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.toml:2"), std::string::npos);
  }
  cfg.set("epsilon", "1.5");
  EXPECT_THROW(cfg.validate(), vanet::ConfigError);
}

TEST(Config, LaterAssignmentsWin) {
  vanet::RunConfig cfg;
  vanet::apply_config_text(cfg, "r = 300\nseed = 5\n");
  cfg.set("r", "900");
  EXPECT_EQ(cfg.impedance.r, 900.0);
  EXPECT_EQ(cfg.seed, 5u);
  EXPECT_EQ(cfg.synthetic.seed, 5u);
}

TEST(Io, NumbersRoundTrip) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    double v = u(rng);
    EXPECT_EQ(vanet::io::parse_num(vanet::io::num(v)), v);
  }
  EXPECT_EQ(vanet::io::num(0.5), "0.5");
  EXPECT_TRUE(std::isinf(vanet::io::parse_num("inf")));
  EXPECT_THROW(vanet::io::parse_num("x1"), vanet::IoError);
}

TEST(Io, SnapshotRoundTrips) {
  auto snap = synthetic_snapshot(50, 3);
  auto csv = vanet::io::parse_csv(vanet::io::snapshot_csv(snap), vanet::io::kSnapshotHeader);
  auto back = vanet::io::snapshot_from_csv(csv);
  EXPECT_EQ(back.positions, snap.positions);
  auto viaj = vanet::io::snapshot_from_json(vanet::io::snapshot_json(snap));
  EXPECT_EQ(viaj.positions, snap.positions);
  EXPECT_EQ(viaj.origin, snap.origin);
  EXPECT_EQ(viaj.instant, snap.instant);
  EXPECT_THROW(vanet::io::parse_csv("a,b\n1,2\n", vanet::io::kSnapshotHeader), vanet::IoError);
}

TEST(Io, GraphRoundTrip) {
  auto snap = synthetic_snapshot(200, 4);
  vanet::ImpedanceParams params;
  auto g = vanet::build_weighted_graph(snap, params);
  ASSERT_GT(g.edge_count(), 0u);
  auto back = vanet::io::graph_from_json(vanet::io::graph_json(g));
  EXPECT_EQ(back.ids, g.ids);
  EXPECT_EQ(back.positions, g.positions);
  EXPECT_EQ(back.betweenness, g.betweenness);
  ASSERT_EQ(back.edge_count(), g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    EXPECT_EQ(back.edges[e].u, g.edges[e].u);
    EXPECT_EQ(back.edges[e].v, g.edges[e].v);
    EXPECT_EQ(back.edges[e].distance, g.edges[e].distance);
    EXPECT_EQ(back.edges[e].handovers, g.edges[e].handovers);
    EXPECT_EQ(back.edges[e].impedance, g.edges[e].impedance);
  }
  EXPECT_EQ(vanet::io::graph_json(back).dump(), vanet::io::graph_json(g).dump());
  EXPECT_THROW(vanet::io::graph_from_json(vanet::io::json::parse(R"({"nodes": [], "edges": [{"i": 0, "j": 1}]})")),
               vanet::IoError);
}

TEST(Io, LinearProgramRoundTrip) {
  vanet::LinearProgram lp;
  lp.c = Eigen::Vector3d(1, -2, 0.25);
  lp.A_ub = Eigen::MatrixXd::Ones(2, 3);
  lp.b_ub = Eigen::Vector2d(4, 5);
  lp.A_eq = Eigen::MatrixXd::Zero(0, 3);
  lp.b_eq = Eigen::VectorXd(0);
  lp.lower = Eigen::Vector3d(0, -vanet::kInf, 1);
  lp.upper = Eigen::Vector3d(vanet::kInf, 3, 2);
  auto back = vanet::io::lp_from_json(vanet::io::lp_json(lp));
  EXPECT_EQ(back.c, lp.c);
  EXPECT_EQ(back.A_ub, lp.A_ub);
  EXPECT_EQ(back.b_ub, lp.b_ub);
  EXPECT_EQ(back.lower_bounds(), lp.lower_bounds());
  EXPECT_EQ(back.upper_bounds(), lp.upper_bounds());
  auto a = vanet::solve_lp(lp), b = vanet::solve_lp(back);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Io, RankedCsvOrdersByValue) {
  auto text = vanet::io::ranked_csv({"a", "b", "c", "d"}, {0.1, 0.4, 0.1, 0.4}, "p");
  EXPECT_EQ(text, "rank,vehicle_id,p\n1,b,0.4\n2,d,0.4\n3,a,0.1\n4,c,0.1\n");
}

TEST(Io, FileHelpers) {
  auto dir = fs::temp_directory_path() / "vanet_io_test";
  fs::create_directories(dir);
  auto path = (dir / "x.json").string();
  vanet::io::write_json(path, vanet::io::json{{"k", 1}});
  EXPECT_EQ(vanet::io::read_json(path)["k"], 1);
  EXPECT_THROW(vanet::io::read_text((dir / "missing").string()), vanet::IoError);
  fs::remove_all(dir);
}

TEST(Synthetic, DeterministicPerSeed) {
  vanet::SyntheticConfig cfg;
  cfg.vehicles = 300;
  cfg.seed = 9;
  auto a = vanet::generate_synthetic(cfg), b = vanet::generate_synthetic(cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 300u * cfg.records_per_vehicle);
  for (const auto& r : a) EXPECT_TRUE(cfg.bbox.contains(r.lon, r.lat));
  cfg.seed = 10;
  EXPECT_NE(vanet::generate_synthetic(cfg), a);
  auto snap = vanet::snapshot(a, cfg.reference_instant(), 60.0, cfg.bbox.south_west());
  EXPECT_EQ(snap.size(), 300u);
  cfg.vehicles = 0;
  EXPECT_THROW(vanet::generate_synthetic(cfg), vanet::ConfigError);
}

TEST(Sweeps, ImpedanceIncreasesWithFrequency) {
  auto snap = synthetic_snapshot(400, 11);
  vanet::ImpedanceParams params;
  std::vector<double> f{800, 900, 1000, 1200, 1400, 1500, 1600, 1800, 1900, 2000};
  std::vector<double> r{200, 500, 1000};
  auto rows = vanet::sweep_impedance(snap, params, f, r);
  ASSERT_EQ(rows.size(), f.size() * r.size());
  for (std::size_t ri = 0; ri < r.size(); ++ri) {
    for (std::size_t fi = 1; fi < f.size(); ++fi) {
      const auto& prev = rows[ri * f.size() + fi - 1];
      const auto& cur = rows[ri * f.size() + fi];
      ASSERT_FALSE(cur.flagged);
      EXPECT_EQ(cur.r, r[ri]);
      EXPECT_GT(cur.mean_impedance, prev.mean_impedance);
    }
  }
  EXPECT_EQ(vanet::io::impedance_sweep_csv(vanet::sweep_impedance(snap, params, f, r, 3)),
            vanet::io::impedance_sweep_csv(rows));
}

TEST(Sweeps, HandoversNonIncreasingForNestedCellSizes) {
  auto snap = synthetic_snapshot(400, 12);
  vanet::ImpedanceParams params;
  // Each cell side divides the next, so every coarser grid line is also a
  // finer one and no single edge can gain a crossing.
  std::vector<double> rc{100, 200, 400, 800, 1600};
  std::vector<double> r{300, 800};
  auto rows = vanet::sweep_handover(snap, params, rc, r);
  for (std::size_t ri = 0; ri < r.size(); ++ri)
    for (std::size_t ci = 1; ci < rc.size(); ++ci)
      EXPECT_LE(rows[ri * rc.size() + ci].mean_handovers, rows[ri * rc.size() + ci - 1].mean_handovers);
  // Cells far larger than the area leave nothing to cross.
  auto huge = vanet::sweep_handover(snap, params, {1e9}, {500});
  EXPECT_EQ(huge.size(), 1u);
  EXPECT_EQ(huge[0].mean_handovers, 0.0);
}

TEST(Sweeps, EmptyGraphIsFlagged) {
  vanet::VehicleSnapshot snap;
  snap.positions = {{"a", {0, 0}}, {"b", {5000, 0}}};
  vanet::ImpedanceParams params;
  auto rows = vanet::sweep_impedance(snap, params, {900}, {100});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].flagged);
  EXPECT_EQ(rows[0].edges, 0u);
  EXPECT_NE(vanet::io::impedance_sweep_csv(rows).find(",0,1\n"), std::string::npos);
  EXPECT_THROW(vanet::sweep_handover(snap, params, {}, {100}), vanet::ConfigError);
}

TEST(Config, ShippedDefaultsMatchBuiltIns) {
  vanet::RunConfig builtin, loaded;
  vanet::load_config_file(loaded, std::string(VANET_TEST_DATA) + "/../../config/default.toml");
  loaded.validate();
  EXPECT_EQ(loaded.impedance.r, builtin.impedance.r);
  EXPECT_EQ(loaded.impedance.r_c, builtin.impedance.r_c);
  EXPECT_EQ(loaded.impedance.f_c, builtin.impedance.f_c);
  EXPECT_EQ(loaded.impedance.beta, builtin.impedance.beta);
  EXPECT_EQ(loaded.throughput.noise_dbm, builtin.throughput.noise_dbm);
  EXPECT_EQ(loaded.cluster.k, builtin.cluster.k);
  EXPECT_EQ(loaded.cluster.epsilon, builtin.cluster.epsilon);
  EXPECT_EQ(loaded.synthetic.vehicles, builtin.synthetic.vehicles);
  EXPECT_EQ(loaded.synthetic.cluster_sigma_m, builtin.synthetic.cluster_sigma_m);
  EXPECT_EQ(loaded.demand, builtin.demand);
  EXPECT_EQ(loaded.link_capacity, builtin.link_capacity);
  EXPECT_EQ(loaded.sweep_f_c, builtin.sweep_f_c);
  EXPECT_EQ(loaded.sweep_r, builtin.sweep_r);
  EXPECT_EQ(loaded.sweep_r_c, builtin.sweep_r_c);
  EXPECT_EQ(loaded.bbox.lon_min, builtin.bbox.lon_min);
}

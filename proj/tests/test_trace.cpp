#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "vanet/trace.hpp"

namespace {

const std::string kData = VANET_TEST_DATA;

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST(Project, OriginMapsToZero) {
  vanet::GeoPoint o{116.3, 39.9};
  auto p = vanet::project(o.lon, o.lat, o);
  EXPECT_EQ(p.x, 0.0);
  EXPECT_EQ(p.y, 0.0);
}

TEST(Project, HandArithmetic) {
  vanet::GeoPoint o{116.3, 39.9};
  auto north = vanet::project(o.lon, o.lat + 0.001, o);
  EXPECT_NEAR(north.y, 111.19, 0.005);
  EXPECT_NEAR(north.x, 0.0, 1e-12);
  auto east = vanet::project(o.lon + 0.001, o.lat, o);
  EXPECT_NEAR(east.x, 85.30, 0.005);
  EXPECT_NEAR(east.x, 6371000.0 * 0.001 * std::numbers::pi / 180.0 * std::cos(39.9 * std::numbers::pi / 180.0),
              1e-9);
}

TEST(Project, InjectiveAndInvertibleOnBox) {
  vanet::BoundingBox box;
  auto o = box.south_west();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lon(box.lon_min, box.lon_max), lat(box.lat_min, box.lat_max);
  std::set<std::pair<double, double>> seen;
  for (int i = 0; i < 500; ++i) {
    double a = lon(rng), b = lat(rng);
    auto p = vanet::project(a, b, o);
    EXPECT_TRUE(seen.emplace(p.x, p.y).second);
    auto back = vanet::unproject(p, o);
    EXPECT_NEAR(back.lon, a, 1e-12);
    EXPECT_NEAR(back.lat, b, 1e-12);
  }
}

TEST(ParseRecord, AcceptsEpochAndIso) {
  auto a = vanet::parse_record("v1,1201996800,116.3,39.9");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->timestamp, 1201996800.0);
  auto b = vanet::parse_record("v1, 2008-02-03T00:00:00Z ,116.3,39.9");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->timestamp, 1201996800.0);
  auto c = vanet::parse_record("v1,2008-02-03 00:00:10,116.3,39.9");
  ASSERT_TRUE(c);
  EXPECT_EQ(c->timestamp, 1201996810.0);
}

TEST(ParseRecord, RejectsMalformed) {
  EXPECT_FALSE(vanet::parse_record("v1,1,2"));
  EXPECT_FALSE(vanet::parse_record("v1,x,116.3,39.9"));
  EXPECT_FALSE(vanet::parse_record(",1,116.3,39.9"));
  EXPECT_FALSE(vanet::parse_record("v1,1,200,39.9"));
  EXPECT_FALSE(vanet::parse_record("v1,1,116.3,95"));
  EXPECT_FALSE(vanet::parse_record("v1,1,116.3,39.9,5"));
  EXPECT_FALSE(vanet::parse_record("v1,2008-13-01T00:00:00Z,116.3,39.9"));
}

TEST(ParseTrace, FixtureWithThreeMalformedLines) {
  auto r = vanet::parse_trace(kData + "/trace_malformed.csv", vanet::BoundingBox{});
  EXPECT_EQ(r.records.size(), 7u);
  EXPECT_EQ(r.malformed, 3u);
  EXPECT_EQ(r.outside_bbox, 0u);
  EXPECT_EQ(r.records.front().vehicle_id, "v1");
  EXPECT_EQ(r.records[1].timestamp, 1201996810.0);
  EXPECT_EQ(r.records.back().vehicle_id, "v10");
}

TEST(ParseTrace, SingleInBoxRecord) {
  auto path = write_temp("vanet_single.csv", "v1,100,116.3,39.9\n");
  auto r = vanet::parse_trace(path, vanet::BoundingBox{});
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].vehicle_id, "v1");
}

TEST(ParseTrace, OutOfBoxExcluded) {
  auto path = write_temp("vanet_box.csv", "v1,100,116.3,39.9\nv2,100,117.0,39.9\n");
  auto r = vanet::parse_trace(path, vanet::BoundingBox{});
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.outside_bbox, 1u);
}

TEST(ParseTrace, Errors) {
  EXPECT_THROW(vanet::parse_trace("/nonexistent/trace.csv", vanet::BoundingBox{}), vanet::IoError);
  auto path = write_temp("vanet_empty.csv", "garbage\nv2,100,117.0,39.9\n");
  EXPECT_THROW(vanet::parse_trace(path, vanet::BoundingBox{}), vanet::EmptyDatasetError);
  vanet::BoundingBox bad{116.5, 116.4, 39.8, 40.0};
  EXPECT_THROW(vanet::parse_trace(kData + "/trace_malformed.csv", bad), vanet::ConfigError);
}

TEST(ParseTrace, Deterministic) {
  auto a = vanet::parse_trace(kData + "/trace_malformed.csv", vanet::BoundingBox{});
  auto b = vanet::parse_trace(kData + "/trace_malformed.csv", vanet::BoundingBox{});
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].vehicle_id, b.records[i].vehicle_id);
    EXPECT_EQ(a.records[i].timestamp, b.records[i].timestamp);
    EXPECT_EQ(a.records[i].lon, b.records[i].lon);
    EXPECT_EQ(a.records[i].lat, b.records[i].lat);
  }
}

TEST(Snapshot, NearestInTime) {
  std::vector<vanet::GpsRecord> recs{{"a", 95, 116.30, 39.9}, {"a", 103, 116.31, 39.9}};
  vanet::GeoPoint o{116.3, 39.9};
  auto s = vanet::snapshot(recs, 100, 10, o);
  ASSERT_EQ(s.positions.size(), 1u);
  EXPECT_EQ(s.positions.at("a").x, vanet::project(116.31, 39.9, o).x);
}

TEST(Snapshot, WindowBoundary) {
  std::vector<vanet::GpsRecord> recs{{"a", 100, 116.30, 39.9}, {"b", 111, 116.31, 39.9}, {"c", 110, 116.32, 39.9}};
  auto s = vanet::snapshot(recs, 100, 10, {116.3, 39.9});
  EXPECT_EQ(s.positions.size(), 2u);
  EXPECT_FALSE(s.positions.count("b"));
  EXPECT_TRUE(s.positions.count("c"));
}

TEST(Snapshot, FixtureHandChecked) {
  auto r = vanet::parse_trace(kData + "/trace_snapshot.csv", vanet::BoundingBox{});
  EXPECT_EQ(r.outside_bbox, 1u);
  vanet::GeoPoint o{116.25, 39.8};
  auto s = vanet::snapshot(r.records, 1000, 10, o);
  ASSERT_EQ(s.positions.size(), 3u);
  EXPECT_EQ(s.positions.at("a").x, vanet::project(116.31, 39.90, o).x);  // t+3 beats t-5
  EXPECT_EQ(s.positions.at("b").x, vanet::project(116.32, 39.91, o).x);  // equal gaps: earlier wins
  EXPECT_EQ(s.positions.at("c").x, vanet::project(116.40, 39.95, o).x);  // identical times: file order
  EXPECT_FALSE(s.positions.count("d"));
  EXPECT_LE(s.positions.size(), 4u);  // at most the distinct ids in the input
}

TEST(Snapshot, Errors) {
  std::vector<vanet::GpsRecord> recs{{"a", 100, 116.30, 39.9}};
  EXPECT_THROW(vanet::snapshot(recs, 100, 0, {116.3, 39.9}), vanet::DomainError);
  EXPECT_THROW(vanet::snapshot(recs, 500, 10, {116.3, 39.9}), vanet::EmptySnapshotError);
}

TEST(Snapshot, DefaultOriginIsSouthWestOfRecords) {
  std::vector<vanet::GpsRecord> recs{{"a", 100, 116.40, 39.95}, {"b", 100, 116.30, 39.90}};
  auto s = vanet::snapshot(recs, 100, 5);
  EXPECT_EQ(s.origin.lon, 116.30);
  EXPECT_EQ(s.origin.lat, 39.90);
  EXPECT_EQ(s.positions.at("b").x, 0.0);
}

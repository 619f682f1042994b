#pragma once

// CSV and JSON import/export for every artifact the CLI reads or writes.
// Numbers are written in shortest round-trip form, so outputs are
// byte-stable for a given input.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vanet/clustering.hpp"
#include "vanet/errors.hpp"
#include "vanet/graph.hpp"
#include "vanet/metrics.hpp"
#include "vanet/optim.hpp"
#include "vanet/sources.hpp"
#include "vanet/sweeps.hpp"
#include "vanet/trace.hpp"
#include "vanet/traffic.hpp"

namespace vanet::io {

using json = nlohmann::ordered_json;

inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline double parse_num(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  auto v = detail::parse_double(s);
  if (!v) throw IoError("not a number: '" + s + "'");
  return *v;
}

inline json json_num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// --- plain files --------------------------------------------------------------

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failure on " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in " + path + ": " + e.what());
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IoError("missing CSV column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.emplace_back(detail::trim(item));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Parses a CSV with a header row; `expected` (when given) must match it exactly.
inline CsvTable parse_csv(const std::string& text, const std::vector<std::string>& expected = {}) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (first) {
      t.header = std::move(fields);
      first = false;
      if (!expected.empty() && t.header != expected) throw IoError("unexpected CSV header: " + line);
      continue;
    }
    if (fields.size() != t.header.size()) throw IoError("CSV row has wrong field count: " + line);
    t.rows.push_back(std::move(fields));
  }
  if (first) throw IoError("CSV has no header");
  return t;
}

inline CsvTable read_csv(const std::string& path, const std::vector<std::string>& expected = {}) {
  return parse_csv(read_text(path), expected);
}

// --- traces and snapshots -----------------------------------------------------

inline std::string trace_csv(const std::vector<GpsRecord>& records) {
  std::ostringstream out;
  out << "vehicle_id,timestamp,lon,lat\n";
  for (const auto& r : records) out << r.vehicle_id << ',' << num(r.timestamp) << ',' << num(r.lon) << ',' << num(r.lat) << '\n';
  return out.str();
}

inline const std::vector<std::string> kSnapshotHeader{"vehicle_id", "x", "y"};

inline std::string snapshot_csv(const VehicleSnapshot& snap) {
  std::ostringstream out;
  out << "vehicle_id,x,y\n";
  for (const auto& [id, p] : snap.positions) out << id << ',' << num(p.x) << ',' << num(p.y) << '\n';
  return out.str();
}

inline VehicleSnapshot snapshot_from_csv(const CsvTable& t) {
  VehicleSnapshot snap;
  auto ci = t.column("vehicle_id"), cx = t.column("x"), cy = t.column("y");
  for (const auto& row : t.rows) {
    if (!snap.positions.emplace(row[ci], Point{parse_num(row[cx]), parse_num(row[cy])}).second) {
      throw IoError("duplicate vehicle id in snapshot: " + row[ci]);
    }
  }
  if (snap.empty()) throw EmptySnapshotError("snapshot CSV has no vehicles");
  return snap;
}

inline json snapshot_json(const VehicleSnapshot& snap) {
  json j;
  j["instant"] = snap.instant;
  j["origin"] = {{"lon", snap.origin.lon}, {"lat", snap.origin.lat}};
  j["vehicles"] = json::array();
  for (const auto& [id, p] : snap.positions) j["vehicles"].push_back({{"id", id}, {"x", p.x}, {"y", p.y}});
  return j;
}

inline VehicleSnapshot snapshot_from_json(const json& j) {
  VehicleSnapshot snap;
  snap.instant = j.value("instant", 0.0);
  if (j.contains("origin")) snap.origin = {j["origin"].at("lon").get<double>(), j["origin"].at("lat").get<double>()};
  for (const auto& v : j.at("vehicles")) {
    snap.positions.emplace(v.at("id").get<std::string>(), Point{v.at("x").get<double>(), v.at("y").get<double>()});
  }
  if (snap.empty()) throw EmptySnapshotError("snapshot JSON has no vehicles");
  return snap;
}

// --- graphs -------------------------------------------------------------------

inline const std::vector<std::string> kEdgeHeader{"i", "j", "d_ij", "n_s", "R_ij"};

inline std::string edges_csv(const VanetGraph& g) {
  std::ostringstream out;
  out << "i,j,d_ij,n_s,R_ij\n";
  for (const auto& e : g.edges) {
    out << e.u << ',' << e.v << ',' << num(e.distance) << ',' << e.handovers << ',' << num(e.impedance) << '\n';
  }
  return out.str();
}

inline json graph_json(const VanetGraph& g) {
  json j;
  j["range"] = g.range;
  j["nodes"] = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    json node{{"id", g.ids[i]}, {"x", g.positions[i].x}, {"y", g.positions[i].y}};
    if (g.betweenness.size() == g.size()) node["betweenness"] = g.betweenness[i];
    j["nodes"].push_back(std::move(node));
  }
  j["edges"] = json::array();
  for (const auto& e : g.edges) {
    j["edges"].push_back({{"i", e.u}, {"j", e.v}, {"d", e.distance}, {"n_s", e.handovers},
                          {"R", json_num(e.impedance)}});
  }
  return j;
}

inline VanetGraph graph_from_json(const json& j) {
  VanetGraph g;
  try {
    g.range = j.value("range", 0.0);
    bool has_b = true;
    for (const auto& node : j.at("nodes")) {
      g.ids.push_back(node.at("id").get<std::string>());
      g.positions.push_back({node.at("x").get<double>(), node.at("y").get<double>()});
      has_b = has_b && node.contains("betweenness");
      if (has_b) g.betweenness.push_back(node["betweenness"].get<double>());
    }
    if (!has_b) g.betweenness.clear();
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      Edge e;
      int a = je.at("i").get<int>(), b = je.at("j").get<int>();
      if (a == b || a < 0 || b < 0 || static_cast<std::size_t>(std::max(a, b)) >= g.ids.size()) {
        throw IoError("graph JSON has an invalid edge");
      }
      e.u = std::min(a, b);
      e.v = std::max(a, b);
      e.distance = je.at("d").get<double>();
      e.handovers = je.value("n_s", 0);
      e.impedance = je.contains("R") && !je["R"].is_null() ? je["R"].get<double>()
                                                          : std::numeric_limits<double>::quiet_NaN();
      edges.push_back(e);
    }
    g.set_edges(std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed graph JSON: ") + e.what());
  }
  return g;
}

// --- metrics ------------------------------------------------------------------

inline const std::vector<std::string> kMetricsHeader{"id", "k", "C", "C2", "B"};

inline std::string node_metrics_csv(const VanetGraph& g, const std::vector<double>& c, const std::vector<double>& c2,
                                    const std::vector<double>& b) {
  std::ostringstream out;
  out << "id,k,C,C2,B\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << g.ids[i] << ',' << g.degree(static_cast<int>(i)) << ',' << num(c[i]) << ',' << num(c2[i]) << ','
        << num(b[i]) << '\n';
  }
  return out.str();
}

// --- clustering ---------------------------------------------------------------

inline const std::vector<std::string> kClusterHeader{"vehicle_id", "x", "y", "label"};

inline std::string cluster_csv(const VanetGraph& g, const ClusterResult& r) {
  std::ostringstream out;
  out << "vehicle_id,x,y,label\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << g.ids[i] << ',' << num(g.positions[i].x) << ',' << num(g.positions[i].y) << ',' << r.labels[i] << '\n';
  }
  return out.str();
}

inline json cluster_json(const VanetGraph& g, const ClusterResult& r, const ClusterConfig& cfg) {
  json j;
  j["k"] = r.centers.size();
  j["epsilon"] = cfg.epsilon;
  j["centers"] = json::array();
  for (int c : r.centers) j["centers"].push_back(g.ids[c]);
  j["radius"] = r.radius;
  return j;
}

// --- linear programs and solve reports ----------------------------------------

inline json vec_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_num(v[i]));
  return a;
}

inline VectorXd vec_from_json(const json& a) {
  VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = a[i].is_null() ? std::numeric_limits<double>::infinity() : a[i].get<double>();
  }
  return v;
}

inline json mat_json(const MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_json(m.row(r).transpose()));
  return a;
}

inline MatrixXd mat_from_json(const json& a, Eigen::Index cols) {
  MatrixXd m(static_cast<Eigen::Index>(a.size()), cols);
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (static_cast<Eigen::Index>(a[r].size()) != cols) throw IoError("ragged matrix in JSON");
    m.row(static_cast<Eigen::Index>(r)) = vec_from_json(a[r]).transpose();
  }
  return m;
}

// Infinite bounds serialize as null; a null lower bound reads back as -inf.
inline json lp_json(const LinearProgram& lp) {
  json j;
  j["c"] = vec_json(lp.c);
  j["A_ub"] = mat_json(lp.A_ub);
  j["b_ub"] = vec_json(lp.b_ub);
  j["A_eq"] = mat_json(lp.A_eq);
  j["b_eq"] = vec_json(lp.b_eq);
  j["lower"] = vec_json(lp.lower_bounds());
  j["upper"] = vec_json(lp.upper_bounds());
  return j;
}

inline LinearProgram lp_from_json(const json& j) {
  LinearProgram lp;
  lp.c = vec_from_json(j.at("c"));
  lp.A_ub = mat_from_json(j.at("A_ub"), lp.c.size());
  lp.b_ub = vec_from_json(j.at("b_ub"));
  lp.A_eq = mat_from_json(j.at("A_eq"), lp.c.size());
  lp.b_eq = vec_from_json(j.at("b_eq"));
  lp.lower = vec_from_json(j.at("lower"));
  for (std::size_t i = 0; i < j.at("lower").size(); ++i) {
    if (j["lower"][i].is_null()) lp.lower[static_cast<Eigen::Index>(i)] = -kInf;
  }
  lp.upper = vec_from_json(j.at("upper"));
  return lp;
}

inline json report_json(const SolveReport& r) {
  json j;
  j["status"] = to_string(r.status);
  j["objective"] = json_num(r.objective);
  j["gap_bound"] = json_num(r.gap_bound);
  j["iterations"] = r.iterations;
  j["max_violation"] = json_num(r.max_violation);
  j["x"] = vec_json(r.x);
  if (!r.stage_residuals.empty()) {
    j["stage_t"] = r.stage_t;
    j["stage_residuals"] = r.stage_residuals;
  }
  return j;
}

inline std::string iterates_csv(const SolveReport& r) {
  std::ostringstream out;
  out << "outer,inner,t,objective,decrement,min_slack,x\n";
  for (const auto& it : r.iterates) {
    out << it.outer << ',' << it.inner << ',' << num(it.t) << ',' << num(it.objective) << ',' << num(it.decrement)
        << ',' << num(it.min_slack) << ',';
    for (Eigen::Index i = 0; i < it.x.size(); ++i) out << (i ? " " : "") << num(it.x[i]);
    out << '\n';
  }
  return out.str();
}

// --- traffic ------------------------------------------------------------------

inline const std::vector<std::string> kAllocationHeader{"commodity", "source", "x_i", "path"};
inline const std::vector<std::string> kLoadHeader{"u", "v", "load", "capacity"};

inline std::string path_string(const VanetGraph& g, const std::vector<int>& nodes) {
  std::string s;
  for (std::size_t k = 0; k < nodes.size(); ++k) s += (k ? " " : "") + g.ids[nodes[k]];
  return s;
}

inline std::string allocation_csv(const VanetGraph& g, const TrafficProblem& p, const Allocation& a) {
  std::ostringstream out;
  out << "commodity,source,x_i,path\n";
  for (Eigen::Index i = 0; i < p.commodities(); ++i) {
    out << i << ',' << g.ids[p.sources[i]] << ',' << num(a.x[i]) << ',' << path_string(g, p.paths[i].nodes) << '\n';
  }
  return out.str();
}

inline std::string load_csv(const VanetGraph& g, const TrafficProblem& p, const Allocation& a) {
  std::ostringstream out;
  out << "u,v,load,capacity\n";
  for (Eigen::Index e = 0; e < p.edges(); ++e) {
    out << g.ids[p.edge_keys[e].first] << ',' << g.ids[p.edge_keys[e].second] << ',' << num(a.edge_load[e]) << ','
        << num(p.capacity[e]) << '\n';
  }
  return out.str();
}

// --- sources ------------------------------------------------------------------

inline const std::vector<std::string> kSourceHeader{"rank", "vehicle_id", "p"};
inline const std::vector<std::string> kImpedanceHeader{"rank", "vehicle_id", "R"};

// Rows in descending value order; equal values keep node order.
inline std::string ranked_csv(const std::vector<std::string>& ids, const std::vector<double>& values,
                              const std::string& value_name) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::ostringstream out;
  out << "rank,vehicle_id," << value_name << '\n';
  for (std::size_t r = 0; r < order.size(); ++r) out << r + 1 << ',' << ids[order[r]] << ',' << num(values[order[r]]) << '\n';
  return out.str();
}

inline json source_json(const SourceSolution& s, std::size_t component_size, std::size_t graph_size) {
  json j;
  j["status"] = to_string(s.report.status);
  j["lambda"] = s.lambda;
  j["infinite_capacity"] = s.capacity.infinite;
  j["capacity"] = json_num(s.capacity.value);
  j["support"] = s.support;
  j["component_size"] = component_size;
  j["graph_size"] = graph_size;
  return j;
}

// --- sweeps -------------------------------------------------------------------

inline std::string impedance_sweep_csv(const std::vector<ImpedanceSweepRow>& rows) {
  std::ostringstream out;
  out << "f_c,r,mean_R,edges,flagged\n";
  for (const auto& r : rows) {
    out << num(r.f_c) << ',' << num(r.r) << ',' << num(r.mean_impedance) << ',' << r.edges << ','
        << (r.flagged ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::string handover_sweep_csv(const std::vector<HandoverSweepRow>& rows) {
  std::ostringstream out;
  out << "r_c,r,mean_n_s,edges,flagged\n";
  for (const auto& r : rows) {
    out << num(r.r_c) << ',' << num(r.r) << ',' << num(r.mean_handovers) << ',' << r.edges << ','
        << (r.flagged ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace vanet::io

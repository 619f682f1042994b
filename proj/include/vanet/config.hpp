#pragma once

// Run configuration: a flat `key = value` document (TOML-style scalars and
// one-line arrays, `#` comments). Command-line overrides go through the same
// setter, so a flag and a config key always mean the same thing.

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vanet/clustering.hpp"
#include "vanet/errors.hpp"
#include "vanet/graph.hpp"
#include "vanet/synthetic.hpp"
#include "vanet/trace.hpp"

namespace vanet {

struct RunConfig {
  ImpedanceParams impedance;
  ThroughputParams throughput;
  ClusterConfig cluster{8, 0.5, std::nullopt};
  SyntheticConfig synthetic;
  BoundingBox bbox;

  std::string dataset;
  std::optional<double> at;
  double window = 60.0;

  std::vector<double> sweep_f_c{800, 900, 1000, 1200, 1400, 1500, 1600, 1800, 1900, 2000};
  std::vector<double> sweep_r{200, 300, 500, 800, 1000};
  std::vector<double> sweep_r_c{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};

  double demand = 10.0;        // Q
  double link_capacity = 6.0;  // c
  double gap_tol = 1e-6;
  double capacity_scale = 1.0; // C
  std::string method = "simplex";

  std::string out = ".";
  std::uint64_t seed = 1;
  unsigned threads = 1;

  // Assigns one key from its textual value; throws ConfigError on unknown keys
  // or unparsable values.
  void set(const std::string& key, const std::string& value);

  void validate() const {
    impedance.validate();
    throughput.validate();
    bbox.validate();
    if (!(window > 0.0)) throw ConfigError("window must be positive");
    if (!(cluster.epsilon >= 0.0 && cluster.epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
    if (method != "simplex" && method != "barrier") throw ConfigError("method must be simplex or barrier");
  }
};

namespace detail {

inline std::string trim_copy(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

inline double to_double(const std::string& key, const std::string& v) {
  auto parsed = parse_double(v);
  if (!parsed) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return *parsed;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  if (d < 0.0 || d != std::floor(d)) throw ConfigError("key '" + key + "': expected a nonnegative integer");
  return static_cast<std::uint64_t>(d);
}

inline std::vector<double> to_list(const std::string& key, std::string v) {
  v = trim_copy(v);
  if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_copy(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

inline std::string unquote(std::string v) {
  v = trim_copy(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const std::string& raw) {
  using detail::to_double;
  const std::string value = detail::unquote(raw);
  auto num = [&] { return to_double(key, value); };
  static const std::map<std::string, std::function<void(RunConfig&, const std::string&, double)>> numeric = {
      {"alpha", [](RunConfig& c, const std::string&, double v) { c.impedance.alpha = v; }},
      {"beta", [](RunConfig& c, const std::string&, double v) { c.impedance.beta = v; }},
      {"mu", [](RunConfig& c, const std::string&, double v) { c.impedance.mu = v; }},
      {"zeta", [](RunConfig& c, const std::string&, double v) { c.impedance.zeta = v; }},
      {"upsilon", [](RunConfig& c, const std::string&, double v) { c.impedance.upsilon = v; }},
      {"psi", [](RunConfig& c, const std::string&, double v) { c.impedance.psi = v; }},
      {"xi", [](RunConfig& c, const std::string&, double v) { c.impedance.xi = v; }},
      {"theta", [](RunConfig& c, const std::string&, double v) { c.impedance.theta = v; }},
      {"r", [](RunConfig& c, const std::string&, double v) { c.impedance.r = v; }},
      {"r_c", [](RunConfig& c, const std::string&, double v) { c.impedance.r_c = v; }},
      {"f_c", [](RunConfig& c, const std::string&, double v) { c.impedance.f_c = v; }},
      {"floor_R", [](RunConfig& c, const std::string&, double v) { c.impedance.floor_R = v; }},
      {"tau", [](RunConfig& c, const std::string&, double v) { c.throughput.tau = v; }},
      {"varsigma", [](RunConfig& c, const std::string&, double v) { c.throughput.varsigma = v; }},
      {"p_tx_dbm", [](RunConfig& c, const std::string&, double v) { c.throughput.p_tx_dbm = v; }},
      {"noise_dbm", [](RunConfig& c, const std::string&, double v) { c.throughput.noise_dbm = v; }},
      {"shadowing_sigma_db", [](RunConfig& c, const std::string&, double v) { c.throughput.shadowing_sigma_db = v; }},
      {"epsilon", [](RunConfig& c, const std::string&, double v) { c.cluster.epsilon = v; }},
      {"lon_min", [](RunConfig& c, const std::string&, double v) { c.bbox.lon_min = c.synthetic.bbox.lon_min = v; }},
      {"lon_max", [](RunConfig& c, const std::string&, double v) { c.bbox.lon_max = c.synthetic.bbox.lon_max = v; }},
      {"lat_min", [](RunConfig& c, const std::string&, double v) { c.bbox.lat_min = c.synthetic.bbox.lat_min = v; }},
      {"lat_max", [](RunConfig& c, const std::string&, double v) { c.bbox.lat_max = c.synthetic.bbox.lat_max = v; }},
      {"at", [](RunConfig& c, const std::string&, double v) { c.at = v; }},
      {"window", [](RunConfig& c, const std::string&, double v) { c.window = v; }},
      {"Q", [](RunConfig& c, const std::string&, double v) { c.demand = v; }},
      {"c", [](RunConfig& c, const std::string&, double v) { c.link_capacity = v; }},
      {"gap_tol", [](RunConfig& c, const std::string&, double v) { c.gap_tol = v; }},
      {"C", [](RunConfig& c, const std::string&, double v) { c.capacity_scale = v; }},
      {"cluster_sigma", [](RunConfig& c, const std::string&, double v) { c.synthetic.cluster_sigma_m = v; }},
      {"background_fraction", [](RunConfig& c, const std::string&, double v) { c.synthetic.background_fraction = v; }},
      {"start_time", [](RunConfig& c, const std::string&, double v) { c.synthetic.start_time = v; }},
      {"interval", [](RunConfig& c, const std::string&, double v) { c.synthetic.interval_s = v; }},
  };
  if (auto it = numeric.find(key); it != numeric.end()) {
    it->second(*this, key, num());
    return;
  }
  if (key == "k") {
    cluster.k = detail::to_uint(key, value);
  } else if (key == "seed_index") {
    cluster.seed_index = static_cast<int>(detail::to_uint(key, value));
  } else if (key == "n") {
    synthetic.vehicles = detail::to_uint(key, value);
  } else if (key == "clusters") {
    synthetic.clusters = detail::to_uint(key, value);
  } else if (key == "records_per_vehicle") {
    synthetic.records_per_vehicle = detail::to_uint(key, value);
  } else if (key == "seed") {
    seed = detail::to_uint(key, value);
    synthetic.seed = seed;
  } else if (key == "threads") {
    threads = static_cast<unsigned>(detail::to_uint(key, value));
  } else if (key == "sweep_f_c") {
    sweep_f_c = detail::to_list(key, raw);
  } else if (key == "sweep_r") {
    sweep_r = detail::to_list(key, raw);
  } else if (key == "sweep_r_c") {
    sweep_r_c = detail::to_list(key, raw);
  } else if (key == "dataset") {
    dataset = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "method") {
    method = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

// Applies every `key = value` line of a document.
inline void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "<config>") {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    auto t = detail::trim_copy(line);
    if (t.empty()) continue;
    if (t.front() == '[' && t.back() == ']') continue;  // section headers are cosmetic
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    auto key = detail::trim_copy(std::string_view(t).substr(0, eq));
    auto value = detail::trim_copy(std::string_view(t).substr(eq + 1));
    try {
      cfg.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

}  // namespace vanet

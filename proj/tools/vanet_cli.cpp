#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vanet/config.hpp"
#include "vanet/io.hpp"
#include "vanet/vanet.hpp"

namespace fs = std::filesystem;
using vanet::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Named flags that map one-to-one onto config keys. Values are kept as text
// and applied through RunConfig::set after the config file.
class KeyFlags {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& slot = values_[key];
    options_.emplace_back(key, app->add_option(flag, slot, help));
  }

  void apply(vanet::RunConfig& cfg) const {
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) cfg.set(key, values_.at(key));
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

std::string in_out(const vanet::RunConfig& cfg, const std::string& name) { return (fs::path(cfg.out) / name).string(); }

std::string input_or(const std::string& given, const vanet::RunConfig& cfg, const std::string& name) {
  return given.empty() ? in_out(cfg, name) : given;
}

vanet::VehicleSnapshot load_snapshot(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return vanet::io::snapshot_from_csv(vanet::io::read_csv(path, vanet::io::kSnapshotHeader));
  }
  return vanet::io::snapshot_from_json(vanet::io::read_json(path));
}

vanet::VanetGraph load_graph(const std::string& path) { return vanet::io::graph_from_json(vanet::io::read_json(path)); }

int node_index(const vanet::VanetGraph& g, const std::string& id) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.ids[i] == id) return static_cast<int>(i);
  throw vanet::DomainError("unknown vehicle id '" + id + "'");
}

std::vector<std::string> split_ids(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      part = vanet::detail::trim_copy(part);
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

void cmd_gen(const vanet::RunConfig& cfg) {
  auto records = vanet::generate_synthetic(cfg.synthetic);
  vanet::io::write_text(in_out(cfg, "trace.csv"), vanet::io::trace_csv(records));
  json meta;
  meta["vehicles"] = cfg.synthetic.vehicles;
  meta["clusters"] = cfg.synthetic.clusters;
  meta["seed"] = cfg.synthetic.seed;
  meta["records"] = records.size();
  meta["reference_instant"] = cfg.synthetic.reference_instant();
  vanet::io::write_json(in_out(cfg, "trace_meta.json"), meta);
}

void cmd_ingest(const vanet::RunConfig& cfg) {
  std::string path = cfg.dataset.empty() ? in_out(cfg, "trace.csv") : cfg.dataset;
  if (!cfg.at) throw vanet::ConfigError("ingest needs a snapshot instant (--at or key 'at')");
  auto parsed = vanet::parse_trace(path, cfg.bbox);
  auto snap = vanet::snapshot(parsed.records, *cfg.at, cfg.window, cfg.bbox.south_west());
  vanet::io::write_text(in_out(cfg, "snapshot.csv"), vanet::io::snapshot_csv(snap));
  vanet::io::write_json(in_out(cfg, "snapshot.json"), vanet::io::snapshot_json(snap));
  std::cerr << "ingest: " << parsed.records.size() << " records, " << parsed.malformed << " malformed, "
            << parsed.outside_bbox << " outside the box, " << snap.positions.size() << " vehicles\n";
}

void cmd_graph(const vanet::RunConfig& cfg, const std::string& input) {
  auto snap = load_snapshot(input_or(input, cfg, "snapshot.json"));
  auto g = vanet::build_weighted_graph(snap, cfg.impedance, cfg.threads);
  vanet::io::write_json(in_out(cfg, "graph.json"), vanet::io::graph_json(g));
  vanet::io::write_text(in_out(cfg, "edges.csv"), vanet::io::edges_csv(g));
}

void cmd_metrics(const vanet::RunConfig& cfg, const std::string& input, std::size_t k_min) {
  auto g = load_graph(input_or(input, cfg, "graph.json"));
  auto b = vanet::betweenness(g, cfg.threads);
  if (!b.warning.empty()) std::cerr << "metrics: " << b.warning << '\n';
  auto c = vanet::clustering_coefficients(g);
  auto c2 = vanet::two_neighbor_clusterings(g);
  vanet::io::write_text(in_out(cfg, "node_metrics.csv"), vanet::io::node_metrics_csv(g, c, c2, b.values));

  auto dist = vanet::degree_distribution(g);
  std::ostringstream dd;
  dd << "k,count,p\n";
  for (std::size_t k = 0; k < dist.counts.size(); ++k) {
    if (dist.counts[k] == 0) continue;
    dd << k << ',' << dist.counts[k] << ',' << vanet::io::num(dist.p(k)) << '\n';
  }
  vanet::io::write_text(in_out(cfg, "degree_distribution.csv"), dd.str());

  json summary;
  summary["N"] = g.size();
  summary["E"] = g.edge_count();
  summary["C_bar"] = vanet::io::json_num(vanet::average_clustering(g));
  try {
    auto apl = vanet::average_path_length(g);
    summary["l_bar"] = vanet::io::json_num(apl.mean);
    summary["largest_component"] = apl.component_size;
    summary["components"] = apl.component_count;
  } catch (const vanet::UndefinedMetricError& e) {
    summary["l_bar"] = nullptr;
    std::cerr << "metrics: " << e.what() << '\n';
  }
  try {
    auto fit = vanet::powerlaw_fit(dist, k_min);
    summary["fit_exponent"] = vanet::io::json_num(fit.exponent);
    summary["fit_r2"] = vanet::io::json_num(fit.r2);
  } catch (const vanet::FitError& e) {
    summary["fit_exponent"] = nullptr;
    summary["fit_r2"] = nullptr;
    std::cerr << "metrics: " << e.what() << '\n';
  }
  vanet::io::write_json(in_out(cfg, "metrics_summary.json"), summary);
}

std::vector<double> weighted_vehicle_impedances(vanet::VanetGraph& g, const vanet::RunConfig& cfg) {
  if (g.betweenness.size() != g.size()) vanet::fill_betweenness(g, cfg.threads);
  return vanet::vehicle_impedances(g, cfg.throughput, cfg.impedance, cfg.seed);
}

void cmd_cluster(const vanet::RunConfig& cfg, const std::string& input, std::size_t elbow) {
  auto g = load_graph(input_or(input, cfg, "graph.json"));
  auto r = weighted_vehicle_impedances(g, cfg);
  auto result = vanet::cluster(g.positions, r, cfg.cluster);
  vanet::io::write_text(in_out(cfg, "clusters.csv"), vanet::io::cluster_csv(g, result));
  vanet::io::write_json(in_out(cfg, "clusters.json"), vanet::io::cluster_json(g, result, cfg.cluster));
  if (elbow > 0) {
    auto radii = vanet::elbow_sweep(g.positions, r, cfg.cluster, elbow);
    std::ostringstream out;
    out << "k,radius\n";
    for (std::size_t k = 0; k < radii.size(); ++k) out << k + 1 << ',' << vanet::io::num(radii[k]) << '\n';
    vanet::io::write_text(in_out(cfg, "elbow.csv"), out.str());
  }
}

void cmd_allocate(const vanet::RunConfig& cfg, const std::string& input, const std::vector<std::string>& source_ids,
                  const std::string& dest_id, bool dump_iterates) {
  auto g = load_graph(input_or(input, cfg, "graph.json"));
  if (!g.has_impedances()) throw vanet::DomainError("graph has no link impedances; run `graph` first");
  auto ids = split_ids(source_ids);
  if (ids.empty()) throw vanet::ConfigError("allocate needs --sources");
  if (dest_id.empty()) throw vanet::ConfigError("allocate needs --dest");
  std::vector<int> sources;
  for (const auto& id : ids) sources.push_back(node_index(g, id));
  auto problem = vanet::build_problem(g, sources, node_index(g, dest_id), cfg.demand, cfg.link_capacity);
  auto method = cfg.method == "barrier" ? vanet::AllocationMethod::barrier : vanet::AllocationMethod::simplex;
  vanet::BarrierOptions options;
  options.record_iterates = dump_iterates;
  auto a = vanet::allocate(problem, method, cfg.gap_tol, options);

  json report = vanet::io::report_json(a.report);
  report["method"] = cfg.method;
  report["commodities"] = problem.commodities();
  report["edges"] = problem.edges();
  report["cost_vector"] = vanet::io::vec_json(problem.cost);
  if (a.ok()) report["cost"] = a.cost;
  vanet::io::write_json(in_out(cfg, "allocation_report.json"), report);
  if (dump_iterates) vanet::io::write_text(in_out(cfg, "iterates.csv"), vanet::io::iterates_csv(a.report));
  if (!a.ok()) throw SolverFailure(std::string("allocation solve ended with status ") + vanet::to_string(a.report.status));
  vanet::io::write_text(in_out(cfg, "allocation.csv"), vanet::io::allocation_csv(g, problem, a));
  vanet::io::write_text(in_out(cfg, "edge_loads.csv"), vanet::io::load_csv(g, problem, a));
}

void cmd_sources(const vanet::RunConfig& cfg, const std::string& input) {
  auto g = load_graph(input_or(input, cfg, "graph.json"));
  auto r = weighted_vehicle_impedances(g, cfg);
  vanet::io::write_text(in_out(cfg, "vehicle_impedance.csv"), vanet::io::ranked_csv(g.ids, r, "R"));

  auto pass = vanet::pass_matrix(g, cfg.threads);
  if (!pass.warning.empty()) std::cerr << "sources: " << pass.warning << '\n';
  vanet::SourceProblem prob;
  prob.pass = pass.values;
  prob.impedance.resize(static_cast<Eigen::Index>(pass.nodes.size()));
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < pass.nodes.size(); ++k) {
    prob.impedance[static_cast<Eigen::Index>(k)] = r[pass.nodes[k]];
    ids.push_back(g.ids[pass.nodes[k]]);
  }
  prob.scale = cfg.capacity_scale;
  auto sol = vanet::optimize_sources(prob);
  json j = vanet::io::source_json(sol, pass.nodes.size(), g.size());
  if (!pass.warning.empty()) j["warning"] = pass.warning;
  vanet::io::write_json(in_out(cfg, "sources.json"), j);
  if (!sol.report.optimal()) throw SolverFailure(std::string("source LP ended with status ") + vanet::to_string(sol.report.status));
  std::vector<double> p(sol.p.data(), sol.p.data() + sol.p.size());
  vanet::io::write_text(in_out(cfg, "source_distribution.csv"), vanet::io::ranked_csv(ids, p, "p"));
}

void cmd_sweep_impedance(const vanet::RunConfig& cfg, const std::string& input) {
  auto snap = load_snapshot(input_or(input, cfg, "snapshot.json"));
  auto rows = vanet::sweep_impedance(snap, cfg.impedance, cfg.sweep_f_c, cfg.sweep_r, cfg.threads);
  vanet::io::write_text(in_out(cfg, "sweep_impedance.csv"), vanet::io::impedance_sweep_csv(rows));
}

void cmd_sweep_handover(const vanet::RunConfig& cfg, const std::string& input) {
  auto snap = load_snapshot(input_or(input, cfg, "snapshot.json"));
  auto rows = vanet::sweep_handover(snap, cfg.impedance, cfg.sweep_r_c, cfg.sweep_r, cfg.threads);
  vanet::io::write_text(in_out(cfg, "sweep_handover.csv"), vanet::io::handover_sweep_csv(rows));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicular network graph analysis and optimization"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> raw_sets;
  std::string input;
  KeyFlags flags;
  app.add_option("--config", config_path, "Flat key = value config file");
  flags.add(&app, "--seed", "seed", "Random seed");
  flags.add(&app, "--out", "out", "Output directory");
  flags.add(&app, "--threads", "threads", "Worker threads (0 = hardware concurrency)");
  app.add_option("--set", raw_sets, "Override any config key: key=value (repeatable)");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic trace CSV");
  flags.add(gen, "-n,--vehicles", "n", "Number of vehicles");
  flags.add(gen, "--clusters", "clusters", "Number of Gaussian hot spots");
  flags.add(gen, "--cluster-sigma", "cluster_sigma", "Hot-spot standard deviation in meters");

  auto* ingest = app.add_subcommand("ingest", "Parse a trace and extract a snapshot");
  flags.add(ingest, "--dataset", "dataset", "Trace CSV (default: <out>/trace.csv)");
  flags.add(ingest, "--at", "at", "Snapshot instant (unix seconds)");
  flags.add(ingest, "--window", "window", "Snapshot half-window in seconds");

  auto* graph = app.add_subcommand("graph", "Build the impedance-weighted graph");
  graph->add_option("--input", input, "Snapshot JSON or CSV (default: <out>/snapshot.json)");
  flags.add(graph, "-r,--range", "r", "Communication range in meters");
  flags.add(graph, "--f-c", "f_c", "Carrier frequency in MHz");
  flags.add(graph, "--r-c", "r_c", "Cell radius in meters");

  std::size_t k_min = 1;
  auto* metrics = app.add_subcommand("metrics", "Complex-network metrics");
  metrics->add_option("--input", input, "Graph JSON (default: <out>/graph.json)");
  metrics->add_option("--k-min", k_min, "Smallest degree used by the power-law fit");

  std::size_t elbow = 0;
  auto* clus = app.add_subcommand("cluster", "Base-station clustering");
  clus->add_option("--input", input, "Graph JSON (default: <out>/graph.json)");
  flags.add(clus, "-k", "k", "Number of stations");
  flags.add(clus, "--epsilon", "epsilon", "Impedance weight in the generalized distance");
  clus->add_option("--elbow", elbow, "Also emit the radius for k = 1..K");

  std::vector<std::string> source_ids;
  std::string dest_id;
  bool dump_iterates = false;
  auto* alloc = app.add_subcommand("allocate", "V2V traffic allocation");
  alloc->add_option("--input", input, "Graph JSON (default: <out>/graph.json)");
  alloc->add_option("--sources", source_ids, "Source vehicle ids (comma separated or repeated)");
  alloc->add_option("--dest", dest_id, "Destination vehicle id");
  flags.add(alloc, "-Q", "Q", "Total demand");
  flags.add(alloc, "-c", "c", "Per-link capacity");
  flags.add(alloc, "--method", "method", "simplex or barrier");
  flags.add(alloc, "--gap-tol", "gap_tol", "Barrier duality-gap tolerance");
  alloc->add_flag("--dump-iterates", dump_iterates, "Write barrier iterates to iterates.csv");

  auto* src = app.add_subcommand("sources", "Information-source selection");
  src->add_option("--input", input, "Graph JSON (default: <out>/graph.json)");
  flags.add(src, "-C", "C", "Throughput scale constant");

  auto* sw_imp = app.add_subcommand("sweep-impedance", "Mean link impedance over (f_c, r)");
  sw_imp->add_option("--input", input, "Snapshot JSON or CSV (default: <out>/snapshot.json)");
  flags.add(sw_imp, "--f-c-list", "sweep_f_c", "Carrier frequencies, e.g. [800,900]");
  flags.add(sw_imp, "--r-list", "sweep_r", "Ranges, e.g. [200,500]");

  auto* sw_ho = app.add_subcommand("sweep-handover", "Mean handover count over (r_c, r)");
  sw_ho->add_option("--input", input, "Snapshot JSON or CSV (default: <out>/snapshot.json)");
  flags.add(sw_ho, "--r-c-list", "sweep_r_c", "Cell radii, e.g. [100,200]");
  flags.add(sw_ho, "--r-list", "sweep_r", "Ranges, e.g. [200,500]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    vanet::RunConfig cfg;
    if (!config_path.empty()) vanet::load_config_file(cfg, config_path);
    flags.apply(cfg);
    for (const auto& kv : raw_sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw vanet::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(vanet::detail::trim_copy(kv.substr(0, eq)), vanet::detail::trim_copy(kv.substr(eq + 1)));
    }
    cfg.validate();
    fs::create_directories(cfg.out);

    if (gen->parsed()) cmd_gen(cfg);
    else if (ingest->parsed()) cmd_ingest(cfg);
    else if (graph->parsed()) cmd_graph(cfg, input);
    else if (metrics->parsed()) cmd_metrics(cfg, input, k_min);
    else if (clus->parsed()) cmd_cluster(cfg, input, elbow);
    else if (alloc->parsed()) cmd_allocate(cfg, input, source_ids, dest_id, dump_iterates);
    else if (src->parsed()) cmd_sources(cfg, input);
    else if (sw_imp->parsed()) cmd_sweep_impedance(cfg, input);
    else if (sw_ho->parsed()) cmd_sweep_handover(cfg, input);
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const vanet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

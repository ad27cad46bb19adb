#include "antnet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "antnet/format.hpp"

namespace antnet {

namespace {

using nlohmann::json;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  if (m == 0) return 0.0;
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

json snapshot_json(const Snapshot& snap, bool with_weights) {
  json j;
  j["n"] = snap.n;
  j["N"] = {snap.counts[0], snap.counts[1], snap.counts[2]};
  j["Nhat"] = {snap.nhat[0], snap.nhat[1], snap.nhat[2]};
  j["C"] = {snap.conductance[0], snap.conductance[1], snap.conductance[2]};
  if (snap.residual.defined) {
    j["r"] = {snap.residual.r[0], snap.residual.r[1], snap.residual.r[2]};
    j["delta"] = snap.residual.delta;
  } else {
    j["r"] = {nullptr, nullptr, nullptr};
    j["delta"] = nullptr;
  }
  if (with_weights) j["W"] = snap.weights;
  return j;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("lengths")) {
      const auto& l = j.at("lengths");
      if (!l.is_array() || l.size() != 3)
        throw ConfigError("config field 'lengths' must be an array of 3 integers");
      for (size_t i = 0; i < 3; ++i) cfg.lengths[i] = l[i].get<int>();
      cfg.use_lengths = true;
    } else if (j.contains("g1") || j.contains("g2") || j.contains("g3")) {
      cfg.g1 = j.at("g1").get<std::string>();
      cfg.g2 = j.at("g2").get<std::string>();
      cfg.g3 = j.at("g3").get<std::string>();
    } else {
      throw ConfigError("config needs either 'lengths' or 'g1'/'g2'/'g3'");
    }
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("n_steps")) cfg.n_steps = j.at("n_steps").get<uint64_t>();
    if (j.contains("seeds"))
      cfg.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    if (j.contains("checkpoints") && !j.at("checkpoints").is_string())
      cfg.checkpoints = j.at("checkpoints").get<std::vector<uint64_t>>();
    if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("support_floor"))
      cfg.support_floor = j.at("support_floor").get<double>();
    if (j.contains("output_dir"))
      cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("dump_weights"))
      cfg.dump_weights = j.at("dump_weights").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  ExperimentConfig cfg = config_from_json(buf.str());
  validate_config(cfg);
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw ConfigError("config field 'seeds' must be non-empty");
  std::vector<uint64_t> sorted = cfg.seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("config field 'seeds' must be distinct");
  if (cfg.n_steps < 1) throw ConfigError("config field 'n_steps' must be >= 1");
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0)
    throw ConfigError("config field 'alpha' must lie in [0,1]");
  if (cfg.use_lengths)
    for (int l : cfg.lengths)
      if (l < 1) throw ConfigError("config field 'lengths' entries must be >= 1");
}

TriangleSP make_triangle(const ExperimentConfig& cfg) {
  if (cfg.use_lengths)
    return line_triangle(cfg.lengths[0], cfg.lengths[1], cfg.lengths[2]);
  return assemble(parse_sp(cfg.g1), parse_sp(cfg.g2), parse_sp(cfg.g3));
}

TheoryParams theory_params(const ExperimentConfig& cfg) {
  const TriangleSP tri = make_triangle(cfg);
  return TheoryParams{cfg.alpha, static_cast<double>(tri.h_min[0]),
                      static_cast<double>(tri.h_min[1]),
                      static_cast<double>(tri.h_min[2])};
}

std::string snapshot_to_jsonl(const Snapshot& snap, bool with_weights) {
  return snapshot_json(snap, with_weights).dump();
}

std::vector<ReplicaResult> run_replicas(const ExperimentConfig& cfg,
                                        ExecMode mode) {
  validate_config(cfg);
  const TriangleSP tri = make_triangle(cfg);
  const std::vector<uint64_t> checkpoints =
      cfg.checkpoints.empty() ? geometric_checkpoints(cfg.n_steps)
                              : cfg.checkpoints;

  std::vector<ReplicaResult> results(cfg.seeds.size());
  auto run_one = [&](size_t i) {
    AntsProcess proc(tri, cfg.alpha, cfg.seeds[i]);
    ReplicaResult rep;
    rep.seed = cfg.seeds[i];
    rep.snapshots = run_process(proc, cfg.n_steps, checkpoints, cfg.dump_weights);
    rep.final_weights = proc.weights();
    results[i] = std::move(rep);
  };

  if (mode == ExecMode::Parallel) {
    const int threads = max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int64_t i = 0; i < static_cast<int64_t>(results.size()); ++i)
      run_one(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < results.size(); ++i) run_one(i);
  }
  return results;
}

void run_experiment(const ExperimentConfig& cfg, ExecMode mode) {
  namespace fs = std::filesystem;
  const std::vector<ReplicaResult> results = run_replicas(cfg, mode);
  const TriangleSP tri = make_triangle(cfg);

  fs::create_directories(cfg.output_dir);
  for (const ReplicaResult& rep : results) {
    std::ofstream out(fs::path(cfg.output_dir) /
                      ("seed_" + std::to_string(rep.seed) + ".jsonl"));
    for (const Snapshot& snap : rep.snapshots)
      out << snapshot_to_jsonl(snap, cfg.dump_weights) << "\n";
  }

  {
    std::ofstream csv(fs::path(cfg.output_dir) / "summary.csv");
    csv << "seed,n,N1,N2,N3,Nhat1,Nhat2,Nhat3,C1,C2,C3,delta\n";
    for (const ReplicaResult& rep : results) {
      const Snapshot& snap = rep.snapshots.back();
      csv << rep.seed << ',' << snap.n;
      for (uint64_t c : snap.counts) csv << ',' << c;
      for (double v : snap.nhat) csv << ',' << format_double(v);
      for (double v : snap.conductance) csv << ',' << format_double(v);
      csv << ','
          << (snap.residual.defined ? format_double(snap.residual.delta) : "")
          << "\n";
    }
  }

  {
    json j;
    j["graph"] = json::parse(graph_to_json(tri.graph));
    j["alpha"] = cfg.alpha;
    j["n_steps"] = cfg.n_steps;
    std::vector<int> comps(static_cast<size_t>(tri.num_edges()));
    for (int e = 0; e < tri.num_edges(); ++e)
      comps[static_cast<size_t>(e)] = tri.component_of(e);
    j["components"] = comps;
    j["runs"] = json::array();
    for (const ReplicaResult& rep : results) {
      const Snapshot& snap = rep.snapshots.back();
      j["runs"].push_back({{"seed", rep.seed},
                           {"n", snap.n},
                           {"N", {snap.counts[0], snap.counts[1], snap.counts[2]}},
                           {"W", rep.final_weights}});
    }
    std::ofstream out(fs::path(cfg.output_dir) / "final_weights.json");
    out << j.dump(2) << "\n";
  }
}

VerificationReport verify_theorem(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw ConfigError("theorem verification needs alpha in (0,1)");
  const fs::path artifact = fs::path(cfg.output_dir) / "final_weights.json";
  std::ifstream in(artifact);
  if (!in) throw ConfigError("missing run artifacts: " + artifact.string());
  json j = json::parse(in);

  const TriangleSP tri = make_triangle(cfg);
  const TheoryParams tp = theory_params(cfg);

  VerificationReport report;
  report.predicted = classify_case(tp);
  report.tolerance = cfg.tolerance;
  report.support_floor = cfg.support_floor;

  const auto& runs = j.at("runs");
  if (runs.empty()) throw ConfigError("run artifacts contain no replicas");
  const size_t num_edges = static_cast<size_t>(tri.num_edges());
  std::vector<std::vector<double>> edge_ratios(num_edges);
  std::array<std::vector<double>, 3> nhat_samples;
  for (const auto& run : runs) {
    const double n = run.at("n").get<double>();
    std::array<double, 3> nhat{};
    for (size_t i = 0; i < 3; ++i)
      nhat[i] = run.at("N")[i].get<double>() / n;
    report.per_seed_nhat.push_back(nhat);
    for (size_t i = 0; i < 3; ++i) nhat_samples[i].push_back(nhat[i]);
    const auto& w = run.at("W");
    for (size_t e = 0; e < num_edges; ++e)
      edge_ratios[e].push_back(w[e].get<double>() / n);
  }

  report.nhat_pass = true;
  for (size_t i = 0; i < 3; ++i) {
    report.median_nhat[i] = median(nhat_samples[i]);
    report.abs_err[i] = std::fabs(report.median_nhat[i] - report.predicted.nhat[i]);
    if (report.abs_err[i] > cfg.tolerance) report.nhat_pass = false;
  }

  // chi-support: an edge keeps linear weight iff its component is active and
  // the edge lies on a shortest path of that component
  std::vector<bool> in_support(num_edges, false);
  for (int i = 0; i < 3; ++i) {
    if (report.predicted.nhat[static_cast<size_t>(i)] <= 0.0) continue;
    for (int e : component_shortest_path_edges(tri, i))
      in_support[static_cast<size_t>(e)] = true;
  }

  report.support_pass = true;
  for (size_t e = 0; e < num_edges; ++e) {
    EdgeCheck check;
    check.edge = static_cast<int>(e);
    check.component = tri.component_of(static_cast<int>(e));
    check.median_ratio = median(edge_ratios[e]);
    check.in_support = in_support[e];
    check.pass = (check.median_ratio > cfg.support_floor) == check.in_support;
    if (!check.pass) report.support_pass = false;
    report.edges.push_back(check);
  }
  report.pass = report.nhat_pass && report.support_pass;

  {
    json out;
    out["case"] = report.predicted.case_id;
    out["predicted_nhat"] = report.predicted.nhat;
    out["median_nhat"] = report.median_nhat;
    out["abs_err"] = report.abs_err;
    out["tolerance"] = report.tolerance;
    out["support_floor"] = report.support_floor;
    out["edges"] = json::array();
    for (const EdgeCheck& c : report.edges)
      out["edges"].push_back({{"edge", c.edge},
                              {"component", c.component + 1},
                              {"median_ratio", c.median_ratio},
                              {"in_support", c.in_support},
                              {"pass", c.pass}});
    out["nhat_pass"] = report.nhat_pass;
    out["support_pass"] = report.support_pass;
    out["pass"] = report.pass;
    std::ofstream rep_out(fs::path(cfg.output_dir) / "report.json");
    rep_out << out.dump(2) << "\n";
  }
  return report;
}

std::vector<FlowOverlayRow> report_flow_overlay(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.seeds.empty()) throw ConfigError("config field 'seeds' must be non-empty");
  const fs::path snap_path =
      fs::path(cfg.output_dir) / ("seed_" + std::to_string(cfg.seeds[0]) + ".jsonl");
  std::ifstream in(snap_path);
  if (!in) throw ConfigError("missing run artifacts: " + snap_path.string());

  struct Row {
    uint64_t n;
    std::array<uint64_t, 3> counts;
    std::array<double, 3> nhat;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    Row row;
    row.n = j.at("n").get<uint64_t>();
    for (size_t i = 0; i < 3; ++i) {
      row.counts[i] = j.at("N")[i].get<uint64_t>();
      row.nhat[i] = j.at("Nhat")[i].get<double>();
    }
    rows.push_back(row);
  }

  size_t begin = rows.size();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].counts[0] > 0 && rows[i].counts[1] > 0 && rows[i].counts[2] > 0) {
      begin = i;
      break;
    }
  }
  if (begin == rows.size())
    throw ConfigError("no checkpoint with all counters positive");

  const TheoryParams tp = theory_params(cfg);
  const uint64_t n0 = rows[begin].n;
  const Point2 start{rows[begin].nhat[0], rows[begin].nhat[2]};

  std::vector<FlowOverlayRow> overlay;
  double t = 0.0;
  uint64_t k = n0;
  FlowOptions opts;
  opts.tol = 0.0;  // run to t, no early convergence snap
  for (size_t i = begin; i < rows.size(); ++i) {
    while (k < rows[i].n) {
      ++k;
      t += 1.0 / static_cast<double>(k);
    }
    opts.t_max = t;
    const FlowResult flow = integrate_flow(start, tp, opts);
    const Point2 y = flow.trajectory.back().second;
    overlay.push_back(FlowOverlayRow{rows[i].n, t, rows[i].nhat[0],
                                     rows[i].nhat[2], y.w1, y.w3});
  }

  {
    std::ofstream csv(fs::path(cfg.output_dir) / "flow_overlay.csv");
    csv << "n,t,emp_w1,emp_w3,flow_w1,flow_w3\n";
    for (const FlowOverlayRow& row : overlay)
      csv << row.n << ',' << format_double(row.t) << ','
          << format_double(row.emp_w1) << ',' << format_double(row.emp_w3) << ','
          << format_double(row.flow_w1) << ',' << format_double(row.flow_w3)
          << "\n";
  }
  return overlay;
}

}  // namespace antnet

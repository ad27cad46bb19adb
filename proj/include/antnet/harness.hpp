#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "antnet/ants.hpp"
#include "antnet/parallel.hpp"
#include "antnet/theory.hpp"
#include "antnet/triangle.hpp"

namespace antnet {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // triangle given either as three SP expressions or as line lengths
  std::string g1, g2, g3;
  std::array<int, 3> lengths{0, 0, 0};
  bool use_lengths = false;

  double alpha = 0.5;
  uint64_t n_steps = 1'000'000;
  std::vector<uint64_t> seeds;
  std::vector<uint64_t> checkpoints;  // empty = geometric schedule
  double tolerance = 0.02;
  double support_floor = 0.01;
  std::string output_dir = "out";
  bool dump_weights = false;  // full weight vector at every checkpoint
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

TriangleSP make_triangle(const ExperimentConfig& cfg);
TheoryParams theory_params(const ExperimentConfig& cfg);

struct ReplicaResult {
  uint64_t seed = 0;
  std::vector<Snapshot> snapshots;
  std::vector<uint64_t> final_weights;
};

// One full process run per seed. Parallel mode distributes replicas over
// OpenMP threads; outputs are merged in seed order, so both modes produce
// identical results.
std::vector<ReplicaResult> run_replicas(const ExperimentConfig& cfg,
                                        ExecMode mode);

// Runs the replicas and writes per-seed snapshot JSONL files, summary.csv
// and final_weights.json under cfg.output_dir.
void run_experiment(const ExperimentConfig& cfg,
                    ExecMode mode = ExecMode::Parallel);

std::string snapshot_to_jsonl(const Snapshot& snap, bool with_weights);

struct EdgeCheck {
  int edge = 0;
  int component = 0;
  double median_ratio = 0.0;
  bool in_support = false;
  bool pass = false;
};

struct VerificationReport {
  CaseLimits predicted;
  std::array<double, 3> median_nhat{};
  std::array<double, 3> abs_err{};
  std::vector<std::array<double, 3>> per_seed_nhat;
  std::vector<EdgeCheck> edges;
  double tolerance = 0.0;
  double support_floor = 0.0;
  bool nhat_pass = false;
  bool support_pass = false;
  bool pass = false;
};

// Reads run artifacts from cfg.output_dir and checks the final counters and
// per-edge weight ratios against the predicted limits; writes report.json.
VerificationReport verify_theorem(const ExperimentConfig& cfg);

struct FlowOverlayRow {
  uint64_t n = 0;
  double t = 0.0;       // stochastic-approximation time sum 1/k
  double emp_w1 = 0.0;
  double emp_w3 = 0.0;
  double flow_w1 = 0.0;
  double flow_w3 = 0.0;
};

// Pairs the first seed's empirical checkpoints with the ODE flow started at
// the first checkpoint with all counters positive; writes flow_overlay.csv.
std::vector<FlowOverlayRow> report_flow_overlay(const ExperimentConfig& cfg);

}  // namespace antnet

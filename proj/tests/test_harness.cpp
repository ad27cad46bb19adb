#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "antnet/harness.hpp"

using namespace antnet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("antnet_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  ExperimentConfig cfg = config_from_json(
      R"({"lengths":[1,2,1],"alpha":0.5,"n_steps":100,"seeds":[1,2],"tolerance":0.05})");
  CHECK(cfg.use_lengths);
  CHECK(cfg.lengths == std::array<int, 3>{1, 2, 1});
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.n_steps == 100);
  CHECK(cfg.tolerance == 0.05);
  validate_config(cfg);

  ExperimentConfig expr_cfg = config_from_json(
      R"json({"g1":"e","g2":"par(e,e)","g3":"series(e,e)","seeds":[7]})json");
  CHECK(!expr_cfg.use_lengths);
  TriangleSP tri = make_triangle(expr_cfg);
  CHECK(tri.num_edges() == 5);

  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"alpha":0.5})"), ConfigError);
}

TEST_CASE("config rejects bad fields") {
  auto bad = [](const std::string& text) {
    ExperimentConfig cfg = config_from_json(text);
    validate_config(cfg);
  };
  CHECK_THROWS_AS(bad(R"({"lengths":[1,2,1],"seeds":[]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"lengths":[1,2,1],"seeds":[1,1]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"lengths":[1,2,1],"seeds":[1],"n_steps":0})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"lengths":[1,2,1],"seeds":[1],"alpha":1.5})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"lengths":[0,2,1],"seeds":[1]})"), ConfigError);
  CHECK_THROWS_AS(bad(R"({"lengths":[1,2],"seeds":[1]})"), ConfigError);
}

TEST_CASE("reruns produce byte-identical artifacts") {
  ExperimentConfig cfg;
  cfg.use_lengths = true;
  cfg.lengths = {1, 1, 2};
  cfg.alpha = 0.5;
  cfg.n_steps = 2000;
  cfg.seeds = {4, 9};

  cfg.output_dir = fresh_dir("rerun_a").string();
  run_experiment(cfg);
  std::string a_snap = slurp(fs::path(cfg.output_dir) / "seed_4.jsonl");
  std::string a_csv = slurp(fs::path(cfg.output_dir) / "summary.csv");

  cfg.output_dir = fresh_dir("rerun_b").string();
  run_experiment(cfg);
  CHECK(slurp(fs::path(cfg.output_dir) / "seed_4.jsonl") == a_snap);
  CHECK(slurp(fs::path(cfg.output_dir) / "summary.csv") == a_csv);
}

TEST_CASE("parallel replicas match the serial reference") {
  ExperimentConfig cfg;
  cfg.use_lengths = true;
  cfg.lengths = {2, 2, 3};
  cfg.alpha = 0.3;
  cfg.n_steps = 3000;
  cfg.seeds = {1, 2, 3, 4, 5, 6};

  auto serial = run_replicas(cfg, ExecMode::Serial);
  auto parallel = run_replicas(cfg, ExecMode::Parallel);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == parallel[i].seed);
    CHECK(serial[i].final_weights == parallel[i].final_weights);
    REQUIRE(serial[i].snapshots.size() == parallel[i].snapshots.size());
    for (size_t k = 0; k < serial[i].snapshots.size(); ++k) {
      CHECK(serial[i].snapshots[k].counts == parallel[i].snapshots[k].counts);
      CHECK(snapshot_to_jsonl(serial[i].snapshots[k], false) ==
            snapshot_to_jsonl(parallel[i].snapshots[k], false));
    }
  }
}

TEST_CASE("snapshot JSONL schema") {
  TriangleSP tri = line_triangle(1, 1, 1);
  AntsProcess proc(tri, 0.5, 3);
  Snapshot first = proc.snapshot();
  nlohmann::json j0 = nlohmann::json::parse(snapshot_to_jsonl(first, false));
  CHECK(j0.at("n") == 0);
  CHECK(j0.at("r")[0].is_null());
  CHECK(j0.at("delta").is_null());

  proc.advance(200);
  nlohmann::json j = nlohmann::json::parse(snapshot_to_jsonl(proc.snapshot(), false));
  CHECK(j.at("N").size() == 3);
  CHECK(j.at("Nhat").size() == 3);
  CHECK(j.at("C").size() == 3);
  CHECK(j.at("r")[0].is_number());
}

TEST_CASE("verify_theorem on an interior case") {
  ExperimentConfig cfg;
  cfg.use_lengths = true;
  cfg.lengths = {1, 1, 1};
  cfg.alpha = 0.3;
  cfg.n_steps = 100000;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.tolerance = 0.02;
  cfg.output_dir = fresh_dir("verify").string();

  CHECK_THROWS_AS(verify_theorem(cfg), ConfigError);  // artifacts missing

  run_experiment(cfg);
  VerificationReport report = verify_theorem(cfg);
  CHECK(report.predicted.case_id == 2);
  CHECK(report.nhat_pass);
  CHECK(report.support_pass);
  CHECK(report.pass);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "report.json"));
  for (const EdgeCheck& e : report.edges) CHECK(e.in_support);
}

TEST_CASE("verify_theorem flags support violations via the floor") {
  // case 3: G3 edges must fall below the floor
  ExperimentConfig cfg;
  cfg.use_lengths = true;
  cfg.lengths = {1, 1, 4};
  cfg.alpha = 0.4;
  cfg.n_steps = 200000;
  cfg.seeds = {11, 12, 13};
  cfg.tolerance = 0.03;
  cfg.output_dir = fresh_dir("support").string();
  run_experiment(cfg);
  VerificationReport report = verify_theorem(cfg);
  CHECK(report.predicted.case_id == 3);
  for (const EdgeCheck& e : report.edges) {
    if (e.component == 2) {
      CHECK(!e.in_support);
      CHECK(e.median_ratio < 0.01);
    } else {
      CHECK(e.in_support);
    }
  }
}

TEST_CASE("flow overlay tracks the run") {
  ExperimentConfig cfg;
  cfg.use_lengths = true;
  cfg.lengths = {1, 1, 1};
  cfg.alpha = 0.5;
  cfg.n_steps = 200000;
  cfg.seeds = {21};
  cfg.output_dir = fresh_dir("overlay").string();
  run_experiment(cfg);

  auto overlay = report_flow_overlay(cfg);
  REQUIRE(!overlay.empty());
  CHECK(fs::exists(fs::path(cfg.output_dir) / "flow_overlay.csv"));

  // the flow limit is the classified limit; the run should end near it
  const CaseLimits cl = classify_case(theory_params(cfg));
  const FlowOverlayRow& last = overlay.back();
  CHECK(std::fabs(last.flow_w1 - cl.nhat[0]) < 0.05);
  CHECK(std::fabs(last.flow_w3 - cl.nhat[2]) < 0.05);
  CHECK(std::fabs(last.emp_w1 - last.flow_w1) < 0.05);
  CHECK(std::fabs(last.emp_w3 - last.flow_w3) < 0.05);
}

TEST_CASE("theory params come from component heights") {
  ExperimentConfig cfg;
  cfg.g1 = "par(e,series(e,e))";
  cfg.g2 = "series(e,e)";
  cfg.g3 = "e";
  cfg.seeds = {1};
  TheoryParams tp = theory_params(cfg);
  CHECK(tp.l1 == 1);
  CHECK(tp.l2 == 2);
  CHECK(tp.l3 == 1);
}

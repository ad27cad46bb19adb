#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "antnet/format.hpp"
#include "antnet/harness.hpp"
#include "antnet/oracle.hpp"
#include "antnet/theory.hpp"
#include "antnet/urns.hpp"

namespace {

using namespace antnet;
using nlohmann::json;

struct CommonOverrides {
  std::string config_path;
  std::vector<uint64_t> seeds;
  double alpha = -1.0;
  int64_t n_steps = -1;
  std::vector<int> lengths;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOverrides& ov) {
  cmd->add_option("-c,--config", ov.config_path, "experiment config (JSON)");
  cmd->add_option("--seed", ov.seeds, "replica seed (repeatable, overrides config)");
  cmd->add_option("--alpha", ov.alpha, "nest-1 probability");
  cmd->add_option("--steps", ov.n_steps, "steps per replica");
  cmd->add_option("--lengths", ov.lengths, "line-triangle lengths l1,l2,l3")
      ->delimiter(',')
      ->expected(3);
  cmd->add_option("--out", ov.out_dir, "output directory");
}

ExperimentConfig resolve_config(const CommonOverrides& ov) {
  ExperimentConfig cfg;
  if (!ov.config_path.empty()) {
    cfg = load_config(ov.config_path);
  } else if (ov.lengths.size() == 3) {
    cfg.use_lengths = true;
  } else {
    throw ConfigError("either --config or --lengths is required");
  }
  if (ov.lengths.size() == 3) {
    cfg.use_lengths = true;
    cfg.lengths = {ov.lengths[0], ov.lengths[1], ov.lengths[2]};
  }
  if (ov.alpha >= 0.0) cfg.alpha = ov.alpha;
  if (ov.n_steps >= 1) cfg.n_steps = static_cast<uint64_t>(ov.n_steps);
  if (!ov.seeds.empty()) cfg.seeds = ov.seeds;
  if (cfg.seeds.empty()) cfg.seeds = {1, 2, 3, 4, 5};
  if (!ov.out_dir.empty()) cfg.output_dir = ov.out_dir;
  validate_config(cfg);
  return cfg;
}

Rat parse_rat(const std::string& tok) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return Rat(mpz_class(tok));
  return Rat(mpz_class(tok.substr(0, slash)), mpz_class(tok.substr(slash + 1)));
}

int cmd_theory(double alpha, const std::vector<int>& lengths,
               const std::string& out_dir, int grid_n) {
  const TheoryParams tp{alpha, static_cast<double>(lengths[0]),
                        static_cast<double>(lengths[1]),
                        static_cast<double>(lengths[2])};
  std::filesystem::create_directories(out_dir);

  const CaseLimits limits = classify_case(tp);
  json beta_out;
  beta_out["alpha"] = alpha;
  beta_out["lengths"] = lengths;
  beta_out["case"] = limits.case_id;
  beta_out["swapped"] = limits.swapped;
  beta_out["nhat_limits"] = limits.nhat;
  if (limits.beta) {
    beta_out["beta1"] = limits.beta->w1;
    beta_out["beta3"] = limits.beta->w3;
  } else {
    beta_out["beta1"] = nullptr;
    beta_out["beta3"] = nullptr;
  }
  {
    std::ofstream out(std::filesystem::path(out_dir) / "beta.json");
    out << beta_out.dump(2) << "\n";
  }
  std::cout << beta_out.dump(2) << "\n";

  {
    std::ofstream csv(std::filesystem::path(out_dir) / "zeros.csv");
    csv << "w1,w3,denominator,f_norm\n";
    for (const Point2& z : field_zeros(tp)) {
      csv << format_double(z.w1) << ',' << format_double(z.w3) << ',';
      if (std::isnan(z.w1)) {
        csv << "nan,nan\n";
        continue;
      }
      const double den = field_denominator(z, tp);
      csv << format_double(den) << ',';
      if (den > 0.0) {
        const Point2 f = field(z, tp);
        csv << format_double(std::max(std::fabs(f.w1), std::fabs(f.w3)));
      } else {
        csv << "nan";
      }
      csv << "\n";
    }
  }

  {
    std::ofstream csv(std::filesystem::path(out_dir) / "grid.csv");
    csv << "w1,w3,F1,F3\n";
    for (const GridPoint& p : phase_grid(tp, grid_n, ExecMode::Parallel))
      csv << format_double(p.w1) << ',' << format_double(p.w3) << ','
          << format_double(p.f1) << ',' << format_double(p.f3) << "\n";
  }

  {
    std::ofstream csv(std::filesystem::path(out_dir) / "flows.csv");
    csv << "flow_id,t,w1,w3,converged,limit_w1,limit_w3\n";
    int id = 0;
    for (int i = 1; i <= 5; ++i) {
      for (int j = 1; j <= 5; ++j) {
        const Point2 start{i / 6.0, j / 6.0};
        const FlowResult flow = integrate_flow(start, tp);
        for (const auto& [t, y] : flow.trajectory)
          csv << id << ',' << format_double(t) << ',' << format_double(y.w1)
              << ',' << format_double(y.w3) << ',' << (flow.converged ? 1 : 0)
              << ',' << format_double(flow.limit.w1) << ','
              << format_double(flow.limit.w3) << "\n";
        ++id;
      }
    }
  }
  std::cerr << "theory artifacts written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-nest reinforced-walk simulator and verifier"};
  app.require_subcommand(1);

  CommonOverrides sim_ov;
  bool sim_serial = false;
  std::string sim_dump_traj;
  CLI::App* sim = app.add_subcommand("simulate", "run seeded replicas, write artifacts");
  add_common(sim, sim_ov);
  sim->add_flag("--serial", sim_serial, "use the serial reference path");
  sim->add_option("--dump-traj", sim_dump_traj,
                  "debug: write per-step walk vertex ids (first seed) to this JSONL file");

  CommonOverrides ver_ov;
  CLI::App* ver = app.add_subcommand("verify", "check run artifacts against the predicted limits");
  add_common(ver, ver_ov);

  double th_alpha = 0.3;
  std::vector<int> th_lengths;
  std::string th_out = "theory_out";
  int th_grid = 41;
  CLI::App* th = app.add_subcommand("theory", "emit zeros, phase grid, flows and beta values");
  th->add_option("--alpha", th_alpha, "nest-1 probability")->required();
  th->add_option("--lengths", th_lengths, "component heights l1,l2,l3")
      ->delimiter(',')
      ->expected(3)
      ->required();
  th->add_option("--out", th_out, "output directory");
  th->add_option("--grid", th_grid, "phase grid resolution");

  CommonOverrides flow_ov;
  std::vector<double> flow_start;
  double flow_dt = 1e-3, flow_tmax = 1e3, flow_tol = 1e-9;
  std::string flow_out;
  CLI::App* fl = app.add_subcommand("flow", "integrate the ODE flow, or overlay a run against it");
  add_common(fl, flow_ov);
  fl->add_option("--start", flow_start, "start point w1,w3 (omit to overlay run artifacts)")
      ->delimiter(',')
      ->expected(2);
  fl->add_option("--dt", flow_dt, "RK4 step");
  fl->add_option("--tmax", flow_tmax, "time horizon");
  fl->add_option("--tol", flow_tol, "convergence tolerance");
  fl->add_option("--csv", flow_out, "trajectory CSV path");

  std::string or_graph, or_expr, or_weights, or_mode = "le", or_out;
  int or_start = -1, or_absorb = -1, or_ta = -1, or_tb = -1;
  CLI::App* orc = app.add_subcommand("oracle", "exact loop-erased-walk laws on small graphs");
  orc->add_option("--graph", or_graph, "graph JSON file");
  orc->add_option("--expr", or_expr, "SP expression instead of a graph file");
  orc->add_option("--weights", or_weights, "comma-separated edge weights (integers or n/d)");
  orc->add_option("--start", or_start, "walk start (default source)");
  orc->add_option("--absorb", or_absorb, "absorbing vertex (default sink)");
  orc->add_option("--mode", or_mode, "le | excursion | hit");
  orc->add_option("--target-a", or_ta, "hit mode: first target");
  orc->add_option("--target-b", or_tb, "hit mode: second target");
  orc->add_option("--out", or_out, "output JSON path (default stdout)");

  std::string urn_mode = "g", urn_g = "affine:0.25,0.5", urn_out;
  double urn_c = 0.0, urn_alpha = 0.5, urn_l1 = 1, urn_l2p = 1, urn_l3p = 1;
  uint64_t urn_steps = 100000, urn_seed = 1;
  CLI::App* urn = app.add_subcommand("urn", "reference urn processes (CSV trajectories)");
  urn->add_option("--mode", urn_mode, "g | polya");
  urn->add_option("--g", urn_g, "G spec: affine:a,b (a + b x) or square");
  urn->add_option("--c", urn_c, "normalization constant");
  urn->add_option("--alpha", urn_alpha, "polya: Bernoulli thinning");
  urn->add_option("--l1", urn_l1, "polya: color-1 length");
  urn->add_option("--l2p", urn_l2p, "polya: l2'");
  urn->add_option("--l3p", urn_l3p, "polya: l3'");
  urn->add_option("--steps", urn_steps, "steps");
  urn->add_option("--seed", urn_seed, "seed");
  urn->add_option("--csv", urn_out, "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const ExperimentConfig cfg = resolve_config(sim_ov);
      run_experiment(cfg, sim_serial ? ExecMode::Serial : ExecMode::Parallel);
      if (!sim_dump_traj.empty()) {
        const TriangleSP tri = make_triangle(cfg);
        AntsProcess proc(tri, cfg.alpha, cfg.seeds[0]);
        std::ofstream out(sim_dump_traj);
        for (uint64_t n = 1; n <= cfg.n_steps; ++n) {
          const StepRecord rec = proc.step();
          json line;
          line["n"] = n;
          line["vertices"] = rec.trajectory.vertices;
          out << line.dump() << "\n";
        }
      }
      std::cerr << "artifacts written to " << cfg.output_dir << "\n";
      return 0;
    }

    if (ver->parsed()) {
      const ExperimentConfig cfg = resolve_config(ver_ov);
      const VerificationReport report = verify_theorem(cfg);
      std::cout << "case " << report.predicted.case_id << " predicted Nhat ("
                << report.predicted.nhat[0] << ", " << report.predicted.nhat[1]
                << ", " << report.predicted.nhat[2] << ")\n";
      std::cout << "median Nhat (" << report.median_nhat[0] << ", "
                << report.median_nhat[1] << ", " << report.median_nhat[2]
                << "), tolerance " << report.tolerance << ": "
                << (report.nhat_pass ? "PASS" : "FAIL") << "\n";
      std::cout << "chi-support floor " << report.support_floor << ": "
                << (report.support_pass ? "PASS" : "FAIL") << "\n";
      std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
      return report.pass ? 0 : 1;
    }

    if (th->parsed()) return cmd_theory(th_alpha, th_lengths, th_out, th_grid);

    if (fl->parsed()) {
      if (flow_start.size() == 2) {
        std::vector<int> lengths = flow_ov.lengths;
        TheoryParams tp{};
        if (lengths.size() == 3) {
          tp = TheoryParams{flow_ov.alpha, static_cast<double>(lengths[0]),
                            static_cast<double>(lengths[1]),
                            static_cast<double>(lengths[2])};
        } else if (!flow_ov.config_path.empty()) {
          ExperimentConfig cfg = load_config(flow_ov.config_path);
          if (flow_ov.alpha >= 0.0) cfg.alpha = flow_ov.alpha;
          tp = theory_params(cfg);
        } else {
          throw ConfigError("flow needs --lengths/--alpha or --config");
        }
        const FlowResult flow = integrate_flow(
            Point2{flow_start[0], flow_start[1]}, tp,
            FlowOptions{flow_dt, flow_tmax, flow_tol, 0.25});
        if (!flow_out.empty()) {
          std::ofstream csv(flow_out);
          csv << "t,w1,w3\n";
          for (const auto& [t, y] : flow.trajectory)
            csv << format_double(t) << ',' << format_double(y.w1) << ','
                << format_double(y.w3) << "\n";
        }
        json out;
        out["converged"] = flow.converged;
        out["t_end"] = flow.t_end;
        out["limit"] = {flow.limit.w1, flow.limit.w3};
        std::cout << out.dump(2) << "\n";
        return flow.converged ? 0 : 1;
      }
      const ExperimentConfig cfg = resolve_config(flow_ov);
      const auto overlay = report_flow_overlay(cfg);
      const FlowOverlayRow& last = overlay.back();
      std::cout << "final empirical (" << last.emp_w1 << ", " << last.emp_w3
                << ") vs flow (" << last.flow_w1 << ", " << last.flow_w3
                << ")\n";
      return 0;
    }

    if (orc->parsed()) {
      FlatGraph g;
      if (!or_expr.empty()) {
        g = flatten(parse_sp(or_expr));
      } else if (!or_graph.empty()) {
        std::ifstream in(or_graph);
        if (!in) throw ConfigError("cannot open graph file: " + or_graph);
        std::stringstream buf;
        buf << in.rdbuf();
        g = graph_from_json(buf.str());
      } else {
        throw ConfigError("oracle needs --graph or --expr");
      }
      std::vector<Rat> weights(g.edges.size(), Rat(1));
      if (!or_weights.empty()) {
        weights.clear();
        std::stringstream ss(or_weights);
        std::string tok;
        while (std::getline(ss, tok, ',')) weights.push_back(parse_rat(tok));
        if (weights.size() != g.edges.size())
          throw ConfigError("weight count does not match edge count");
      }
      const int start = or_start >= 0 ? or_start : g.source;
      const int absorb = or_absorb >= 0 ? or_absorb : g.sink;

      json out;
      if (or_mode == "hit") {
        if (or_ta < 0 || or_tb < 0)
          throw ConfigError("hit mode needs --target-a and --target-b");
        const Rat p = exact_hit_before(g, weights, start, or_ta, or_tb);
        out["prob"] = p.get_str();
        out["prob_float"] = p.get_d();
      } else {
        const PathDistribution dist =
            or_mode == "excursion"
                ? excursion_le_distribution(g, weights, start, absorb)
                : exact_le_distribution(g, weights, start, absorb);
        out["paths"] = json::array();
        for (const auto& [path, p] : dist.prob)
          out["paths"].push_back(
              {{"path", path}, {"prob", p.get_str()}, {"prob_float", p.get_d()}});
      }
      if (!or_out.empty()) {
        std::ofstream f(or_out);
        f << out.dump(2) << "\n";
      } else {
        std::cout << out.dump(2) << "\n";
      }
      return 0;
    }

    if (urn->parsed()) {
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!urn_out.empty()) {
        file.open(urn_out);
        os = &file;
      }
      const std::vector<uint64_t> cps = geometric_checkpoints(urn_steps);
      if (urn_mode == "polya") {
        const PolyaResult res = polya_coupled_run(urn_l1, urn_l2p, urn_l3p,
                                                  urn_alpha, urn_steps,
                                                  urn_seed, cps);
        *os << "n,N1,N2\n";
        for (const auto& [n, n1, n2] : res.trajectory)
          *os << n << ',' << n1 << ',' << n2 << "\n";
        return 0;
      }
      std::function<double(double)> G;
      if (urn_g == "square") {
        G = [](double x) { return x * x; };
      } else if (urn_g.rfind("affine:", 0) == 0) {
        double a = 0, b = 0;
        if (std::sscanf(urn_g.c_str(), "affine:%lf,%lf", &a, &b) != 2)
          throw ConfigError("bad --g spec: " + urn_g);
        G = [a, b](double x) { return a + b * x; };
      } else {
        throw ConfigError("bad --g spec: " + urn_g);
      }
      const GUrnResult res = g_urn_run(G, urn_steps, urn_seed, urn_c, cps);
      *os << "n,Xhat\n";
      for (const auto& [n, xhat] : res.trajectory)
        *os << n << ',' << format_double(xhat) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "antnet/rng.hpp"
#include "antnet/triangle.hpp"
#include "antnet/walk.hpp"

namespace antnet {

// A reinforced path is always one of these four shapes.
enum class PathCategory { G1Only, G3ThenG2, G2Only, G3ThenG1 };

struct StepRecord {
  int nest;                // 1 or 2
  uint64_t traj_len;       // walk length in steps
  Trajectory trajectory;   // raw walk (debug dumps)
  SimplePath gamma;        // reinforced path, nest -> food
  PathCategory category;
  std::array<bool, 3> touched;  // gamma meets E_i
};

struct ResidualInfo {
  std::array<double, 3> r{};
  double delta = 0.0;  // max_i |l_i C_i / (N_i + 1) - 1|
  bool defined = false;
};

struct Snapshot {
  uint64_t n = 0;
  std::array<uint64_t, 3> counts{};
  std::array<double, 3> nhat{};
  std::array<double, 3> conductance{};
  ResidualInfo residual;
  std::vector<uint64_t> weights;  // filled only when requested
};

// The two-nest reinforcement process on a triangle-SP graph. Each step walks
// one ant from a Bernoulli(alpha) nest to the food, erases loops backward,
// and adds 1 to every edge of the surviving path.
class AntsProcess {
 public:
  AntsProcess(const TriangleSP& tri, double alpha, uint64_t seed);

  StepRecord step();
  void advance(uint64_t steps);

  Snapshot snapshot(bool with_weights = false) const;
  const TriangleSP& triangle() const { return *tri_; }
  double alpha() const { return alpha_; }
  uint64_t n() const { return n_; }
  const std::array<uint64_t, 3>& counts() const { return counts_; }
  const std::vector<uint64_t>& weights() const { return weights_; }

  // Effective conductance of component i under the current restricted
  // weights, recomputed from the composition tree.
  double conductance(int i) const;
  Rat conductance_exact(int i) const;

 private:
  const TriangleSP* tri_;
  Adjacency adj_;
  std::vector<uint64_t> weights_;
  std::array<uint64_t, 3> counts_{};
  uint64_t n_ = 0;
  double alpha_;
  Rng rng_;
};

// r_i(n) = P_i(C(n)) - p_i of the urn-normalized counters (N_i + 1)/(n + 2).
// The +1 matches the unit initial weights: on a line triangle C_i is exactly
// (N_i + 1)/l_i and r vanishes identically. Undefined until every counter is
// positive.
ResidualInfo residual(const AntsProcess& proc);

// Powers of two up to n_steps, plus n_steps itself.
std::vector<uint64_t> geometric_checkpoints(uint64_t n_steps);

std::vector<Snapshot> run_process(AntsProcess& proc, uint64_t n_steps,
                                  std::span<const uint64_t> checkpoints,
                                  bool with_weights = false);

// Step indices (0-based) at which component i was reinforced; the
// subsequence of reinforced paths restricted to G_i is the single-nest
// process on G_i.
std::vector<size_t> restriction_times(std::span<const StepRecord> records,
                                      int component);

// Single-nest process on one SP graph: nest = source, food = sink.
class SingleNestProcess {
 public:
  SingleNestProcess(const SPExpr& g, uint64_t seed);

  SimplePath step();
  uint64_t n() const { return n_; }
  const std::vector<uint64_t>& weights() const { return weights_; }
  const FlatGraph& graph() const { return graph_; }
  double conductance() const;
  Rat conductance_exact() const;

 private:
  SPExpr expr_;
  FlatGraph graph_;
  Adjacency adj_;
  std::vector<uint64_t> weights_;
  uint64_t n_ = 0;
  Rng rng_;
};

struct SingleNestSnapshot {
  uint64_t n;
  double conductance;
  std::vector<uint64_t> weights;
};

std::vector<SingleNestSnapshot> single_nest_run(const SPExpr& g,
                                                uint64_t n_steps, uint64_t seed,
                                                std::span<const uint64_t> checkpoints);

}  // namespace antnet

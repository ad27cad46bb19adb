#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "antnet/rng.hpp"
#include "antnet/sp_graph.hpp"

namespace antnet {

// Raw vertex/edge record of one walk. vertices has one more entry than
// edges; the final vertex is the absorbing one and appears nowhere earlier.
struct Trajectory {
  std::vector<int> vertices;
  std::vector<int> edges;
};

struct PathStep {
  int edge;
  int from;
  int to;
  bool operator==(const PathStep&) const = default;
};

// Loop-free oriented edge sequence.
struct SimplePath {
  std::vector<PathStep> steps;
  bool operator==(const SimplePath&) const = default;
};

struct Adjacency {
  struct Arc {
    int edge;
    int to;
  };
  std::vector<std::vector<Arc>> at;

  explicit Adjacency(const FlatGraph& g) : at(static_cast<size_t>(g.num_vertices)) {
    for (const EdgeRec& e : g.edges) {
      at[static_cast<size_t>(e.u)].push_back(Arc{e.id, e.v});
      at[static_cast<size_t>(e.v)].push_back(Arc{e.id, e.u});
    }
  }
};

struct WalkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr uint64_t kDefaultStepCap = 1'000'000'000;

// Weighted random walk from start, absorbed at `absorb`. The next edge at u
// is chosen with probability W_e / sum of incident weights; parallel edges
// count individually. Integer weights are sampled by exact cumulative sums,
// so a seeded walk is bit-reproducible.
Trajectory run_walk(const Adjacency& adj, std::span<const uint64_t> weights,
                    int start, int absorb, Rng& rng,
                    uint64_t step_cap = kDefaultStepCap);

// Backward loop-erasure: i_0 is the first hit of the absorbing vertex and
// i_{j+1}+1 is the first hit time of X_{i_j}; the surviving edges, reversed
// into walk order, form a simple path.
SimplePath loop_erase_backward(const Trajectory& traj);

struct FirstEntry {
  int pred = -1;
  int edge = -1;
};

// For every vertex other than X_0 that the walk visited, the vertex/edge by
// which it was first entered.
std::vector<FirstEntry> first_entry_predecessors(const Trajectory& traj);

// Predecessor chain from `absorb` back to `start`, returned in start->absorb
// order. Equals loop_erase_backward on the same trajectory.
SimplePath path_from_first_entry(const std::vector<FirstEntry>& fe, int start,
                                 int absorb);

SimplePath reverse_path(const SimplePath& path);

}  // namespace antnet

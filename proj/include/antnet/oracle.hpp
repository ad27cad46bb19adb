#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "antnet/sp_graph.hpp"

namespace antnet {

// Edge ids of a simple path listed in start-to-absorb order.
using PathEdges = std::vector<int>;

struct PathDistribution {
  std::map<PathEdges, Rat> prob;
  Rat total() const;
};

struct OracleOptions {
  int max_vertices = 8;
  size_t max_states = 500000;  // processed first-entry trees
};

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact law of the backward loop-erasure of a weighted walk from start,
// absorbed at `absorb`. The walk state is augmented with its first-entry
// tree; the loop-erased path is the predecessor chain from the absorbing
// vertex, so the tree is a sufficient statistic and absorption probabilities
// solve a finite linear system per tree (exact rational arithmetic).
PathDistribution exact_le_distribution(const FlatGraph& g,
                                       std::span<const Rat> weights, int start,
                                       int absorb,
                                       const OracleOptions& opts = {});

// Law of the loop-erasure of the walk conditioned to reach `absorb` before
// returning to start (the post-last-visit excursion): the first step is
// unconditioned, later returns to start are forbidden, and the result is
// renormalized by the surviving mass.
PathDistribution excursion_le_distribution(const FlatGraph& g,
                                           std::span<const Rat> weights,
                                           int start, int absorb,
                                           const OracleOptions& opts = {});

// Probability that the walk from start hits targetA before targetB
// (harmonic-function solve with absorbing set {A, B}).
Rat exact_hit_before(const FlatGraph& g, std::span<const Rat> weights,
                     int start, int target_a, int target_b);

// Total-variation distance, 1/2 sum |d1 - d2| over the union of supports.
Rat tv_distance(const PathDistribution& d1, const PathDistribution& d2);

// Compares d1(path) against d2(reversed path).
Rat tv_distance_reversed(const PathDistribution& d1,
                         const PathDistribution& d2);

std::vector<Rat> to_rat_weights(std::span<const uint64_t> weights);

}  // namespace antnet

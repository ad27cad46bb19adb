#include "antnet/walk.hpp"

#include <algorithm>

namespace antnet {

Trajectory run_walk(const Adjacency& adj, std::span<const uint64_t> weights,
                    int start, int absorb, Rng& rng, uint64_t step_cap) {
  if (start == absorb) throw WalkError("walk start equals absorbing vertex");
  Trajectory traj;
  traj.vertices.push_back(start);
  int current = start;
  uint64_t steps = 0;
  while (current != absorb) {
    if (steps++ >= step_cap) throw WalkError("walk step cap exceeded");
    const auto& arcs = adj.at[static_cast<size_t>(current)];
    uint64_t total = 0;
    for (const auto& arc : arcs) total += weights[static_cast<size_t>(arc.edge)];
    if (total == 0) throw WalkError("dead-end vertex reached");
    uint64_t draw = rng.bounded(total);
    for (const auto& arc : arcs) {
      uint64_t w = weights[static_cast<size_t>(arc.edge)];
      if (draw < w) {
        traj.edges.push_back(arc.edge);
        traj.vertices.push_back(arc.to);
        current = arc.to;
        break;
      }
      draw -= w;
    }
  }
  return traj;
}

SimplePath loop_erase_backward(const Trajectory& traj) {
  const auto& x = traj.vertices;
  int max_vertex = *std::max_element(x.begin(), x.end());
  std::vector<size_t> first_seen(static_cast<size_t>(max_vertex) + 1,
                                 x.size());
  for (size_t i = x.size(); i-- > 0;)
    first_seen[static_cast<size_t>(x[i])] = i;

  SimplePath path;
  size_t ij = first_seen[static_cast<size_t>(x.back())];  // i_0: first hit of absorb
  while (x[ij] != x[0]) {
    size_t hit = first_seen[static_cast<size_t>(x[ij])];
    size_t next = hit - 1;  // i_{j+1}
    path.steps.push_back(PathStep{traj.edges[next], x[next], x[ij]});
    ij = next;
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

std::vector<FirstEntry> first_entry_predecessors(const Trajectory& traj) {
  const auto& x = traj.vertices;
  int max_vertex = *std::max_element(x.begin(), x.end());
  std::vector<FirstEntry> fe(static_cast<size_t>(max_vertex) + 1);
  for (size_t i = 1; i < x.size(); ++i) {
    auto& slot = fe[static_cast<size_t>(x[i])];
    if (slot.pred < 0 && x[i] != x[0])
      slot = FirstEntry{x[i - 1], traj.edges[i - 1]};
  }
  return fe;
}

SimplePath path_from_first_entry(const std::vector<FirstEntry>& fe, int start,
                                 int absorb) {
  SimplePath path;
  int current = absorb;
  while (current != start) {
    const FirstEntry& entry = fe[static_cast<size_t>(current)];
    path.steps.push_back(PathStep{entry.edge, entry.pred, current});
    current = entry.pred;
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

SimplePath reverse_path(const SimplePath& path) {
  SimplePath out;
  out.steps.reserve(path.steps.size());
  for (auto it = path.steps.rbegin(); it != path.steps.rend(); ++it)
    out.steps.push_back(PathStep{it->edge, it->to, it->from});
  return out;
}

}  // namespace antnet

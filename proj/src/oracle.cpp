#include "antnet/oracle.hpp"

#include <algorithm>
#include <deque>

#include "antnet/walk.hpp"

namespace antnet {

namespace {

// Exact Gaussian elimination; A is consumed. Throws on a singular system.
std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> a,
                              std::vector<Rat> rhs) {
  const size_t m = rhs.size();
  for (size_t col = 0; col < m; ++col) {
    size_t pivot = col;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m)
      throw OracleError("singular linear system (absorbing vertex unreachable)");
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (size_t row = 0; row < m; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rat factor = a[row][col] / a[col][col];
      for (size_t k = col; k < m; ++k) a[row][k] -= factor * a[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::vector<Rat> x(m);
  for (size_t i = 0; i < m; ++i) x[i] = rhs[i] / a[i][i];
  return x;
}

struct EdgeEndpoints {
  std::vector<std::pair<int, int>> uv;  // indexed by edge id

  explicit EdgeEndpoints(const FlatGraph& g) {
    int max_id = -1;
    for (const EdgeRec& e : g.edges) max_id = std::max(max_id, e.id);
    uv.assign(static_cast<size_t>(max_id) + 1, {-1, -1});
    for (const EdgeRec& e : g.edges) uv[static_cast<size_t>(e.id)] = {e.u, e.v};
  }

  int other(int edge, int v) const {
    const auto& [a, b] = uv[static_cast<size_t>(edge)];
    return v == a ? b : a;
  }
};

// First-entry tree, encoded as the entry edge per vertex (-1 if not yet
// visited; the start vertex stays -1).
using TreeKey = std::vector<int>;

PathEdges path_of_exit(const TreeKey& tree, const EdgeEndpoints& ep, int start,
                       int exit_from, int exit_edge) {
  PathEdges path{exit_edge};
  int current = exit_from;
  while (current != start) {
    const int e = tree[static_cast<size_t>(current)];
    path.push_back(e);
    current = ep.other(e, current);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

PathDistribution le_distribution_impl(const FlatGraph& g,
                                      std::span<const Rat> weights, int start,
                                      int absorb, bool excursion,
                                      const OracleOptions& opts) {
  if (g.num_vertices > opts.max_vertices)
    throw OracleError("graph exceeds the oracle vertex cap");
  if (start == absorb) throw OracleError("start equals absorbing vertex");
  for (const Rat& w : weights)
    if (w < 0) throw OracleError("negative edge weight");
  for (const EdgeRec& e : g.edges)
    if (e.u == e.v) throw OracleError("self-loop edge");

  const size_t nv = static_cast<size_t>(g.num_vertices);
  Adjacency adj(g);
  EdgeEndpoints ep(g);

  // pending[k]: arrival mass per (tree with k visited vertices, vertex)
  std::vector<std::map<TreeKey, std::vector<Rat>>> pending(nv + 1);
  {
    TreeKey root(nv, -1);
    std::vector<Rat> mass(nv, Rat(0));
    mass[static_cast<size_t>(start)] = 1;
    pending[0].emplace(std::move(root), std::move(mass));
  }

  PathDistribution dist;
  Rat fail_total(0);
  size_t processed = 0;

  for (size_t layer = 0; layer <= nv; ++layer) {
    for (auto& [tree, mass] : pending[layer]) {
      if (++processed > opts.max_states)
        throw OracleError("oracle state cap exceeded");

      std::vector<int> members{start};
      for (size_t v = 0; v < nv; ++v)
        if (tree[v] >= 0) members.push_back(static_cast<int>(v));
      std::sort(members.begin(), members.end());
      std::vector<int> index(nv, -1);
      for (size_t i = 0; i < members.size(); ++i)
        index[static_cast<size_t>(members[i])] = static_cast<int>(i);

      const size_t m = members.size();
      std::vector<std::vector<Rat>> imq(m, std::vector<Rat>(m, Rat(0)));
      for (size_t i = 0; i < m; ++i) imq[i][i] = 1;
      std::vector<Rat> entry(m, Rat(0));
      bool any_entry = false;
      for (size_t i = 0; i < m; ++i) {
        entry[i] = mass[static_cast<size_t>(members[i])];
        if (entry[i] != 0) any_entry = true;
      }
      if (!any_entry) continue;

      struct Exit {
        size_t from;
        int edge;
        int to;
        Rat p;
      };
      std::vector<Exit> exits;
      std::vector<std::pair<size_t, Rat>> fails;

      for (size_t i = 0; i < m; ++i) {
        const int x = members[i];
        Rat total(0);
        for (const auto& arc : adj.at[static_cast<size_t>(x)])
          total += weights[static_cast<size_t>(arc.edge)];
        if (total == 0)
          throw OracleError("dead-end vertex in the reachable core");
        for (const auto& arc : adj.at[static_cast<size_t>(x)]) {
          const Rat& w = weights[static_cast<size_t>(arc.edge)];
          if (w == 0) continue;
          const Rat p = w / total;
          if (arc.to == absorb) {
            exits.push_back(Exit{i, arc.edge, arc.to, p});
          } else if (excursion && arc.to == start) {
            fails.emplace_back(i, p);
          } else if (index[static_cast<size_t>(arc.to)] >= 0) {
            imq[i][static_cast<size_t>(index[static_cast<size_t>(arc.to)])] -= p;
          } else {
            exits.push_back(Exit{i, arc.edge, arc.to, p});
          }
        }
      }

      // occupation measure: mu (I - Q) = entry, solved via the transpose
      std::vector<std::vector<Rat>> imq_t(m, std::vector<Rat>(m));
      for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) imq_t[i][j] = imq[j][i];
      const std::vector<Rat> mu = solve_linear(std::move(imq_t), entry);

      for (const auto& [i, p] : fails) fail_total += mu[i] * p;
      for (const Exit& exit : exits) {
        const Rat flow = mu[exit.from] * exit.p;
        if (flow == 0) continue;
        if (exit.to == absorb) {
          dist.prob[path_of_exit(tree, ep, start, members[exit.from],
                                 exit.edge)] += flow;
        } else {
          TreeKey next = tree;
          next[static_cast<size_t>(exit.to)] = exit.edge;
          auto [it, inserted] =
              pending[layer + 1].try_emplace(std::move(next),
                                             std::vector<Rat>());
          if (inserted) it->second.assign(nv, Rat(0));
          it->second[static_cast<size_t>(exit.to)] += flow;
        }
      }
    }
    pending[layer].clear();
  }

  // exact arithmetic: the arrival mass must be fully accounted for
  if (dist.total() + fail_total != 1)
    throw OracleError("internal error: absorption mass does not sum to one");
  if (excursion) {
    const Rat success = dist.total();
    if (success == 0)
      throw OracleError("conditioning event has probability zero");
    for (auto& [path, p] : dist.prob) p /= success;
  }
  return dist;
}

}  // namespace

Rat PathDistribution::total() const {
  Rat sum(0);
  for (const auto& [path, p] : prob) sum += p;
  return sum;
}

PathDistribution exact_le_distribution(const FlatGraph& g,
                                       std::span<const Rat> weights, int start,
                                       int absorb, const OracleOptions& opts) {
  return le_distribution_impl(g, weights, start, absorb, false, opts);
}

PathDistribution excursion_le_distribution(const FlatGraph& g,
                                           std::span<const Rat> weights,
                                           int start, int absorb,
                                           const OracleOptions& opts) {
  return le_distribution_impl(g, weights, start, absorb, true, opts);
}

Rat exact_hit_before(const FlatGraph& g, std::span<const Rat> weights,
                     int start, int target_a, int target_b) {
  if (start == target_a) return Rat(1);
  if (start == target_b) return Rat(0);

  Adjacency adj(g);
  const size_t nv = static_cast<size_t>(g.num_vertices);

  // positive-weight component of start
  std::vector<bool> core(nv, false);
  std::deque<int> queue{start};
  core[static_cast<size_t>(start)] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& arc : adj.at[static_cast<size_t>(v)]) {
      if (weights[static_cast<size_t>(arc.edge)] == 0) continue;
      if (!core[static_cast<size_t>(arc.to)]) {
        core[static_cast<size_t>(arc.to)] = true;
        queue.push_back(arc.to);
      }
    }
  }
  const bool a_in = core[static_cast<size_t>(target_a)];
  const bool b_in = core[static_cast<size_t>(target_b)];
  if (!a_in && !b_in)
    throw OracleError("start cannot reach either target");
  if (a_in != b_in) return a_in ? Rat(1) : Rat(0);

  std::vector<int> unknowns;
  std::vector<int> index(nv, -1);
  for (size_t v = 0; v < nv; ++v) {
    if (!core[v]) continue;
    if (static_cast<int>(v) == target_a || static_cast<int>(v) == target_b)
      continue;
    index[v] = static_cast<int>(unknowns.size());
    unknowns.push_back(static_cast<int>(v));
  }

  const size_t m = unknowns.size();
  std::vector<std::vector<Rat>> a(m, std::vector<Rat>(m, Rat(0)));
  std::vector<Rat> rhs(m, Rat(0));
  for (size_t i = 0; i < m; ++i) {
    a[i][i] = 1;
    const int v = unknowns[i];
    Rat total(0);
    for (const auto& arc : adj.at[static_cast<size_t>(v)])
      total += weights[static_cast<size_t>(arc.edge)];
    for (const auto& arc : adj.at[static_cast<size_t>(v)]) {
      const Rat& w = weights[static_cast<size_t>(arc.edge)];
      if (w == 0) continue;
      const Rat p = w / total;
      if (arc.to == target_a)
        rhs[i] += p;
      else if (arc.to != target_b)
        a[i][static_cast<size_t>(index[static_cast<size_t>(arc.to)])] -= p;
    }
  }
  const std::vector<Rat> h = solve_linear(std::move(a), std::move(rhs));
  return h[static_cast<size_t>(index[static_cast<size_t>(start)])];
}

Rat tv_distance(const PathDistribution& d1, const PathDistribution& d2) {
  Rat sum(0);
  for (const auto& [path, p] : d1.prob) {
    auto it = d2.prob.find(path);
    const Rat q = it == d2.prob.end() ? Rat(0) : it->second;
    sum += abs(p - q);
  }
  for (const auto& [path, q] : d2.prob)
    if (d1.prob.find(path) == d1.prob.end()) sum += q;
  return sum / 2;
}

Rat tv_distance_reversed(const PathDistribution& d1,
                         const PathDistribution& d2) {
  PathDistribution reversed;
  for (const auto& [path, q] : d2.prob) {
    PathEdges r(path.rbegin(), path.rend());
    reversed.prob[std::move(r)] = q;
  }
  return tv_distance(d1, reversed);
}

std::vector<Rat> to_rat_weights(std::span<const uint64_t> weights) {
  std::vector<Rat> out(weights.size());
  for (size_t i = 0; i < weights.size(); ++i)
    out[i] = Rat(static_cast<unsigned long>(weights[i]));
  return out;
}

}  // namespace antnet

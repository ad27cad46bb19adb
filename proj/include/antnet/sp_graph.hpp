#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace antnet {

// Exact rational scalar. Process weights are integers, so conductances and
// absorption probabilities can be carried without rounding.
using Rat = mpq_class;

// Composition tree of a series-parallel graph. Leaves are edges, labeled
// 0,1,2,... in left-to-right order.
struct SPExpr {
  enum Kind { Leaf, Series, Parallel };
  Kind kind = Leaf;
  int leaf = -1;
  std::vector<SPExpr> sub;  // two children unless Leaf

  static SPExpr make_leaf(int label) {
    SPExpr e;
    e.kind = Leaf;
    e.leaf = label;
    return e;
  }
  static SPExpr make(Kind k, SPExpr left, SPExpr right) {
    SPExpr e;
    e.kind = k;
    e.sub.push_back(std::move(left));
    e.sub.push_back(std::move(right));
    return e;
  }
};

struct SpParseError : std::runtime_error {
  size_t offset;
  SpParseError(size_t off, const std::string& msg)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"),
        offset(off) {}
};

// Grammar: expr := "e" | "series(" expr "," expr ")" | "par(" expr "," expr ")"
// Whitespace is ignored. Leaves are labeled left to right.
SPExpr parse_sp(std::string_view text);

std::string to_string(const SPExpr& expr);
int num_leaves(const SPExpr& expr);

struct EdgeRec {
  int id;
  int u;
  int v;
};

// Concrete realization of an SP expression. Edge ids coincide with leaf
// labels. Vertex ids are deterministic for a given expression.
struct FlatGraph {
  int num_vertices = 0;
  std::vector<EdgeRec> edges;
  int source = 0;
  int sink = 0;
};

// Realizes `expr` between vertices u and v, allocating interior vertices
// from next_vertex and shifting edge ids by edge_offset.
void realize_into(const SPExpr& expr, int u, int v, int& next_vertex,
                  int edge_offset, std::vector<EdgeRec>& out);

FlatGraph flatten(const SPExpr& expr);

struct Heights {
  int h_min;
  int h_max;
};

// Shortest / longest self-avoiding source-sink path lengths, by composition
// recursion (series adds, parallel takes min/max). Simple paths in an SP
// graph cannot switch parallel branches, so the recursion is exact.
Heights heights(const SPExpr& expr);

// Unweighted BFS distances from `from` (-1 where unreachable).
std::vector<int> bfs_distances(const FlatGraph& g, int from);

// Edges lying on at least one shortest source-sink path.
std::vector<int> shortest_path_edges(const FlatGraph& g);

// Series: harmonic, with the convention that a zero conductance in series
// yields zero. Parallel: additive.
template <typename T>
T effective_conductance(const SPExpr& expr, std::span<const T> weights) {
  if (expr.kind == SPExpr::Leaf) return weights[static_cast<size_t>(expr.leaf)];
  T a = effective_conductance(expr.sub[0], weights);
  T b = effective_conductance(expr.sub[1], weights);
  if (expr.kind == SPExpr::Parallel) return a + b;
  if (a == 0 || b == 0) return T(0);
  return a * b / (a + b);
}

Rat effective_conductance_exact(const SPExpr& expr,
                                std::span<const uint64_t> weights);
double effective_conductance_dbl(const SPExpr& expr,
                                 std::span<const uint64_t> weights);

// {"vertices":[...],"edges":[{"id":..,"u":..,"v":..}],"source":..,"sink":..}
std::string graph_to_json(const FlatGraph& g);
FlatGraph graph_from_json(const std::string& text);

}  // namespace antnet

#pragma once

#include <array>

#include "antnet/sp_graph.hpp"

namespace antnet {

// Triangle on {N1, N2, F} with each side replaced by an SP graph:
// component 0 runs N1->F, component 1 runs N2->F, component 2 runs N1->N2.
// Vertices: N1=0, N2=1, F=2, then interior vertices of G1, G2, G3 in order.
// Edge ids: G1 first, then G2, then G3 (leaf order within each component).
struct TriangleSP {
  std::array<SPExpr, 3> g;
  FlatGraph graph;
  int n1 = 0;
  int n2 = 1;
  int food = 2;
  std::array<int, 4> edge_bound{};  // edges of component i: [bound[i], bound[i+1])
  std::array<int, 3> h_min{};
  std::array<int, 3> h_max{};

  int component_of(int edge) const {
    for (int i = 0; i < 3; ++i)
      if (edge < edge_bound[static_cast<size_t>(i + 1)]) return i;
    return -1;
  }
  int num_edges() const { return edge_bound[3]; }
};

TriangleSP assemble(SPExpr g1, SPExpr g2, SPExpr g3);

// Path of `ell` edges in series.
SPExpr line_expr(int ell);

// The triangle whose component i is a simple path of ell_i edges.
TriangleSP line_triangle(int l1, int l2, int l3);

// Global edge ids of component i's shortest source-sink paths.
std::vector<int> component_shortest_path_edges(const TriangleSP& tri, int i);

}  // namespace antnet

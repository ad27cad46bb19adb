#include "antnet/triangle.hpp"

#include <algorithm>
#include <stdexcept>

namespace antnet {

TriangleSP assemble(SPExpr g1, SPExpr g2, SPExpr g3) {
  TriangleSP tri;
  tri.g = {std::move(g1), std::move(g2), std::move(g3)};
  for (int i = 0; i < 3; ++i) {
    Heights h = heights(tri.g[static_cast<size_t>(i)]);
    if (h.h_min < 1) throw std::invalid_argument("triangle component has h_min < 1");
    tri.h_min[static_cast<size_t>(i)] = h.h_min;
    tri.h_max[static_cast<size_t>(i)] = h.h_max;
  }

  int next_vertex = 3;
  tri.edge_bound[0] = 0;
  const std::array<std::pair<int, int>, 3> endpoints{
      std::pair<int, int>{tri.n1, tri.food},
      std::pair<int, int>{tri.n2, tri.food},
      std::pair<int, int>{tri.n1, tri.n2}};
  for (int i = 0; i < 3; ++i) {
    realize_into(tri.g[static_cast<size_t>(i)], endpoints[static_cast<size_t>(i)].first,
                 endpoints[static_cast<size_t>(i)].second, next_vertex,
                 tri.edge_bound[static_cast<size_t>(i)], tri.graph.edges);
    tri.edge_bound[static_cast<size_t>(i) + 1] =
        tri.edge_bound[static_cast<size_t>(i)] + num_leaves(tri.g[static_cast<size_t>(i)]);
  }
  tri.graph.num_vertices = next_vertex;
  tri.graph.source = tri.n1;
  tri.graph.sink = tri.food;
  std::sort(tri.graph.edges.begin(), tri.graph.edges.end(),
            [](const EdgeRec& a, const EdgeRec& b) { return a.id < b.id; });
  return tri;
}

SPExpr line_expr(int ell) {
  if (ell < 1) throw std::invalid_argument("line length must be >= 1");
  SPExpr e = SPExpr::make_leaf(0);
  for (int i = 1; i < ell; ++i)
    e = SPExpr::make(SPExpr::Series, std::move(e), SPExpr::make_leaf(i));
  return e;
}

TriangleSP line_triangle(int l1, int l2, int l3) {
  return assemble(line_expr(l1), line_expr(l2), line_expr(l3));
}

std::vector<int> component_shortest_path_edges(const TriangleSP& tri, int i) {
  FlatGraph g = flatten(tri.g[static_cast<size_t>(i)]);
  std::vector<int> local = shortest_path_edges(g);
  for (int& id : local) id += tri.edge_bound[static_cast<size_t>(i)];
  return local;
}

}  // namespace antnet

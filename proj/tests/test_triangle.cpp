#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <functional>
#include <set>

#include "antnet/triangle.hpp"

using namespace antnet;

namespace {

// reachability in the assembled graph, with some edges/vertices removed
bool reaches(const TriangleSP& tri, int from, int to,
             const std::set<int>& banned_edges, int banned_vertex) {
  std::vector<std::vector<std::pair<int, int>>> adj(
      static_cast<size_t>(tri.graph.num_vertices));
  for (const EdgeRec& e : tri.graph.edges) {
    adj[static_cast<size_t>(e.u)].emplace_back(e.id, e.v);
    adj[static_cast<size_t>(e.v)].emplace_back(e.id, e.u);
  }
  std::vector<bool> seen(static_cast<size_t>(tri.graph.num_vertices), false);
  std::deque<int> queue{from};
  seen[static_cast<size_t>(from)] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == to) return true;
    if (v == banned_vertex) continue;
    for (auto [id, w] : adj[static_cast<size_t>(v)]) {
      if (banned_edges.count(id)) continue;
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = true;
        queue.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("assemble examples") {
  TriangleSP plain = assemble(parse_sp("e"), parse_sp("e"), parse_sp("e"));
  CHECK(plain.graph.num_vertices == 3);
  CHECK(plain.num_edges() == 3);

  TriangleSP t112 = assemble(parse_sp("e"), parse_sp("e"), parse_sp("series(e,e)"));
  CHECK(t112.graph.num_vertices == 4);
  CHECK(t112.num_edges() == 4);

  TriangleSP lines = line_triangle(2, 4, 3);
  CHECK(lines.graph.num_vertices == 9);
  CHECK(lines.num_edges() == 9);
  CHECK(lines.h_min == std::array<int, 3>{2, 4, 3});
  CHECK(lines.h_max == std::array<int, 3>{2, 4, 3});
}

TEST_CASE("edge partition and component lookup") {
  TriangleSP tri = assemble(parse_sp("par(e,e)"), parse_sp("series(e,e)"),
                            parse_sp("e"));
  CHECK(tri.edge_bound == std::array<int, 4>{0, 2, 4, 5});
  CHECK(tri.component_of(0) == 0);
  CHECK(tri.component_of(1) == 0);
  CHECK(tri.component_of(2) == 1);
  CHECK(tri.component_of(3) == 1);
  CHECK(tri.component_of(4) == 2);
}

TEST_CASE("line_triangle rejects bad lengths") {
  CHECK_THROWS(line_triangle(0, 1, 1));
  CHECK_THROWS(line_triangle(1, -2, 1));
}

TEST_CASE("removing E3 disconnects the nests except through food") {
  for (const auto& [g1, g2, g3] :
       {std::array<const char*, 3>{"e", "e", "series(e,e)"},
        std::array<const char*, 3>{"par(e,e)", "series(e,e)", "par(e,series(e,e))"},
        std::array<const char*, 3>{"series(e,par(e,e))", "e", "e"}}) {
    TriangleSP tri = assemble(parse_sp(g1), parse_sp(g2), parse_sp(g3));
    std::set<int> e3;
    for (int e = tri.edge_bound[2]; e < tri.edge_bound[3]; ++e) e3.insert(e);
    CHECK(!reaches(tri, tri.n1, tri.n2, e3, tri.food));
    CHECK(reaches(tri, tri.n1, tri.n2, e3, -1));
  }
}

TEST_CASE("simple nest-food paths split by component") {
  TriangleSP tri = assemble(parse_sp("par(e,e)"), parse_sp("series(e,e)"),
                            parse_sp("par(e,series(e,e))"));
  std::vector<std::vector<std::pair<int, int>>> adj(
      static_cast<size_t>(tri.graph.num_vertices));
  for (const EdgeRec& e : tri.graph.edges) {
    adj[static_cast<size_t>(e.u)].emplace_back(e.id, e.v);
    adj[static_cast<size_t>(e.v)].emplace_back(e.id, e.u);
  }

  // enumerate all simple paths from n1 to food and classify their components
  std::vector<std::set<int>> paths;
  std::vector<bool> visited(static_cast<size_t>(tri.graph.num_vertices), false);
  std::set<int> current;
  std::function<void(int)> dfs = [&](int v) {
    if (v == tri.food) {
      paths.push_back(current);
      return;
    }
    visited[static_cast<size_t>(v)] = true;
    for (auto [id, w] : adj[static_cast<size_t>(v)]) {
      if (visited[static_cast<size_t>(w)]) continue;
      current.insert(id);
      dfs(w);
      current.erase(id);
    }
    visited[static_cast<size_t>(v)] = false;
  };
  dfs(tri.n1);

  CHECK(!paths.empty());
  for (const auto& path : paths) {
    std::set<int> comps;
    for (int e : path) comps.insert(tri.component_of(e));
    const bool g1_only = comps == std::set<int>{0};
    const bool g3_then_g2 = comps == std::set<int>{1, 2};
    CHECK((g1_only || g3_then_g2));
  }
}

TEST_CASE("component shortest path edges use global ids") {
  TriangleSP tri = assemble(parse_sp("e"), parse_sp("par(e,series(e,e))"),
                            parse_sp("e"));
  CHECK(component_shortest_path_edges(tri, 0) == std::vector<int>{0});
  CHECK(component_shortest_path_edges(tri, 1) == std::vector<int>{1});
  CHECK(component_shortest_path_edges(tri, 2) == std::vector<int>{4});
}

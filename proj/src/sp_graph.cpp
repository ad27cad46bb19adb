#include "antnet/sp_graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include <nlohmann/json.hpp>

namespace antnet {

namespace {

struct Parser {
  std::string_view text;
  size_t pos = 0;
  int next_label = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c))
      throw SpParseError(pos, std::string("expected '") + c + "'");
  }

  bool lookahead_word(std::string_view w) {
    skip_ws();
    return text.compare(pos, w.size(), w) == 0;
  }

  SPExpr composite(SPExpr::Kind kind) {
    expect('(');
    SPExpr left = expr();
    expect(',');
    SPExpr right = expr();
    expect(')');
    return SPExpr::make(kind, std::move(left), std::move(right));
  }

  SPExpr expr() {
    skip_ws();
    if (pos >= text.size()) throw SpParseError(pos, "unexpected end of input");
    if (lookahead_word("series")) {
      pos += 6;
      return composite(SPExpr::Series);
    }
    if (lookahead_word("par")) {
      pos += 3;
      return composite(SPExpr::Parallel);
    }
    if (text[pos] == 'e') {
      ++pos;
      return SPExpr::make_leaf(next_label++);
    }
    throw SpParseError(pos, "expected 'e', 'series(' or 'par('");
  }
};

}  // namespace

SPExpr parse_sp(std::string_view text) {
  Parser p{text};
  p.skip_ws();
  if (p.pos >= text.size()) throw SpParseError(0, "empty input");
  SPExpr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw SpParseError(p.pos, "trailing characters after expression");
  return e;
}

std::string to_string(const SPExpr& expr) {
  switch (expr.kind) {
    case SPExpr::Leaf:
      return "e";
    case SPExpr::Series:
      return "series(" + to_string(expr.sub[0]) + "," + to_string(expr.sub[1]) + ")";
    case SPExpr::Parallel:
      return "par(" + to_string(expr.sub[0]) + "," + to_string(expr.sub[1]) + ")";
  }
  return {};
}

int num_leaves(const SPExpr& expr) {
  if (expr.kind == SPExpr::Leaf) return 1;
  return num_leaves(expr.sub[0]) + num_leaves(expr.sub[1]);
}

void realize_into(const SPExpr& expr, int u, int v, int& next_vertex,
                  int edge_offset, std::vector<EdgeRec>& out) {
  switch (expr.kind) {
    case SPExpr::Leaf:
      out.push_back(EdgeRec{expr.leaf + edge_offset, u, v});
      return;
    case SPExpr::Series: {
      int mid = next_vertex++;
      realize_into(expr.sub[0], u, mid, next_vertex, edge_offset, out);
      realize_into(expr.sub[1], mid, v, next_vertex, edge_offset, out);
      return;
    }
    case SPExpr::Parallel:
      realize_into(expr.sub[0], u, v, next_vertex, edge_offset, out);
      realize_into(expr.sub[1], u, v, next_vertex, edge_offset, out);
      return;
  }
}

FlatGraph flatten(const SPExpr& expr) {
  FlatGraph g;
  g.source = 0;
  g.sink = 1;
  int next_vertex = 2;
  realize_into(expr, g.source, g.sink, next_vertex, 0, g.edges);
  g.num_vertices = next_vertex;
  std::sort(g.edges.begin(), g.edges.end(),
            [](const EdgeRec& a, const EdgeRec& b) { return a.id < b.id; });
  return g;
}

Heights heights(const SPExpr& expr) {
  switch (expr.kind) {
    case SPExpr::Leaf:
      return {1, 1};
    case SPExpr::Series: {
      Heights a = heights(expr.sub[0]);
      Heights b = heights(expr.sub[1]);
      return {a.h_min + b.h_min, a.h_max + b.h_max};
    }
    case SPExpr::Parallel: {
      Heights a = heights(expr.sub[0]);
      Heights b = heights(expr.sub[1]);
      return {std::min(a.h_min, b.h_min), std::max(a.h_max, b.h_max)};
    }
  }
  return {0, 0};
}

std::vector<int> bfs_distances(const FlatGraph& g, int from) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.num_vertices));
  for (const EdgeRec& e : g.edges) {
    adj[static_cast<size_t>(e.u)].push_back(e.v);
    adj[static_cast<size_t>(e.v)].push_back(e.u);
  }
  std::vector<int> dist(static_cast<size_t>(g.num_vertices), -1);
  std::deque<int> queue{from};
  dist[static_cast<size_t>(from)] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : adj[static_cast<size_t>(v)]) {
      if (dist[static_cast<size_t>(w)] < 0) {
        dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<int> shortest_path_edges(const FlatGraph& g) {
  std::vector<int> ds = bfs_distances(g, g.source);
  std::vector<int> dt = bfs_distances(g, g.sink);
  int h_min = ds[static_cast<size_t>(g.sink)];
  std::vector<int> result;
  for (const EdgeRec& e : g.edges) {
    int du = ds[static_cast<size_t>(e.u)];
    int dv = ds[static_cast<size_t>(e.v)];
    int tu = dt[static_cast<size_t>(e.u)];
    int tv = dt[static_cast<size_t>(e.v)];
    if (du < 0 || dv < 0) continue;
    if (du + 1 + tv == h_min || dv + 1 + tu == h_min) result.push_back(e.id);
  }
  return result;
}

Rat effective_conductance_exact(const SPExpr& expr,
                                std::span<const uint64_t> weights) {
  std::vector<Rat> w(weights.size());
  for (size_t i = 0; i < weights.size(); ++i)
    w[i] = Rat(static_cast<unsigned long>(weights[i]));
  return effective_conductance<Rat>(expr, w);
}

double effective_conductance_dbl(const SPExpr& expr,
                                 std::span<const uint64_t> weights) {
  std::vector<double> w(weights.begin(), weights.end());
  return effective_conductance<double>(expr, w);
}

std::string graph_to_json(const FlatGraph& g) {
  nlohmann::json j;
  std::vector<int> vertices(static_cast<size_t>(g.num_vertices));
  for (int i = 0; i < g.num_vertices; ++i) vertices[static_cast<size_t>(i)] = i;
  j["vertices"] = vertices;
  j["edges"] = nlohmann::json::array();
  for (const EdgeRec& e : g.edges)
    j["edges"].push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}});
  j["source"] = g.source;
  j["sink"] = g.sink;
  return j.dump();
}

FlatGraph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FlatGraph g;
  g.num_vertices = static_cast<int>(j.at("vertices").size());
  for (const auto& e : j.at("edges"))
    g.edges.push_back(EdgeRec{e.at("id").get<int>(), e.at("u").get<int>(),
                              e.at("v").get<int>()});
  g.source = j.at("source").get<int>();
  g.sink = j.at("sink").get<int>();
  std::sort(g.edges.begin(), g.edges.end(),
            [](const EdgeRec& a, const EdgeRec& b) { return a.id < b.id; });
  return g;
}

}  // namespace antnet

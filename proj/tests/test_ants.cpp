#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "antnet/ants.hpp"
#include "antnet/oracle.hpp"
#include "antnet/theory.hpp"
#include "test_util.hpp"

using namespace antnet;

TEST_CASE("init state") {
  TriangleSP tri = line_triangle(1, 1, 1);
  AntsProcess proc(tri, 0.5, 1);
  CHECK(proc.n() == 0);
  CHECK(proc.counts() == std::array<uint64_t, 3>{0, 0, 0});
  for (uint64_t w : proc.weights()) CHECK(w == 1);
  CHECK_THROWS(AntsProcess(tri, 1.5, 1));
  CHECK_THROWS(AntsProcess(tri, -0.1, 1));
}

TEST_CASE("alpha 0 and 1 pin the nest") {
  TriangleSP tri = line_triangle(1, 1, 1);
  AntsProcess zero(tri, 0.0, 3);
  AntsProcess one(tri, 1.0, 3);
  for (int i = 0; i < 100; ++i) {
    CHECK(zero.step().nest == 2);
    CHECK(one.step().nest == 1);
  }
}

TEST_CASE("step categories, counter increments and N1+N2=n") {
  TriangleSP tri = assemble(parse_sp("par(e,e)"), parse_sp("series(e,e)"),
                            parse_sp("par(e,series(e,e))"));
  AntsProcess proc(tri, 0.4, 17);
  std::array<uint64_t, 3> prev{0, 0, 0};
  for (int i = 0; i < 5000; ++i) {
    StepRecord rec = proc.step();
    const auto& counts = proc.counts();
    std::array<uint64_t, 3> delta{};
    for (size_t k = 0; k < 3; ++k) {
      delta[k] = counts[k] - prev[k];
      CHECK(delta[k] <= 1);
    }
    switch (rec.category) {
      case PathCategory::G1Only:
        CHECK(rec.nest == 1);
        CHECK(delta == std::array<uint64_t, 3>{1, 0, 0});
        break;
      case PathCategory::G3ThenG2:
        CHECK(rec.nest == 1);
        CHECK(delta == std::array<uint64_t, 3>{0, 1, 1});
        break;
      case PathCategory::G2Only:
        CHECK(rec.nest == 2);
        CHECK(delta == std::array<uint64_t, 3>{0, 1, 0});
        break;
      case PathCategory::G3ThenG1:
        CHECK(rec.nest == 2);
        CHECK(delta == std::array<uint64_t, 3>{1, 0, 1});
        break;
    }
    CHECK(counts[0] + counts[1] == proc.n());
    // reinforced path is simple
    std::set<int> seen{rec.gamma.steps.front().from};
    for (const PathStep& s : rec.gamma.steps) {
      CHECK(!seen.count(s.to));
      seen.insert(s.to);
    }
    prev = counts;
  }
}

TEST_CASE("weights count reinforcements exactly") {
  TriangleSP tri = line_triangle(2, 3, 1);
  AntsProcess proc(tri, 0.5, 23);
  std::array<uint64_t, 3> reinforcements{0, 0, 0};
  for (int i = 0; i < 2000; ++i) {
    StepRecord rec = proc.step();
    for (size_t k = 0; k < 3; ++k)
      if (rec.touched[k]) ++reinforcements[k];
  }
  // on a line component every edge carries weight N_i + 1
  for (int e = 0; e < tri.num_edges(); ++e) {
    const int comp = tri.component_of(e);
    CHECK(proc.weights()[static_cast<size_t>(e)] ==
          reinforcements[static_cast<size_t>(comp)] + 1);
  }
  CHECK(reinforcements == proc.counts());
}

TEST_CASE("single-nest runs: exact small cases") {
  // single edge: W(n) = n+1
  auto snaps = single_nest_run(parse_sp("e"), 50, 7, std::vector<uint64_t>{});
  CHECK(snaps.back().weights[0] == 51);

  // line of ell edges: C(n) = (n+1)/ell exactly
  SingleNestProcess line(parse_sp("series(e,series(e,e))"), 11);
  for (int i = 0; i < 200; ++i) line.step();
  CHECK(line.conductance_exact() * 3 == 201);

  // par(e,e): one edge reinforced per step
  SingleNestProcess par(parse_sp("par(e,e)"), 13);
  for (int i = 0; i < 300; ++i) par.step();
  CHECK(par.weights()[0] + par.weights()[1] == 302);
}

TEST_CASE("residual vanishes identically on line triangles") {
  TriangleSP tri = line_triangle(2, 4, 3);
  AntsProcess proc(tri, 0.3, 41);
  auto snaps = run_process(proc, 20000, geometric_checkpoints(20000));
  bool saw_defined = false;
  for (const Snapshot& snap : snaps) {
    if (!snap.residual.defined) continue;
    saw_defined = true;
    for (double r : snap.residual.r) CHECK(std::fabs(r) < 1e-12);
    CHECK(snap.residual.delta < 1e-12);
  }
  CHECK(saw_defined);
}

TEST_CASE("residual is undefined until all counters are positive") {
  TriangleSP tri = line_triangle(1, 1, 1);
  AntsProcess proc(tri, 0.5, 2);
  CHECK(!residual(proc).defined);
  while (proc.counts()[0] == 0 || proc.counts()[1] == 0 || proc.counts()[2] == 0)
    proc.step();
  CHECK(residual(proc).defined);
}

TEST_CASE("residual obeys the measured-imbalance bound") {
  TriangleSP tri = assemble(parse_sp("par(e,series(e,e))"), parse_sp("series(e,e)"),
                            parse_sp("par(e,e)"));
  AntsProcess proc(tri, 0.4, 53);
  proc.advance(50);
  for (int i = 0; i < 400; ++i) {
    proc.step();
    ResidualInfo info = residual(proc);
    if (!info.defined || info.delta >= 1.0) continue;
    const double bound = (1 + info.delta) / (1 - info.delta) - 1;
    for (double r : info.r) CHECK(std::fabs(r) <= bound + 1e-12);
  }
}

TEST_CASE("restriction times recover the per-component subsequence") {
  TriangleSP tri = line_triangle(1, 2, 2);
  AntsProcess proc(tri, 0.5, 71);
  std::vector<StepRecord> records;
  std::vector<std::array<uint64_t, 3>> counts_after;
  for (int i = 0; i < 1000; ++i) {
    records.push_back(proc.step());
    counts_after.push_back(proc.counts());
  }
  for (int comp = 0; comp < 3; ++comp) {
    auto taus = restriction_times(records, comp);
    CHECK(taus.size() == proc.counts()[static_cast<size_t>(comp)]);
    // tau-times are exactly the steps where N_comp incremented
    size_t k = 0;
    uint64_t prev = 0;
    for (size_t i = 0; i < records.size(); ++i) {
      const uint64_t now = counts_after[i][static_cast<size_t>(comp)];
      if (now > prev) {
        REQUIRE(k < taus.size());
        CHECK(taus[k] == i);
        ++k;
      }
      prev = now;
    }
    // each tau-time adds one simple path within the component
    uint64_t expect_total = 0;
    for (size_t idx : taus) {
      uint64_t len = 0;
      for (const PathStep& s : records[idx].gamma.steps)
        if (tri.component_of(s.edge) == comp) ++len;
      expect_total += len;
    }
    uint64_t total = 0;
    for (int e = tri.edge_bound[static_cast<size_t>(comp)];
         e < tri.edge_bound[static_cast<size_t>(comp) + 1]; ++e)
      total += proc.weights()[static_cast<size_t>(e)] - 1;
    CHECK(total == expect_total);
  }
}

TEST_CASE("first reinforced G3 path matches the single-nest first-step law") {
  // tiny triangle; the exact first-step law on G3 comes from the oracle
  const char* g3_text = "par(e,series(e,e))";
  TriangleSP tri = assemble(parse_sp("e"), parse_sp("e"), parse_sp(g3_text));

  FlatGraph g3 = flatten(parse_sp(g3_text));
  std::vector<Rat> unit(g3.edges.size(), Rat(1));
  PathDistribution exact = exact_le_distribution(g3, unit, g3.source, g3.sink);

  std::map<std::vector<int>, double> expected;  // sorted local edge ids
  for (const auto& [path, p] : exact.prob) {
    std::vector<int> key = path;
    std::sort(key.begin(), key.end());
    expected[key] += p.get_d();
  }

  const int m = 100000;
  std::map<std::vector<int>, int> observed;
  for (int rep = 0; rep < m; ++rep) {
    AntsProcess proc(tri, 0.5, 1000 + static_cast<uint64_t>(rep));
    for (;;) {
      StepRecord rec = proc.step();
      if (!rec.touched[2]) continue;
      std::vector<int> key;
      for (const PathStep& s : rec.gamma.steps)
        if (tri.component_of(s.edge) == 2)
          key.push_back(s.edge - tri.edge_bound[2]);
      std::sort(key.begin(), key.end());
      observed[key]++;
      break;
    }
  }

  for (const auto& [key, p] : expected) {
    const double freq = static_cast<double>(observed[key]) / m;
    const double se = std::sqrt(p * (1 - p) / m);
    CHECK(std::fabs(freq - p) < 3 * se);
  }
}

TEST_CASE("one-step touch frequencies match the conductance closed form") {
  // P(next reinforced path touches G_i | weights) should equal P_i(C) for
  // arbitrary positive weights; estimated by fresh one-step walks
  TriangleSP tri = assemble(parse_sp("series(e,e)"), parse_sp("par(e,series(e,e))"),
                            parse_sp("series(e,e)"));
  std::vector<uint64_t> w{3, 1, 5, 2, 2, 4, 1};
  REQUIRE(static_cast<int>(w.size()) == tri.num_edges());
  const double alpha = 0.35;

  std::array<double, 3> c{};
  for (int i = 0; i < 3; ++i) {
    const auto lo = static_cast<size_t>(tri.edge_bound[static_cast<size_t>(i)]);
    const auto hi = static_cast<size_t>(tri.edge_bound[static_cast<size_t>(i) + 1]);
    c[static_cast<size_t>(i)] = effective_conductance_dbl(
        tri.g[static_cast<size_t>(i)],
        std::span<const uint64_t>(w.data() + lo, hi - lo));
  }
  const auto p = hit_probabilities(c[0], c[1], c[2], alpha);

  Adjacency adj(tri.graph);
  Rng rng(404);
  const int m = 200000;
  std::array<int, 3> touched{};
  for (int rep = 0; rep < m; ++rep) {
    const int start = rng.bernoulli(alpha) ? tri.n1 : tri.n2;
    SimplePath gamma = loop_erase_backward(run_walk(adj, w, start, tri.food, rng));
    std::array<bool, 3> hit{};
    for (const PathStep& s : gamma.steps)
      hit[static_cast<size_t>(tri.component_of(s.edge))] = true;
    for (size_t i = 0; i < 3; ++i)
      if (hit[i]) ++touched[i];
  }
  for (size_t i = 0; i < 3; ++i) {
    const double freq = static_cast<double>(touched[i]) / m;
    const double se = std::sqrt(p[i] * (1 - p[i]) / m);
    CHECK(std::fabs(freq - p[i]) < 4 * se);
  }
}

TEST_CASE("liminf floors over the last half of a long run") {
  TriangleSP tri = line_triangle(2, 4, 3);
  const double alpha = 0.3;
  AntsProcess proc(tri, alpha, 97);
  const uint64_t n_steps = 1000000;
  proc.advance(n_steps / 2);
  double min1 = 1.0, min2 = 1.0;
  for (uint64_t i = n_steps / 2; i < n_steps; ++i) {
    proc.step();
    const auto& c = proc.counts();
    const double denom = static_cast<double>(proc.n() + 2);
    min1 = std::min(min1, static_cast<double>(c[0] + c[2]) / denom);
    min2 = std::min(min2, static_cast<double>(c[1] + c[2]) / denom);
  }
  CHECK(min1 >= alpha / 2);
  CHECK(min2 >= (1 - alpha) / 2);
}

TEST_CASE("conductance sandwich on a random SP graph") {
  Rng rng(3);
  SPExpr expr = testutil::random_sp(rng, 5);
  Heights h = heights(expr);
  SingleNestProcess proc(expr, 5);
  for (uint64_t n = 1; n <= 10000; ++n) {
    proc.step();
    CHECK(proc.conductance_exact() * h.h_max >= n);
  }
}

TEST_CASE("runs are deterministic per seed") {
  TriangleSP tri = line_triangle(2, 2, 3);
  AntsProcess a(tri, 0.3, 1234), b(tri, 0.3, 1234);
  auto cks = geometric_checkpoints(5000);
  auto sa = run_process(a, 5000, cks, true);
  auto sb = run_process(b, 5000, cks, true);
  REQUIRE(sa.size() == sb.size());
  for (size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i].counts == sb[i].counts);
    CHECK(sa[i].weights == sb[i].weights);
  }
  CHECK(sa.size() == geometric_checkpoints(5000).size());
}

TEST_CASE("single snapshot at n_steps=1") {
  TriangleSP tri = line_triangle(1, 1, 2);
  AntsProcess proc(tri, 0.5, 8);
  auto snaps = run_process(proc, 1, geometric_checkpoints(1));
  REQUIRE(snaps.size() == 1);
  CHECK(snaps[0].n == 1);
  CHECK(snaps[0].counts[0] + snaps[0].counts[1] == 1);
}

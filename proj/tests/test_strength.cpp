#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "desparsify/strength.hpp"
#include "test_support.hpp"

using namespace dsp;
using namespace dsp::testing;

TEST_CASE("strength frozen cases") {
  // Clique edge strength equals the clique mincut.
  Graph k5 = clique(5);
  auto s = edge_strengths(k5);
  for (const auto& e : k5.edges()) CHECK(s.at(e) == doctest::Approx(4.0));

  // A bridge between cliques has strength 1; clique edges keep theirs.
  Graph g = clique_union({4, 4}, 1);
  auto sg = edge_strengths(g);
  for (const auto& e : g.edges()) {
    bool bridge = (e.u < 4) != (e.v < 4);
    CHECK(sg.at(e) == doctest::Approx(bridge ? 1.0 : 3.0));
  }

  // Cycle: every edge has strength 2.
  Graph c7 = cycle(7);
  auto sc = edge_strengths(c7);
  for (const auto& e : c7.edges()) CHECK(sc.at(e) == doctest::Approx(2.0));

  // Path: every edge is a bridge, strength 1.
  Graph p5 = path(5);
  auto sp = edge_strengths(p5);
  for (const auto& e : p5.edges()) CHECK(sp.at(e) == doctest::Approx(1.0));
}

TEST_CASE("strength brute force agreement on random graphs") {
  Rng rng(37);
  for (int t = 0; t < 40; ++t) {
    Graph g = gnp(7, 0.45, rng);
    if (g.edge_count() == 0) continue;
    auto fast = edge_strengths(g);
    for (const auto& e : g.edges()) {
      double slow = edge_strength_bruteforce(g, e);
      CHECK(fast.at(e) == doctest::Approx(slow));
    }
  }
}

TEST_CASE("strength monotonicity under edge addition") {
  // Adding an edge never decreases any existing edge's strength.
  Rng rng(41);
  for (int t = 0; t < 25; ++t) {
    Graph g = gnp(7, 0.4, rng);
    if (g.edge_count() == 0) continue;
    std::vector<VertexPair> missing;
    for (int64_t i = 0; i < pair_count(7); ++i) {
      VertexPair e = pair_from_index(i, 7);
      if (!g.has_edge(e.u, e.v)) missing.push_back(e);
    }
    if (missing.empty()) continue;
    VertexPair add = missing[rng.next_below(missing.size())];
    std::vector<VertexPair> edges2 = g.edges();
    edges2.push_back(add);
    Graph g2(7, std::move(edges2));
    auto s1 = edge_strengths(g);
    auto s2 = edge_strengths(g2);
    for (const auto& e : g.edges()) CHECK(s2.at(e) >= s1.at(e) - 1e-9);
  }
}

TEST_CASE("weak edge decomposition invariants") {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    Graph g = gnp(9, 0.35, rng);
    double lambda = 1.0 + rng.next_below(3);
    StrengthDecomposition dec = weak_edge_decomposition(g, lambda);
    auto s = edge_strengths(g);

    // Weak set = exactly the edges with strength <= lambda.
    std::map<VertexPair, bool> weak;
    for (const auto& e : dec.weak_edges) weak[e] = true;
    for (const auto& e : g.edges()) {
      bool expect = s.at(e) <= lambda + 1e-9;
      CHECK(weak.count(e) == static_cast<size_t>(expect));
    }

    // Components partition the vertices.
    std::vector<int> seen(9, 0);
    for (const auto& comp : dec.components)
      for (int v : comp) seen[v] += 1;
    for (int v = 0; v < 9; ++v) CHECK(seen[v] == 1);

    // Every surviving edge lies within one component, and each residual
    // component is connected.
    std::vector<int> label(9, -1);
    for (size_t i = 0; i < dec.components.size(); ++i)
      for (int v : dec.components[i]) label[v] = static_cast<int>(i);
    std::vector<VertexPair> strong;
    for (const auto& e : g.edges())
      if (!weak[e]) {
        CHECK(label[e.u] == label[e.v]);
        strong.push_back(e);
      }
    Graph residual(9, std::move(strong));
    auto comps = connected_components(residual);
    // Residual components refine to exactly dec.components apart from isolated
    // vertices grouped the same way.
    std::vector<std::vector<int>> expect = dec.components;
    std::sort(expect.begin(), expect.end());
    std::sort(comps.begin(), comps.end());
    CHECK(comps == expect);

    // Each component's induced mincut (if the component has >= 2 vertices)
    // exceeds lambda: components survived the peeling.
    for (const auto& comp : dec.components) {
      if (comp.size() < 2) continue;
      Graph sub = induced_subgraph(g, comp);
      // Strong edges only.
      std::vector<VertexPair> keep;
      std::vector<int> l2g(comp.begin(), comp.end());
      for (const auto& e : sub.edges()) {
        VertexPair orig = VertexPair::of(l2g[e.u], l2g[e.v]);
        if (!weak[orig]) keep.push_back(e);
      }
      Graph strongsub(static_cast<int>(comp.size()), std::move(keep));
      MincutResult mc = mincut(strongsub);
      CHECK(mc.connected);
      CHECK(mc.value > lambda - 1e-9);
    }
  }
}

TEST_CASE("strength with inherited levels on nested cliques") {
  // K6 with a pendant path: clique edges strength 5, path edges 1.
  Graph k6 = clique(6);
  std::vector<VertexPair> edges = k6.edges();
  edges.push_back(VertexPair{5, 6});
  edges.push_back(VertexPair{6, 7});
  Graph g(8, std::move(edges));
  auto s = edge_strengths(g);
  for (const auto& e : g.edges()) {
    if (e.v <= 5)
      CHECK(s.at(e) == doctest::Approx(5.0));
    else
      CHECK(s.at(e) == doctest::Approx(1.0));
  }
}

TEST_CASE("strength certificate: subgraph mincut never beats the strength") {
  Rng rng(47);
  for (int t = 0; t < 15; ++t) {
    Graph g = gnp(8, 0.4, rng);
    if (g.edge_count() == 0) continue;
    auto s = edge_strengths(g);
    // For random vertex subsets containing an edge, the induced mincut is a
    // lower bound certificate.
    for (int trial = 0; trial < 20; ++trial) {
      const auto& e = g.edges()[rng.next_below(g.edges().size())];
      std::vector<int> verts;
      for (int v = 0; v < 8; ++v)
        if (v == e.u || v == e.v || rng.next_unit() < 0.5) verts.push_back(v);
      Graph sub = induced_subgraph(g, verts);
      MincutResult mc = mincut(sub);
      if (!mc.connected) continue;
      CHECK(mc.value <= s.at(e) + 1e-9);
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "desparsify/cluster.hpp"
#include "desparsify/graph.hpp"
#include "desparsify/rng.hpp"
#include "desparsify/sketches.hpp"
#include "test_support.hpp"

using namespace dsp;
using namespace dsp::testing;

TEST_CASE("pivot clusters a clique into one block at zero cost") {
  const Graph g = clique(5);
  Rng rng(1);
  const ClusteringResult r = pivot_cc(g, rng);
  CHECK(r.partition.cluster_count() == 1);
  CHECK(r.cost == 0);
  CHECK(r.backend == ClusterBackend::kPivot);
}

TEST_CASE("pivot leaves an empty graph as singletons") {
  const Graph g(6);
  Rng rng(2);
  const ClusteringResult r = pivot_cc(g, rng);
  CHECK(r.partition.cluster_count() == 6);
  CHECK(r.cost == 0);
}

TEST_CASE("pivot cost always matches a recomputation") {
  Rng mk(5);
  for (int t = 0; t < 10; ++t) {
    const Graph g = gnp(9, 0.4, mk);
    Rng rng(100 + static_cast<uint64_t>(t));
    const ClusteringResult r = pivot_cc(g, rng);
    CHECK(r.cost == cc_cost(g, r.partition));
    CHECK(r.partition.vertex_count() == 9);
  }
}

TEST_CASE("pivot is deterministic for a fixed rng seed") {
  Rng mk(8);
  const Graph g = gnp(10, 0.5, mk);
  Rng a(42), b(42);
  const ClusteringResult ra = pivot_cc(g, a);
  const ClusteringResult rb = pivot_cc(g, b);
  CHECK(ra.partition == rb.partition);
  CHECK(ra.cost == rb.cost);
}

TEST_CASE("restarts never increase the best cost") {
  Rng mk(13);
  for (int t = 0; t < 6; ++t) {
    const Graph g = gnp(10, 0.45, mk);
    const int64_t single = pivot_cc_best_of(g, Rng(7), 1).cost;
    const int64_t best = pivot_cc_best_of(g, Rng(7), 12).cost;
    CHECK(best <= single);
  }
}

TEST_CASE("brute force finds known optima") {
  // Path on four vertices: split the middle edge.
  const ClusteringResult p4 = brute_force_cc(path(4));
  CHECK(p4.cost == 1);
  CHECK(p4.backend == ClusterBackend::kBruteForce);

  // Triangle with a pendant vertex: cut the pendant edge.
  const Graph pendant(4, {VertexPair{0, 1}, VertexPair{0, 2}, VertexPair{1, 2}, VertexPair{2, 3}});
  CHECK(brute_force_cc(pendant).cost == 1);

  // A clique is perfectly clusterable.
  CHECK(brute_force_cc(clique(6)).cost == 0);

  // Two cliques joined by one bridge: the bridge is the whole cost.
  CHECK(brute_force_cc(clique_union({4, 4}, 1)).cost == 1);
}

TEST_CASE("brute force rejects graphs beyond its search bound") {
  CHECK_THROWS_AS(brute_force_cc(clique(10)), std::invalid_argument);
}

TEST_CASE("pivot never beats the optimum") {
  Rng mk(21);
  for (int t = 0; t < 8; ++t) {
    const Graph g = gnp(8, 0.5, mk);
    const int64_t opt = brute_force_cc(g).cost;
    for (uint64_t s = 0; s < 4; ++s) {
      Rng rng(s);
      CHECK(pivot_cc(g, rng).cost >= opt);
    }
  }
}

TEST_CASE("backend names round-trip") {
  CHECK(backend_by_name("pivot") == ClusterBackend::kPivot);
  CHECK(backend_by_name("brute") == ClusterBackend::kBruteForce);
  CHECK(backend_name(ClusterBackend::kPivot) == std::string("pivot"));
  CHECK(backend_name(ClusterBackend::kBruteForce) == std::string("brute"));
  CHECK_THROWS_AS(backend_by_name("other"), std::invalid_argument);
}

TEST_CASE("sketch clustering is deterministic and audits against the source graph") {
  const Graph g = clique_union({6, 5, 5}, 2);
  const SketchSuite suite = SketchSuite::of_graph(g, 17, 0.3, 2.0);
  const SketchClusterResult a = cluster_from_sketch(suite, ClusterBackend::kPivot, Rng(17),
                                                    Profile::desk(), 4, &g);
  const SketchClusterResult b = cluster_from_sketch(suite, ClusterBackend::kPivot, Rng(17),
                                                    Profile::desk(), 4, &g);
  CHECK(a.clustering.partition == b.clustering.partition);
  CHECK(a.clustering.cost == b.clustering.cost);
  REQUIRE(a.audit_cost.has_value());
  CHECK(*a.audit_cost == cc_cost(g, a.clustering.partition));
  // This sketch recovers the graph exactly, so both costs agree.
  CHECK(*a.audit_cost == a.clustering.cost);
  CHECK(a.pipeline.sketch_complete);
}

TEST_CASE("sketch clustering with the brute backend solves small instances optimally") {
  const Graph g = clique_union({4, 4}, 1);
  const SketchSuite suite = SketchSuite::of_graph(g, 6, 0.3, 2.0);
  const SketchClusterResult r = cluster_from_sketch(suite, ClusterBackend::kBruteForce, Rng(6),
                                                    Profile::desk(), 1, &g);
  CHECK(r.clustering.cost == 1);
  REQUIRE(r.audit_cost.has_value());
  CHECK(*r.audit_cost == 1);
  CHECK(r.clustering.partition.cluster_count() == 2);
}

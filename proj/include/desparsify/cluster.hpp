#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "desparsify/graph.hpp"
#include "desparsify/pipeline.hpp"
#include "desparsify/rng.hpp"
#include "desparsify/sketches.hpp"

namespace dsp {

enum class ClusterBackend { kPivot, kBruteForce };

ClusterBackend backend_by_name(const std::string& name);
std::string backend_name(ClusterBackend b);

struct ClusteringResult {
  Partition partition = Partition(1, {0});
  int64_t cost = 0;  // disagreement cost on the clustered graph
  ClusterBackend backend = ClusterBackend::kPivot;
};

// Random-order pivot clustering: walk a uniformly shuffled vertex order and
// let each still-unclustered vertex grab its unclustered neighbors.
// 3-approximate in expectation on the complete signed instance of g.
ClusteringResult pivot_cc(const Graph& g, Rng& rng);

// Deterministic given the base rng: runs `tries` independently forked pivot
// passes and keeps the cheapest (earliest fork on ties).
ClusteringResult pivot_cc_best_of(const Graph& g, const Rng& base, int tries);

// Exact optimum by exhaustive set-partition enumeration; n <= 9.
ClusteringResult brute_force_cc(const Graph& g);

struct SketchClusterResult {
  ClusteringResult clustering;
  DesparsifyResult pipeline;
  std::optional<int64_t> audit_cost;  // partition's cost on the audit graph, when given
};

// Clusters a dynamic-stream sketch black-box: de-sparsifies the sketch into a
// simple graph and runs the chosen backend on it. The partition's cost on the
// true streamed graph (when supplied for auditing) quantifies the composed
// approximation.
SketchClusterResult cluster_from_sketch(const SketchSuite& suite, ClusterBackend backend, const Rng& rng,
                                        const Profile& profile = Profile::desk(), int pivot_tries = 1,
                                        const Graph* audit = nullptr);

}  // namespace dsp

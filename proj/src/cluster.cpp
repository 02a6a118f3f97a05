#include "desparsify/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dsp {

ClusterBackend backend_by_name(const std::string& name) {
  if (name == "pivot") return ClusterBackend::kPivot;
  if (name == "brute") return ClusterBackend::kBruteForce;
  throw std::invalid_argument("cluster backend: unknown name '" + name + "'");
}

std::string backend_name(ClusterBackend b) {
  return b == ClusterBackend::kPivot ? "pivot" : "brute";
}

ClusteringResult pivot_cc(const Graph& g, Rng& rng) {
  const int n = g.vertex_count();
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i) + 1));
    std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
  }
  const auto adj = g.adjacency();
  std::vector<int> label(static_cast<size_t>(n), -1);
  int next = 0;
  for (int v : order) {
    if (label[static_cast<size_t>(v)] >= 0) continue;
    label[static_cast<size_t>(v)] = next;
    for (int u : adj[static_cast<size_t>(v)]) {
      if (label[static_cast<size_t>(u)] < 0) label[static_cast<size_t>(u)] = next;
    }
    ++next;
  }
  ClusteringResult result;
  result.partition = Partition::from_labels(n, label);
  result.cost = cc_cost(g, result.partition);
  result.backend = ClusterBackend::kPivot;
  return result;
}

ClusteringResult pivot_cc_best_of(const Graph& g, const Rng& base, int tries) {
  if (tries < 1) throw std::invalid_argument("pivot_cc_best_of: tries must be positive");
  std::optional<ClusteringResult> best;
  for (int i = 0; i < tries; ++i) {
    Rng r = base.fork(static_cast<uint64_t>(i));
    ClusteringResult cand = pivot_cc(g, r);
    if (!best || cand.cost < best->cost) best = std::move(cand);
  }
  return *best;
}

ClusteringResult brute_force_cc(const Graph& g) {
  const int n = g.vertex_count();
  if (n < 1 || n > 9) throw std::invalid_argument("brute_force_cc: needs 1 <= n <= 9");
  std::vector<int> label(static_cast<size_t>(n), 0);
  std::vector<int> best_label = label;
  int64_t best_cost = std::numeric_limits<int64_t>::max();
  // Restricted growth strings: label[i] <= 1 + max(label[0..i-1]).
  while (true) {
    const Partition p = Partition::from_labels(n, label);
    const int64_t cost = cc_cost(g, p);
    if (cost < best_cost) {
      best_cost = cost;
      best_label = label;
    }
    int i = n - 1;
    for (; i > 0; --i) {
      int prefix_max = 0;
      for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, label[static_cast<size_t>(j)]);
      if (label[static_cast<size_t>(i)] <= prefix_max) {
        ++label[static_cast<size_t>(i)];
        std::fill(label.begin() + i + 1, label.end(), 0);
        break;
      }
    }
    if (i == 0) break;
  }
  ClusteringResult result;
  result.partition = Partition::from_labels(n, best_label);
  result.cost = best_cost;
  result.backend = ClusterBackend::kBruteForce;
  return result;
}

SketchClusterResult cluster_from_sketch(const SketchSuite& suite, ClusterBackend backend, const Rng& rng,
                                        const Profile& profile, int pivot_tries, const Graph* audit) {
  SketchClusterResult out;
  out.pipeline = desparsify_from_sketch(suite, rng.fork(1), profile);
  const Graph& recovered = out.pipeline.graph;
  if (backend == ClusterBackend::kPivot) {
    out.clustering = pivot_cc_best_of(recovered, rng.fork(2), pivot_tries);
  } else {
    out.clustering = brute_force_cc(recovered);
  }
  if (audit != nullptr) {
    if (audit->vertex_count() != recovered.vertex_count()) {
      throw std::invalid_argument("cluster_from_sketch: audit graph vertex count mismatch");
    }
    out.audit_cost = cc_cost(*audit, out.clustering.partition);
  }
  return out;
}

}  // namespace dsp

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "desparsify/graph.hpp"
#include "desparsify/rng.hpp"
#include "desparsify/spectral.hpp"

namespace dsp::testing {

inline Graph clique(int n) {
  std::vector<VertexPair> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back(VertexPair{u, v});
  return Graph(n, std::move(edges));
}

inline Graph cycle(int n) {
  std::vector<VertexPair> edges;
  for (int v = 0; v < n; ++v) edges.push_back(VertexPair::of(v, (v + 1) % n));
  return Graph(n, std::move(edges));
}

inline Graph path(int n) {
  std::vector<VertexPair> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back(VertexPair{v, v + 1});
  return Graph(n, std::move(edges));
}

// Disjoint cliques of the given sizes plus `bridges` edges joining
// consecutive blocks (one endpoint each, chosen deterministically).
inline Graph clique_union(const std::vector<int>& sizes, int bridges) {
  int n = 0;
  for (int s : sizes) n += s;
  std::vector<VertexPair> edges;
  int base = 0;
  std::vector<int> bases;
  for (int s : sizes) {
    bases.push_back(base);
    for (int u = 0; u < s; ++u)
      for (int v = u + 1; v < s; ++v) edges.push_back(VertexPair{base + u, base + v});
    base += s;
  }
  for (int b = 0; b < bridges; ++b) {
    int i = b % (static_cast<int>(sizes.size()) - 1);
    int from = bases[i] + (b / (static_cast<int>(sizes.size()) - 1)) % sizes[i];
    int to = bases[i + 1] + (b / (static_cast<int>(sizes.size()) - 1)) % sizes[i + 1];
    edges.push_back(VertexPair::of(from, to));
  }
  return Graph(n, std::move(edges));
}

inline Graph gnp(int n, double p, Rng& rng) {
  std::vector<VertexPair> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.next_unit() < p) edges.push_back(VertexPair{u, v});
  return Graph(n, std::move(edges));
}

inline Graph gnp_connected(int n, double p, Rng& rng, int max_tries = 200) {
  for (int t = 0; t < max_tries; ++t) {
    Graph g = gnp(n, p, rng);
    if (g.edge_count() > 0 && connected_components(g).size() == 1) return g;
  }
  return clique(n);
}

inline Partition random_partition(int n, Rng& rng) {
  int k = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
  std::vector<int> raw(n);
  for (int v = 0; v < n; ++v) raw[v] = static_cast<int>(rng.next_below(static_cast<uint64_t>(k)));
  return Partition::from_labels(n, raw);
}

// Spectral sparsifier by effective-resistance sampling: keep each edge with
// probability min(1, c * R_e * ln(n) / eps^2) at weight 1/p_e.
inline WeightedGraph er_sample_sparsifier(const Graph& g, double eps, double c, Rng& rng) {
  int n = g.vertex_count();
  Eigen::MatrixXd R = effective_resistance_matrix(WeightedGraph::from_graph(g));
  std::vector<std::pair<VertexPair, double>> entries;
  double lg = std::log(std::max(n, 2));
  for (const auto& e : g.edges()) {
    double p = std::min(1.0, c * R(e.u, e.v) * lg / (eps * eps));
    if (rng.next_unit() < p) entries.emplace_back(e, 1.0 / p);
  }
  return WeightedGraph(n, std::move(entries));
}

// Rescales weights so the total equals `target` exactly (up to fp rounding).
inline WeightedGraph rescale_total(const WeightedGraph& g, double target) {
  double total = g.total_weight();
  std::vector<std::pair<VertexPair, double>> entries = g.entries();
  for (auto& [e, w] : entries) w *= target / total;
  return WeightedGraph(g.vertex_count(), std::move(entries));
}

}  // namespace dsp::testing

#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dsp {

// Unordered vertex pair, stored with u < v.
struct VertexPair {
  int u = 0;
  int v = 0;

  static VertexPair of(int a, int b);

  auto operator<=>(const VertexPair&) const = default;
};

// Row-major upper-triangle index of a pair among the C(n,2) possible pairs.
int64_t pair_count(int n);
int64_t pair_index(VertexPair e, int n);
VertexPair pair_from_index(int64_t idx, int n);

// Simple unweighted graph. Immutable after construction; edges are kept
// sorted and validated (no loops, no duplicates, endpoints in range).
class Graph {
 public:
  explicit Graph(int n, std::vector<VertexPair> edges = {});

  int vertex_count() const { return n_; }
  const std::vector<VertexPair>& edges() const { return edges_; }
  int64_t edge_count() const { return static_cast<int64_t>(edges_.size()); }
  bool has_edge(int a, int b) const;

  std::vector<std::vector<int>> adjacency() const;

  bool operator==(const Graph&) const = default;

 private:
  int n_ = 0;
  std::vector<VertexPair> edges_;
};

// Weighted graph with strictly positive weights, sorted by pair.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n, std::vector<std::pair<VertexPair, double>> entries = {});

  static WeightedGraph from_graph(const Graph& g);

  int vertex_count() const { return n_; }
  const std::vector<std::pair<VertexPair, double>>& entries() const { return entries_; }
  int64_t edge_count() const { return static_cast<int64_t>(entries_.size()); }
  double weight(int a, int b) const;  // 0 when absent
  bool has_edge(int a, int b) const { return weight(a, b) > 0.0; }
  double total_weight() const;

  // Unweighted support.
  Graph support() const;

  bool operator==(const WeightedGraph&) const = default;

 private:
  int n_ = 0;
  std::vector<std::pair<VertexPair, double>> entries_;
};

// Fractional edge selection: values in [0,1] on an explicit support.
struct FractionalGraph {
  int n = 0;
  std::vector<VertexPair> support;
  std::vector<double> values;

  double total() const;
  void validate() const;  // throws on out-of-range values or malformed support
};

// Partition of {0..n-1} into k nonempty clusters labeled 0..k-1.
class Partition {
 public:
  Partition(int n, std::vector<int> cluster_of);

  // Relabels arbitrary ids to 0..k-1 by first appearance.
  static Partition from_labels(int n, std::span<const int> raw);
  static Partition from_clusters(int n, const std::vector<std::vector<int>>& clusters);

  int vertex_count() const { return n_; }
  int cluster_count() const { return k_; }
  int cluster_of(int v) const { return cluster_of_[v]; }
  const std::vector<int>& labels() const { return cluster_of_; }
  std::vector<std::vector<int>> clusters() const;

  bool operator==(const Partition&) const = default;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<int> cluster_of_;
};

// Total weight of edges with exactly one endpoint in s.
double cut_value(const Graph& g, std::span<const int> s);
double cut_value(const WeightedGraph& g, std::span<const int> s);

struct MincutResult {
  double value = 0.0;
  std::vector<int> side;  // one side of an optimal cut
  bool connected = true;  // false => value 0 and side is a component
};

// Global minimum cut, Stoer-Wagner with deterministic tie-breaking by
// smallest original vertex id. Requires n >= 2.
MincutResult mincut(const Graph& g);
MincutResult mincut(const WeightedGraph& g);

Eigen::MatrixXd laplacian(const Graph& g);
Eigen::MatrixXd laplacian(const WeightedGraph& g);

// Correlation clustering disagreement cost against the complete signed
// graph whose '+' edges are exactly g's edges. Exact integer arithmetic.
int64_t cc_cost(const Graph& g, const Partition& p);

// Same quantity via the cut identity
//   sum_i cut(V_i) + sum_i C(|V_i|,2) - (1/2) sum_v deg(v),
// which extends to weighted graphs.
double cc_via_cuts(const Graph& g, const Partition& p);
double cc_via_cuts(const WeightedGraph& g, const Partition& p);

std::vector<std::vector<int>> connected_components(const Graph& g);
std::vector<std::vector<int>> connected_components(const WeightedGraph& g);

// Component label per vertex, labels ordered by smallest contained vertex.
std::vector<int> component_labels(const Graph& g);

Graph induced_subgraph(const Graph& g, std::span<const int> verts,
                       std::vector<int>* local_to_global = nullptr);

Graph union_graphs(const Graph& a, const Graph& b);  // throws on overlap
WeightedGraph add_weighted(const WeightedGraph& a, const WeightedGraph& b);

}  // namespace dsp

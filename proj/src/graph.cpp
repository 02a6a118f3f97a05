#include "desparsify/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dsp {

VertexPair VertexPair::of(int a, int b) {
  if (a == b) throw std::invalid_argument("VertexPair: self-loop");
  if (a < 0 || b < 0) throw std::invalid_argument("VertexPair: negative vertex");
  return a < b ? VertexPair{a, b} : VertexPair{b, a};
}

int64_t pair_count(int n) { return static_cast<int64_t>(n) * (n - 1) / 2; }

int64_t pair_index(VertexPair e, int n) {
  if (e.v >= n) throw std::invalid_argument("pair_index: vertex out of range");
  int64_t u = e.u;
  return u * (2 * static_cast<int64_t>(n) - u - 1) / 2 + (e.v - e.u - 1);
}

VertexPair pair_from_index(int64_t idx, int n) {
  if (idx < 0 || idx >= pair_count(n)) throw std::invalid_argument("pair_from_index: out of range");
  int64_t off = idx;
  for (int u = 0; u < n - 1; ++u) {
    int64_t row = n - 1 - u;
    if (off < row) return VertexPair{u, static_cast<int>(u + 1 + off)};
    off -= row;
  }
  throw std::logic_error("pair_from_index: unreachable");
}

namespace {

void check_pairs_sorted_unique(int n, std::vector<VertexPair>& edges, const char* what) {
  for (const auto& e : edges) {
    if (e.u < 0 || e.v >= n || e.u >= e.v)
      throw std::invalid_argument(std::string(what) + ": malformed edge");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument(std::string(what) + ": duplicate edge");
}

}  // namespace

Graph::Graph(int n, std::vector<VertexPair> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  check_pairs_sorted_unique(n_, edges_, "Graph");
}

bool Graph::has_edge(int a, int b) const {
  if (a == b) return false;
  return std::binary_search(edges_.begin(), edges_.end(), VertexPair::of(a, b));
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

WeightedGraph::WeightedGraph(int n, std::vector<std::pair<VertexPair, double>> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 0) throw std::invalid_argument("WeightedGraph: negative vertex count");
  for (auto& [e, w] : entries_) {
    if (e.u < 0 || e.v >= n_ || e.u >= e.v)
      throw std::invalid_argument("WeightedGraph: malformed edge");
    if (!(w > 0.0)) throw std::invalid_argument("WeightedGraph: weights must be positive");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < entries_.size(); ++i)
    if (entries_[i].first == entries_[i - 1].first)
      throw std::invalid_argument("WeightedGraph: duplicate edge");
}

WeightedGraph WeightedGraph::from_graph(const Graph& g) {
  std::vector<std::pair<VertexPair, double>> entries;
  entries.reserve(g.edges().size());
  for (const auto& e : g.edges()) entries.emplace_back(e, 1.0);
  return WeightedGraph(g.vertex_count(), std::move(entries));
}

double WeightedGraph::weight(int a, int b) const {
  if (a == b) return 0.0;
  VertexPair key = VertexPair::of(a, b);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const auto& ent, const VertexPair& k) { return ent.first < k; });
  if (it != entries_.end() && it->first == key) return it->second;
  return 0.0;
}

double WeightedGraph::total_weight() const {
  double t = 0.0;
  for (const auto& [e, w] : entries_) t += w;
  return t;
}

Graph WeightedGraph::support() const {
  std::vector<VertexPair> edges;
  edges.reserve(entries_.size());
  for (const auto& [e, w] : entries_) edges.push_back(e);
  return Graph(n_, std::move(edges));
}

double FractionalGraph::total() const {
  double t = 0.0;
  for (double v : values) t += v;
  return t;
}

void FractionalGraph::validate() const {
  if (support.size() != values.size())
    throw std::invalid_argument("FractionalGraph: support/value size mismatch");
  std::vector<VertexPair> copy = support;
  check_pairs_sorted_unique(n, copy, "FractionalGraph");
  for (double y : values) {
    if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("FractionalGraph: value outside [0,1]");
  }
}

Partition::Partition(int n, std::vector<int> cluster_of) : n_(n), cluster_of_(std::move(cluster_of)) {
  if (static_cast<int>(cluster_of_.size()) != n_)
    throw std::invalid_argument("Partition: label vector has wrong length");
  if (n_ == 0) {
    k_ = 0;
    return;
  }
  int k = 1 + *std::max_element(cluster_of_.begin(), cluster_of_.end());
  std::vector<int> seen(k, 0);
  for (int c : cluster_of_) {
    if (c < 0 || c >= k) throw std::invalid_argument("Partition: label out of range");
    seen[c] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::invalid_argument("Partition: empty cluster label");
  k_ = k;
}

Partition Partition::from_labels(int n, std::span<const int> raw) {
  if (static_cast<int>(raw.size()) != n)
    throw std::invalid_argument("Partition: label vector has wrong length");
  std::vector<int> remap(n, -1);
  std::vector<int> canon;
  canon.reserve(n);
  int next = 0;
  std::vector<std::pair<int, int>> first_seen;  // raw label -> canonical
  for (int v = 0; v < n; ++v) {
    int raw_label = raw[v];
    int found = -1;
    for (const auto& [rl, cl] : first_seen) {
      if (rl == raw_label) {
        found = cl;
        break;
      }
    }
    if (found < 0) {
      found = next++;
      first_seen.emplace_back(raw_label, found);
    }
    canon.push_back(found);
  }
  (void)remap;
  return Partition(n, std::move(canon));
}

Partition Partition::from_clusters(int n, const std::vector<std::vector<int>>& clusters) {
  std::vector<int> labels(n, -1);
  int k = 0;
  for (const auto& cl : clusters) {
    if (cl.empty()) throw std::invalid_argument("Partition: empty cluster");
    for (int v : cl) {
      if (v < 0 || v >= n || labels[v] != -1)
        throw std::invalid_argument("Partition: clusters must cover each vertex once");
      labels[v] = k;
    }
    ++k;
  }
  for (int v = 0; v < n; ++v)
    if (labels[v] < 0) throw std::invalid_argument("Partition: vertex missing from clusters");
  return Partition(n, std::move(labels));
}

std::vector<std::vector<int>> Partition::clusters() const {
  std::vector<std::vector<int>> out(k_);
  for (int v = 0; v < n_; ++v) out[cluster_of_[v]].push_back(v);
  return out;
}

namespace {

std::vector<char> side_mask(int n, std::span<const int> s) {
  std::vector<char> in(n, 0);
  for (int v : s) {
    if (v < 0 || v >= n) throw std::invalid_argument("cut_value: vertex out of range");
    in[v] = 1;
  }
  return in;
}

}  // namespace

double cut_value(const Graph& g, std::span<const int> s) {
  auto in = side_mask(g.vertex_count(), s);
  double c = 0.0;
  for (const auto& e : g.edges())
    if (in[e.u] != in[e.v]) c += 1.0;
  return c;
}

double cut_value(const WeightedGraph& g, std::span<const int> s) {
  auto in = side_mask(g.vertex_count(), s);
  double c = 0.0;
  for (const auto& [e, w] : g.entries())
    if (in[e.u] != in[e.v]) c += w;
  return c;
}

namespace {

struct DenseGraph {
  int n;
  Eigen::MatrixXd w;
};

DenseGraph densify(const WeightedGraph& g) {
  DenseGraph d{g.vertex_count(), Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count())};
  for (const auto& [e, w] : g.entries()) {
    d.w(e.u, e.v) = w;
    d.w(e.v, e.u) = w;
  }
  return d;
}

std::vector<std::vector<int>> components_from_adj(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (label[s] != -1) continue;
    std::vector<int> stack{s};
    std::vector<int> comp;
    label[s] = static_cast<int>(comps.size());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : adj[v]) {
        if (label[w] == -1) {
          label[w] = label[s];
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

// Stoer-Wagner on a dense weight matrix. Assumes the graph is connected.
// Tie-breaking: every selection scans vertices in increasing order of the
// smallest original id merged into them, so runs are reproducible.
MincutResult stoer_wagner_connected(const DenseGraph& d) {
  int n = d.n;
  Eigen::MatrixXd w = d.w;
  std::vector<int> rep(n);           // smallest original id in the merged group
  std::vector<std::vector<int>> group(n);
  for (int i = 0; i < n; ++i) {
    rep[i] = i;
    group[i] = {i};
  }
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_side;

  while (active.size() > 1) {
    // Maximum adjacency order for this phase.
    std::vector<char> added(n, 0);
    std::vector<double> key(n, 0.0);
    int first = active[0];
    for (int v : active)
      if (rep[v] < rep[first]) first = v;
    added[first] = 1;
    for (int v : active)
      if (!added[v]) key[v] = w(first, v);
    int prev = first, last = first;
    for (size_t step = 1; step < active.size(); ++step) {
      int pick = -1;
      for (int v : active) {
        if (added[v]) continue;
        if (pick == -1 || key[v] > key[pick] || (key[v] == key[pick] && rep[v] < rep[pick]))
          pick = v;
      }
      if (pick < 0) throw std::logic_error("mincut: phase ran out of vertices");
      added[pick] = 1;
      prev = last;
      last = pick;
      for (int v : active)
        if (!added[v]) key[v] += w(pick, v);
    }

    double phase_cut = key[last];
    if (phase_cut < best) {
      best = phase_cut;
      best_side = group[last];
    }

    // Merge last into prev.
    for (int v : active) {
      if (v == last || v == prev) continue;
      w(prev, v) += w(last, v);
      w(v, prev) = w(prev, v);
    }
    rep[prev] = std::min(rep[prev], rep[last]);
    group[prev].insert(group[prev].end(), group[last].begin(), group[last].end());
    active.erase(std::find(active.begin(), active.end(), last));
  }

  std::sort(best_side.begin(), best_side.end());
  return MincutResult{best, std::move(best_side), true};
}

MincutResult mincut_impl(const WeightedGraph& g) {
  int n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("mincut: needs at least two vertices");
  auto comps = connected_components(g);
  if (comps.size() > 1) return MincutResult{0.0, comps[0], false};
  return stoer_wagner_connected(densify(g));
}

}  // namespace

MincutResult mincut(const Graph& g) { return mincut_impl(WeightedGraph::from_graph(g)); }
MincutResult mincut(const WeightedGraph& g) { return mincut_impl(g); }

Eigen::MatrixXd laplacian(const Graph& g) { return laplacian(WeightedGraph::from_graph(g)); }

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  int n = g.vertex_count();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [e, w] : g.entries()) {
    L(e.u, e.u) += w;
    L(e.v, e.v) += w;
    L(e.u, e.v) -= w;
    L(e.v, e.u) -= w;
  }
  return L;
}

int64_t cc_cost(const Graph& g, const Partition& p) {
  if (p.vertex_count() != g.vertex_count())
    throw std::invalid_argument("cc_cost: partition size mismatch");
  int n = g.vertex_count();
  // '+' edges across clusters.
  int64_t cost = 0;
  for (const auto& e : g.edges())
    if (p.cluster_of(e.u) != p.cluster_of(e.v)) ++cost;
  // '-' pairs (non-edges) inside clusters.
  std::vector<int64_t> size(p.cluster_count(), 0);
  for (int v = 0; v < n; ++v) ++size[p.cluster_of(v)];
  int64_t inside_pairs = 0;
  for (int64_t s : size) inside_pairs += s * (s - 1) / 2;
  int64_t inside_edges = 0;
  for (const auto& e : g.edges())
    if (p.cluster_of(e.u) == p.cluster_of(e.v)) ++inside_edges;
  return cost + (inside_pairs - inside_edges);
}

namespace {

template <typename G>
double cc_via_cuts_impl(const G& g, const Partition& p, double total_weight) {
  if (p.vertex_count() != g.vertex_count())
    throw std::invalid_argument("cc_via_cuts: partition size mismatch");
  double cuts = 0.0;
  for (const auto& cl : p.clusters()) cuts += cut_value(g, cl);
  double pairs = 0.0;
  for (const auto& cl : p.clusters()) {
    double s = static_cast<double>(cl.size());
    pairs += s * (s - 1.0) / 2.0;
  }
  // (1/2) sum_v deg(v) equals the total edge weight.
  return cuts + pairs - total_weight;
}

}  // namespace

double cc_via_cuts(const Graph& g, const Partition& p) {
  return cc_via_cuts_impl(g, p, static_cast<double>(g.edge_count()));
}

double cc_via_cuts(const WeightedGraph& g, const Partition& p) {
  return cc_via_cuts_impl(g, p, g.total_weight());
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
  return components_from_adj(g.vertex_count(), g.adjacency());
}

std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
  std::vector<std::vector<int>> adj(g.vertex_count());
  for (const auto& [e, w] : g.entries()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return components_from_adj(g.vertex_count(), adj);
}

std::vector<int> component_labels(const Graph& g) {
  auto comps = connected_components(g);
  std::vector<int> label(g.vertex_count(), -1);
  for (size_t i = 0; i < comps.size(); ++i)
    for (int v : comps[i]) label[v] = static_cast<int>(i);
  return label;
}

Graph induced_subgraph(const Graph& g, std::span<const int> verts, std::vector<int>* local_to_global) {
  std::vector<int> sorted(verts.begin(), verts.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("induced_subgraph: repeated vertex");
  std::vector<int> local(g.vertex_count(), -1);
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= g.vertex_count())
      throw std::invalid_argument("induced_subgraph: vertex out of range");
    local[sorted[i]] = static_cast<int>(i);
  }
  std::vector<VertexPair> edges;
  for (const auto& e : g.edges())
    if (local[e.u] >= 0 && local[e.v] >= 0)
      edges.push_back(VertexPair{local[e.u], local[e.v]});
  if (local_to_global) *local_to_global = sorted;
  return Graph(static_cast<int>(sorted.size()), std::move(edges));
}

Graph union_graphs(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count())
    throw std::invalid_argument("union_graphs: vertex count mismatch");
  std::vector<VertexPair> edges = a.edges();
  edges.insert(edges.end(), b.edges().begin(), b.edges().end());
  return Graph(a.vertex_count(), std::move(edges));  // ctor rejects duplicates
}

WeightedGraph add_weighted(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.vertex_count() != b.vertex_count())
    throw std::invalid_argument("add_weighted: vertex count mismatch");
  std::vector<std::pair<VertexPair, double>> entries = a.entries();
  for (const auto& [e, w] : b.entries()) {
    bool merged = false;
    for (auto& [e2, w2] : entries) {
      if (e2 == e) {
        w2 += w;
        merged = true;
        break;
      }
    }
    if (!merged) entries.emplace_back(e, w);
  }
  return WeightedGraph(a.vertex_count(), std::move(entries));
}

}  // namespace dsp

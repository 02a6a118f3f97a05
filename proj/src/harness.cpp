#include "desparsify/harness.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "desparsify/program.hpp"
#include "desparsify/rng.hpp"
#include "desparsify/serialize.hpp"
#include "desparsify/spectral.hpp"

namespace dsp {

namespace {

constexpr uint64_t kSaltRecoveryRng = 0x7b8f2ce1a95d4c03ull;

int ceil_log2_int(int x) {
  int lg = 0;
  while ((1 << lg) < x) ++lg;
  return lg;
}

Graph stream_net_graph(const std::vector<StreamEvent>& events, int n) {
  std::vector<char> present(static_cast<size_t>(pair_count(n)), 0);
  std::vector<VertexPair> edges;
  for (size_t i = 0; i < events.size(); ++i) {
    const StreamEvent& ev = events[i];
    if (ev.u < 0 || ev.v < 0 || ev.u >= n || ev.v >= n || ev.u == ev.v) {
      throw StreamError("stream event " + std::to_string(i) + ": bad endpoints", i);
    }
    if (ev.sign != 1 && ev.sign != -1) {
      throw StreamError("stream event " + std::to_string(i) + ": sign must be +1 or -1", i);
    }
    const VertexPair e = VertexPair::of(ev.u, ev.v);
    char& p = present[static_cast<size_t>(pair_index(e, n))];
    if (ev.sign == 1) {
      if (p) throw StreamError("stream event " + std::to_string(i) + ": edge already present", i);
      p = 1;
    } else {
      if (!p) throw StreamError("stream event " + std::to_string(i) + ": deleting an absent edge", i);
      p = 0;
    }
  }
  for (int64_t i = 0; i < pair_count(n); ++i) {
    if (present[static_cast<size_t>(i)]) edges.push_back(pair_from_index(i, n));
  }
  return Graph(n, edges);
}

Graph disjoint_union(const std::vector<std::vector<VertexPair>>& machine_edges, int n) {
  std::vector<VertexPair> all;
  for (const auto& part : machine_edges) all.insert(all.end(), part.begin(), part.end());
  return Graph(n, all);  // ctor rejects duplicates across machines
}

bool slice_is_zero(const VertexSlice& s) {
  if (s.count_part != 0) return false;
  for (int64_t x : s.bank_block) {
    if (x != 0) return false;
  }
  for (int64_t x : s.multiplicity_row) {
    if (x != 0) return false;
  }
  return true;
}

}  // namespace

Rng recovery_rng(uint64_t seed) { return Rng(hash_combine(seed, kSaltRecoveryRng)); }

DynamicStreamResult dynamic_stream_run(const std::vector<StreamEvent>& events, int n, uint64_t seed,
                                       double eps, double lambda, ClusterBackend backend,
                                       const Profile& profile, int pivot_tries, const Graph* audit) {
  DynamicStreamResult result;
  result.final_graph = stream_net_graph(events, n);  // validates the whole stream up front

  SketchSuite suite(seed, n, eps, lambda, profile);
  for (const StreamEvent& ev : events) suite.update(VertexPair::of(ev.u, ev.v), ev.sign);

  const SketchSuite offline = SketchSuite::of_graph(result.final_graph, seed, eps, lambda, profile);
  const std::vector<uint8_t> bytes = suite.serialize();
  result.audit.events = static_cast<int64_t>(events.size());
  result.audit.suite_matches_offline = bytes == offline.serialize();
  result.audit.suite_digest = sha256_hex(bytes);

  result.outcome = cluster_from_sketch(suite, backend, recovery_rng(seed), profile, pivot_tries, audit);
  return result;
}

DistributedResult distributed_run(const std::vector<std::vector<VertexPair>>& machine_edges, int n,
                                  uint64_t seed, double eps, double lambda, ClusterBackend backend,
                                  const Profile& profile, int pivot_tries, const Graph* audit) {
  if (machine_edges.empty()) throw std::invalid_argument("distributed_run: need at least one machine");
  DistributedResult result;
  result.union_graph = disjoint_union(machine_edges, n);
  result.broadcast_bytes = static_cast<int64_t>(machine_edges.size()) * 8;  // one seed per machine

  SketchSuite merged(seed, n, eps, lambda, profile);
  for (const auto& part : machine_edges) {
    const SketchSuite local = SketchSuite::of_graph(Graph(n, part), seed, eps, lambda, profile);
    result.machine_bytes.push_back(static_cast<int64_t>(local.serialize().size()));
    merged.merge(local);
  }

  const SketchSuite offline = SketchSuite::of_graph(result.union_graph, seed, eps, lambda, profile);
  result.suite_matches_offline = merged.serialize() == offline.serialize();

  result.outcome = cluster_from_sketch(merged, backend, recovery_rng(seed), profile, pivot_tries, audit);
  return result;
}

MpcResult mpc_run(const std::vector<std::vector<VertexPair>>& machine_edges, int n, uint64_t seed,
                  double eps, double lambda, ClusterBackend backend, const Profile& profile,
                  int64_t message_cap, int pivot_tries, const Graph* audit) {
  const int k = static_cast<int>(machine_edges.size());
  if (k < 1) throw std::invalid_argument("mpc_run: need at least one machine");
  MpcResult result;
  result.union_graph = disjoint_union(machine_edges, n);

  const SketchSuite offline = SketchSuite::of_graph(result.union_graph, seed, eps, lambda, profile);
  result.message_cap =
      message_cap > 0 ? message_cap : static_cast<int64_t>(offline.serialize().size()) + 4096;

  // Round 1: every machine slices its local sketch by vertex and ships each
  // slice to the vertex's owner.
  result.round1_bytes.assign(static_cast<size_t>(k), 0);
  result.round2_bytes.assign(static_cast<size_t>(k), 0);
  std::vector<std::vector<std::optional<VertexSlice>>> owned(
      static_cast<size_t>(k), std::vector<std::optional<VertexSlice>>(static_cast<size_t>(n)));
  std::vector<std::vector<int64_t>> message_bytes(static_cast<size_t>(k),
                                                  std::vector<int64_t>(static_cast<size_t>(k), 0));
  for (int i = 0; i < k; ++i) {
    const SketchSuite local = SketchSuite::of_graph(Graph(n, machine_edges[static_cast<size_t>(i)]), seed,
                                                    eps, lambda, profile);
    for (int v = 0; v < n; ++v) {
      VertexSlice slice = local.vertex_slice(v);
      if (slice_is_zero(slice)) continue;  // sparse encoding: untouched vertices send nothing
      const int owner = v % k;
      const int64_t bytes = static_cast<int64_t>(slice.serialize().size());
      result.round1_bytes[static_cast<size_t>(i)] += bytes;
      message_bytes[static_cast<size_t>(i)][static_cast<size_t>(owner)] += bytes;
      auto& cell = owned[static_cast<size_t>(owner)][static_cast<size_t>(v)];
      if (cell) {
        cell->add(slice);
      } else {
        cell = std::move(slice);
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      result.max_message_bytes = std::max(result.max_message_bytes, message_bytes[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }
  }

  // Round 2: owners forward their aggregated slices to machine zero.
  SketchSuite assembled(seed, n, eps, lambda, profile);
  for (int j = 0; j < k; ++j) {
    int64_t message = 0;
    for (int v = 0; v < n; ++v) {
      const auto& cell = owned[static_cast<size_t>(j)][static_cast<size_t>(v)];
      if (!cell) continue;
      message += static_cast<int64_t>(cell->serialize().size());
      assembled.add_vertex_slice(*cell);
    }
    result.round2_bytes[static_cast<size_t>(j)] = message;
    result.max_message_bytes = std::max(result.max_message_bytes, message);
  }
  result.rounds = 2;
  result.cap_respected = result.max_message_bytes <= result.message_cap;
  result.suite_matches_offline = assembled.serialize() == offline.serialize();

  result.outcome = cluster_from_sketch(assembled, backend, recovery_rng(seed), profile, pivot_tries, audit);
  return result;
}

SpannerSequence::SpannerSequence(int n, int count, int stretch) : n_(n), stretch_(stretch) {
  if (n < 1) throw std::invalid_argument("spanner sequence: vertex count must be positive");
  if (count < 1) throw std::invalid_argument("spanner sequence: need at least one spanner");
  if (stretch < 2) throw std::invalid_argument("spanner sequence: stretch must be at least 2");
  edges_.resize(static_cast<size_t>(count));
  adj_.assign(static_cast<size_t>(count),
              std::vector<std::vector<int>>(static_cast<size_t>(n)));
}

int SpannerSequence::distance(int i, int u, int v) const {
  const auto& adj = adj_[static_cast<size_t>(i)];
  if (u == v) return 0;
  std::vector<int> dist(static_cast<size_t>(n_), -1);
  std::deque<int> queue;
  dist[static_cast<size_t>(u)] = 0;
  queue.push_back(u);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int y : adj[static_cast<size_t>(x)]) {
      if (dist[static_cast<size_t>(y)] >= 0) continue;
      dist[static_cast<size_t>(y)] = dist[static_cast<size_t>(x)] + 1;
      if (y == v) return dist[static_cast<size_t>(y)];
      queue.push_back(y);
    }
  }
  return INT_MAX;
}

int SpannerSequence::insert(VertexPair e) {
  for (size_t i = 0; i < edges_.size(); ++i) {
    if (distance(static_cast<int>(i), e.u, e.v) >= stretch_) {
      edges_[i].push_back(e);
      adj_[i][static_cast<size_t>(e.u)].push_back(e.v);
      adj_[i][static_cast<size_t>(e.v)].push_back(e.u);
      return static_cast<int>(i);
    }
  }
  return -1;
}

Graph SpannerSequence::spanner(int i) const { return Graph(n_, edges_[static_cast<size_t>(i)]); }

Graph SpannerSequence::union_graph() const {
  std::vector<VertexPair> all;
  for (const auto& part : edges_) all.insert(all.end(), part.begin(), part.end());
  return Graph(n_, all);
}

DeterministicSparsifyStream::DeterministicSparsifyStream(int n, double eps, int64_t block_size)
    : n_(n), eps_(eps) {
  if (n < 1) throw std::invalid_argument("deterministic sparsify: vertex count must be positive");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("deterministic sparsify: eps in (0,1)");
  block_ = block_size > 0 ? block_size : std::max<int64_t>(32, 4 * static_cast<int64_t>(n));
}

WeightedGraph DeterministicSparsifyStream::reduce(const WeightedGraph& g, double eps_budget,
                                                  int64_t target_edges, bool* shortfall) {
  if (shortfall != nullptr) *shortfall = false;
  if (g.edge_count() == 0) return g;
  WeightedGraph current = g;
  const Eigen::MatrixXd base_projector = pinv_sqrt(laplacian(g));
  const int kernel = static_cast<int>(connected_components(g).size());
  const int n = g.vertex_count();

  // Band of the candidate against g after its own optimal uniform rescale:
  // (hi - lo) / (hi + lo) over the non-kernel eigenvalues.
  auto band_with_rescale = [&](const WeightedGraph& cand, double* scale) {
    Eigen::MatrixXd m = base_projector * laplacian(cand) * base_projector;
    m = ((m + m.transpose()) * 0.5).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double lo = ev(kernel);
    const double hi = ev(n - 1);
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    if (scale != nullptr) *scale = 2.0 / (lo + hi);
    return (hi - lo) / (hi + lo);
  };

  while (current.edge_count() > target_edges) {
    const Eigen::MatrixXd er = effective_resistance_matrix(current);
    std::vector<std::pair<double, VertexPair>> leverage;
    leverage.reserve(static_cast<size_t>(current.edge_count()));
    for (const auto& [e, w] : current.entries()) leverage.push_back({w * er(e.u, e.v), e});
    std::sort(leverage.begin(), leverage.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    bool removed = false;
    for (const auto& [lev, victim] : leverage) {
      std::vector<std::pair<VertexPair, double>> entries;
      for (const auto& [e, w] : current.entries()) {
        if (!(e == victim)) entries.push_back({e, w});
      }
      const WeightedGraph cand(current.vertex_count(), entries);
      if (band_with_rescale(cand, nullptr) <= eps_budget * (1.0 - 1e-9)) {
        current = cand;
        removed = true;
        break;
      }
    }
    if (!removed) {
      if (shortfall != nullptr) *shortfall = true;
      break;
    }
  }

  double scale = 1.0;
  const double band = band_with_rescale(current, &scale);
  if (band > eps_budget) throw std::logic_error("deterministic reduce: verified band exceeded");
  if (scale != 1.0) {
    std::vector<std::pair<VertexPair, double>> entries;
    for (const auto& [e, w] : current.entries()) entries.push_back({e, w * scale});
    current = WeightedGraph(current.vertex_count(), entries);
  }
  return current;
}

void DeterministicSparsifyStream::carry(WeightedGraph block, int level) {
  while (true) {
    if (static_cast<size_t>(level) >= levels_.size()) levels_.resize(static_cast<size_t>(level) + 1);
    auto& slot = levels_[static_cast<size_t>(level)];
    if (!slot) {
      slot = std::move(block);
      return;
    }
    WeightedGraph merged = add_weighted(*slot, block);
    slot.reset();
    const double budget = eps_ / ((level + 2.0) * (level + 3.0));
    bool short_here = false;
    block = reduce(merged, budget, block_, &short_here);
    shortfall_ = shortfall_ || short_here;
    ++level;
  }
}

void DeterministicSparsifyStream::insert(VertexPair e) {
  if (e.u < 0 || e.v >= n_ || e.u >= e.v) throw std::invalid_argument("deterministic sparsify: bad pair");
  buffer_.push_back(e);
  ++inserted_;
  if (static_cast<int64_t>(buffer_.size()) == block_) {
    WeightedGraph block = WeightedGraph::from_graph(Graph(n_, buffer_));
    buffer_.clear();
    carry(std::move(block), 0);
  }
}

WeightedGraph DeterministicSparsifyStream::finish() const {
  WeightedGraph acc = WeightedGraph::from_graph(Graph(n_, buffer_));
  for (const auto& slot : levels_) {
    if (slot) acc = add_weighted(acc, *slot);
  }
  return acc;
}

InsertionOnlyResult insertion_only_run(const std::vector<VertexPair>& arrivals, int n, uint64_t seed,
                                       double eps, ClusterBackend backend, const Profile& profile,
                                       int spanner_override, int pivot_tries, const Graph* audit) {
  InsertionOnlyResult result;
  const int stretch = std::max(2, ceil_log2_int(std::max(2, n)));
  const int ell = spanner_override > 0 ? spanner_override : profile.spanner_count(n, eps);
  result.stretch = stretch;
  result.spanner_count = ell;

  GuardedRng guard(seed);  // starts disarmed: the stream phase must not draw

  SpannerSequence spanners(n, ell, stretch);
  DeterministicSparsifyStream det(n, eps);
  std::set<VertexPair> seen;
  std::vector<VertexPair> overflow;
  for (const VertexPair& e : arrivals) {
    if (e.u < 0 || e.v >= n || e.u >= e.v) throw std::invalid_argument("insertion stream: bad pair");
    if (!seen.insert(e).second) throw std::invalid_argument("insertion stream: duplicate edge");
    if (spanners.insert(e) < 0) {
      overflow.push_back(e);
      det.insert(e);
    }
  }
  result.overflow_count = static_cast<int64_t>(overflow.size());
  result.reduction_shortfall = det.reduction_shortfall();

  const WeightedGraph leftover_sparsifier = det.finish();

  // Canonical state bytes: parameters, every spanner's edge list, the
  // deterministic sparsifier, and the pending buffer implied by it.
  {
    ByteWriter w;
    w.put_u32(static_cast<uint32_t>(n));
    w.put_f64(eps);
    w.put_u32(static_cast<uint32_t>(ell));
    w.put_u32(static_cast<uint32_t>(stretch));
    for (int i = 0; i < ell; ++i) {
      const auto& edges = spanners.spanner_edges()[static_cast<size_t>(i)];
      w.put_u64(edges.size());
      for (const VertexPair& e : edges) {
        w.put_u32(static_cast<uint32_t>(e.u));
        w.put_u32(static_cast<uint32_t>(e.v));
      }
    }
    w.put_u64(static_cast<uint64_t>(leftover_sparsifier.edge_count()));
    for (const auto& [e, wt] : leftover_sparsifier.entries()) {
      w.put_u32(static_cast<uint32_t>(e.u));
      w.put_u32(static_cast<uint32_t>(e.v));
      w.put_f64(wt);
    }
    result.state_digest = sha256_hex(w.take());
  }
  result.stream_phase_draws = guard.draws();

  const Graph spanner_union = spanners.union_graph();
  if (!overflow.empty()) {
    const Eigen::MatrixXd er = effective_resistance_matrix(WeightedGraph::from_graph(spanner_union));
    for (const VertexPair& e : overflow) {
      result.max_overflow_resistance = std::max(result.max_overflow_resistance, er(e.u, e.v));
    }
  }

  guard.arm();  // recovery phase may draw

  DesparsifyResult pipeline;
  pipeline.eps = eps;
  pipeline.declared_band = 5.0 * eps;
  pipeline.target_edge_count = static_cast<int64_t>(arrivals.size());
  const int64_t leftover_count = static_cast<int64_t>(overflow.size());

  Graph filled(n);
  if (leftover_count > 0) {
    // Support: pairs outside the spanner union whose resistance across it is
    // at most stretch/ell, kept inside the sparsifier's components so the
    // feasible region stays full-dimensional in the weight slab.
    const Eigen::MatrixXd er = effective_resistance_matrix(WeightedGraph::from_graph(spanner_union));
    const double er_cap = static_cast<double>(stretch) / static_cast<double>(ell);
    std::vector<int> comp(static_cast<size_t>(n), -1);
    {
      const auto comps = connected_components(leftover_sparsifier);
      for (size_t c = 0; c < comps.size(); ++c) {
        for (int v : comps[c]) comp[static_cast<size_t>(v)] = static_cast<int>(c);
      }
    }
    std::vector<VertexPair> support;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (spanner_union.has_edge(u, v)) continue;
        if (comp[static_cast<size_t>(u)] != comp[static_cast<size_t>(v)]) continue;
        if (er(u, v) <= er_cap + 1e-12) support.push_back(VertexPair::of(u, v));
      }
    }

    ProgramSpec spec;
    spec.n = n;
    spec.target = leftover_sparsifier;
    spec.offset = WeightedGraph(n);
    spec.support = support;
    spec.total_weight = static_cast<double>(leftover_count);
    spec.eps = eps;
    const EllipsoidReport report = ellipsoid_feasibility(spec);
    pipeline.ellipsoid_iterations = report.iterations;
    if (!report.feasible) {
      throw std::runtime_error("insertion-only recovery: " + report.status);
    }
    const RoundingResult rounded = round_exact_weight(report.point, leftover_count, guard.fork(1));
    pipeline.rounding_attempts = rounded.attempts;
    filled = rounded.graph;
  }

  pipeline.graph = union_graphs(filled, spanner_union);
  result.pipeline = std::move(pipeline);

  const Graph& recovered = result.pipeline.graph;
  if (backend == ClusterBackend::kPivot) {
    result.clustering = pivot_cc_best_of(recovered, guard.fork(2), pivot_tries);
  } else {
    result.clustering = brute_force_cc(recovered);
  }
  if (audit != nullptr) {
    if (audit->vertex_count() != n) throw std::invalid_argument("insertion_only_run: audit vertex mismatch");
    result.audit_cost = cc_cost(*audit, result.clustering.partition);
  }
  return result;
}

}  // namespace dsp

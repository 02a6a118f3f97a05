#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "desparsify/cluster.hpp"
#include "desparsify/graph.hpp"
#include "desparsify/io.hpp"
#include "desparsify/pipeline.hpp"
#include "desparsify/profile.hpp"
#include "desparsify/sketches.hpp"

namespace dsp {

// Canonical derivation of the recovery-phase rng from a shared seed; every
// harness and the CLI use it, so equal seeds give equal recoveries.
Rng recovery_rng(uint64_t seed);

// Invalid stream transition (duplicate insert or delete of an absent edge).
struct StreamError : std::runtime_error {
  size_t position;
  StreamError(const std::string& what, size_t pos) : std::runtime_error(what), position(pos) {}
};

struct StreamAudit {
  int64_t events = 0;
  bool suite_matches_offline = false;  // byte equality against a one-shot sketch of the net graph
  std::string suite_digest;            // sha256 of the maintained suite's serialization
};

struct DynamicStreamResult {
  SketchClusterResult outcome;
  StreamAudit audit;
  Graph final_graph = Graph(0);  // net graph implied by the stream
};

// Maintains the sketch suite across an insert/delete edge stream (validating
// that every prefix is a simple graph), then de-sparsifies and clusters from
// the sketch alone. The audit compares the maintained suite byte-for-byte
// with a one-shot sketch of the final graph.
DynamicStreamResult dynamic_stream_run(const std::vector<StreamEvent>& events, int n, uint64_t seed,
                                       double eps, double lambda, ClusterBackend backend,
                                       const Profile& profile = Profile::desk(), int pivot_tries = 1,
                                       const Graph* audit = nullptr);

struct DistributedResult {
  SketchClusterResult outcome;
  std::vector<int64_t> machine_bytes;  // sketch bytes each machine ships to the coordinator
  int64_t broadcast_bytes = 0;         // seed bytes the coordinator sends out
  bool suite_matches_offline = false;
  Graph union_graph = Graph(0);
};

// Coordinator model: one shared seed broadcast, every machine sketches its
// own edge set, the coordinator merges the sketches by linearity and runs the
// recovery. Machine edge sets must be disjoint and union to a simple graph.
DistributedResult distributed_run(const std::vector<std::vector<VertexPair>>& machine_edges, int n,
                                  uint64_t seed, double eps, double lambda, ClusterBackend backend,
                                  const Profile& profile = Profile::desk(), int pivot_tries = 1,
                                  const Graph* audit = nullptr);

struct MpcResult {
  SketchClusterResult outcome;
  int rounds = 0;
  std::vector<int64_t> round1_bytes;  // bytes sent by each source machine
  std::vector<int64_t> round2_bytes;  // bytes sent by each vertex owner
  int64_t max_message_bytes = 0;      // largest single machine-to-machine message
  int64_t message_cap = 0;
  bool cap_respected = false;
  bool suite_matches_offline = false;
  Graph union_graph = Graph(0);
};

// Two-round vertex-partition simulation: round one ships per-vertex sketch
// slices to the vertex's owner (v mod k), round two ships the aggregated
// slices to machine zero, which reassembles the full suite and recovers.
// All-zero slices are skipped, mirroring a sparse encoding. When message_cap
// is zero it defaults to the full suite size plus a small margin.
MpcResult mpc_run(const std::vector<std::vector<VertexPair>>& machine_edges, int n, uint64_t seed,
                  double eps, double lambda, ClusterBackend backend,
                  const Profile& profile = Profile::desk(), int64_t message_cap = 0, int pivot_tries = 1,
                  const Graph* audit = nullptr);

// Nested greedy spanners: an arriving edge lands in the first spanner where
// its endpoints are at hop distance >= stretch (so every spanner keeps girth
// above the stretch), or overflows when all refuse it.
class SpannerSequence {
 public:
  SpannerSequence(int n, int count, int stretch);

  int insert(VertexPair e);  // spanner index, or -1 on overflow
  int spanner_count() const { return static_cast<int>(edges_.size()); }
  int stretch() const { return stretch_; }
  const std::vector<std::vector<VertexPair>>& spanner_edges() const { return edges_; }
  Graph spanner(int i) const;
  Graph union_graph() const;
  // Hop distance inside spanner i; INT_MAX when disconnected there.
  int distance(int i, int u, int v) const;

 private:
  int n_ = 0;
  int stretch_ = 0;
  std::vector<std::vector<VertexPair>> edges_;
  std::vector<std::vector<std::vector<int>>> adj_;
};

// Deterministic merge-and-reduce sparsifier over an insertion stream: blocks
// of raw edges are folded binary-counter style, each merge reduced back down
// by greedy lowest-leverage edge removal, eigenvalue-verified against the
// merge input within that level's share of the eps budget (sum over levels
// <= eps/2). No randomness anywhere.
class DeterministicSparsifyStream {
 public:
  DeterministicSparsifyStream(int n, double eps, int64_t block_size = 0);  // default max(32, 4n)

  void insert(VertexPair e);
  WeightedGraph finish() const;  // exact fold of all levels plus the buffer
  int64_t inserted() const { return inserted_; }
  int64_t block_size() const { return block_; }
  int level_count() const { return static_cast<int>(levels_.size()); }
  bool reduction_shortfall() const { return shortfall_; }

  // Deterministic reduction primitive, exposed for direct verification:
  // removes edges while an eigenvalue check against `g` stays within
  // eps_budget after optimal uniform rescaling; stops at target_edges or when
  // no removal fits the budget (reported via the shortfall flag).
  static WeightedGraph reduce(const WeightedGraph& g, double eps_budget, int64_t target_edges,
                              bool* shortfall = nullptr);

 private:
  void carry(WeightedGraph block, int level);

  int n_ = 0;
  double eps_ = 0.0;
  int64_t block_ = 0;
  int64_t inserted_ = 0;
  bool shortfall_ = false;
  std::vector<VertexPair> buffer_;
  std::vector<std::optional<WeightedGraph>> levels_;
};

struct InsertionOnlyResult {
  ClusteringResult clustering;
  DesparsifyResult pipeline;
  std::string state_digest;          // sha256 of the canonical deterministic state
  uint64_t stream_phase_draws = 0;   // randomness consumed while streaming; must be 0
  int spanner_count = 0;
  int stretch = 0;
  int64_t overflow_count = 0;
  // Largest effective resistance of an overflow edge across the spanner
  // union; bounded by stretch / spanner_count.
  double max_overflow_resistance = 0.0;
  bool reduction_shortfall = false;
  std::optional<int64_t> audit_cost;
};

// Deterministic-while-streaming pipeline: edges fill the spanner sequence,
// overflow goes to the merge-and-reduce sparsifier, and only the post-stream
// recovery (feasibility program + exact-count rounding + clustering) draws
// randomness, certified by the guarded rng's draw counter.
InsertionOnlyResult insertion_only_run(const std::vector<VertexPair>& arrivals, int n, uint64_t seed,
                                       double eps, ClusterBackend backend,
                                       const Profile& profile = Profile::desk(), int spanner_override = 0,
                                       int pivot_tries = 1, const Graph* audit = nullptr);

}  // namespace dsp

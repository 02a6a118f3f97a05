#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "desparsify/graph.hpp"
#include "desparsify/profile.hpp"
#include "desparsify/serialize.hpp"

namespace dsp {

// Per-vertex message slice of a suite: the vertex's sampler banks, the edge
// multiplicity row for pairs whose smaller endpoint is the vertex, and that
// row's contribution to the edge counter. Slices add entrywise, so a full
// suite can be reassembled from per-vertex pieces aggregated across machines.
struct VertexSlice {
  int v = 0;
  std::vector<int64_t> bank_block;
  std::vector<int64_t> multiplicity_row;
  int64_t count_part = 0;

  std::vector<uint8_t> serialize() const;
  static VertexSlice deserialize(const std::vector<uint8_t>& bytes);
  void add(const VertexSlice& other);
};

// The three linear sketches: per-vertex l0-sampler banks for weak-edge
// recovery, an exact signed multiplicity vector standing in for the
// hash-compressed spectral sketch (same linearity, same recovery contract),
// and a signed edge counter. Everything is a linear function of the edge
// multiset, so updates commute and suites merge entrywise.
class SketchSuite {
 public:
  SketchSuite(uint64_t seed, int n, double eps, double lambda,
              const Profile& profile = Profile::desk());

  static SketchSuite of_graph(const Graph& g, uint64_t seed, double eps, double lambda,
                              const Profile& profile = Profile::desk());

  void update(VertexPair e, int sign);
  void merge(const SketchSuite& other);  // throws on parameter mismatch

  uint64_t seed() const { return seed_; }
  int vertex_count() const { return n_; }
  double eps() const { return eps_; }
  double lambda() const { return lambda_; }
  double phi() const { return phi_; }
  int64_t edge_count() const { return count_; }

  // Bank geometry: forests x rounds x samplers, each with `levels` triples.
  int forests() const { return forests_; }
  int rounds() const { return rounds_; }
  int samplers_per_cell() const { return samplers_; }
  int levels() const { return levels_; }

  std::vector<uint8_t> serialize() const;
  static SketchSuite deserialize(const std::vector<uint8_t>& bytes);

  VertexSlice vertex_slice(int v) const;
  void add_vertex_slice(const VertexSlice& slice);
  size_t vertex_slice_bytes(int v) const;

  bool operator==(const SketchSuite&) const = default;

 private:
  friend struct SuiteAccess;

  uint64_t seed_ = 0;
  int n_ = 0;
  double eps_ = 0.0;
  double lambda_ = 0.0;
  double phi_ = 0.0;
  int forests_ = 0;
  int rounds_ = 0;
  int samplers_ = 0;
  int levels_ = 0;
  std::vector<int64_t> banks_;           // [v][f][r][k][level] -> (sum, index_sum, fingerprint)
  std::vector<int64_t> multiplicities_;  // one signed entry per vertex pair
  int64_t count_ = 0;
};

struct WeakEdgeRecovery {
  std::vector<VertexPair> weak_edges;  // strength <= lambda, from the filtered candidates
  Graph candidate_union = Graph(0);    // union of the peeled spanning forests
  bool complete = false;               // candidate union provably equals the sketched graph
  bool sampler_failure = false;        // some sampler query failed verification
  std::vector<std::string> notes;
};

// Peels spanning forests out of the sampler banks (Boruvka over supernode
// sums, deleting each extracted forest from the remaining banks by linearity),
// then filters the recovered candidate set by exact strength. `complete` holds
// when the candidate union accounts for every sketched edge, which makes the
// filter exact. Requires the sketched multiset to be a simple graph.
WeakEdgeRecovery recover_weak_edges(const SketchSuite& suite);

// Reads the multiplicity vector minus `exclude`, which must leave a 0/1
// vector, and keeps each residual edge when its hash coin clears the
// resistance-proportional rate min(1, phi * R_eff). Kept edges get weight
// 1/p_e, so any edge with R_eff >= 1/phi is returned with weight exactly 1.
// The coin depends only on (seed, pair), never on sketch history.
WeightedGraph recover_spectral(const SketchSuite& suite, const std::vector<VertexPair>& exclude);

}  // namespace dsp

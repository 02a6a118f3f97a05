#include "desparsify/sketches.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include "desparsify/rng.hpp"
#include "desparsify/spectral.hpp"
#include "desparsify/strength.hpp"

namespace dsp {

namespace {

constexpr uint64_t kPrime = (uint64_t{1} << 61) - 1;
constexpr uint64_t kSaltLevels = 0x9c35b1d2e8f46771ull;
constexpr uint64_t kSaltFingerprint = 0x517cc1b727220a95ull;
constexpr uint64_t kSaltRecovery = 0x2545f4914f6cdd1dull;
constexpr int kSamplersPerCell = 3;

uint64_t mulmod(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

uint64_t powmod(uint64_t base, uint64_t exp) {
  uint64_t acc = 1;
  base %= kPrime;
  while (exp > 0) {
    if (exp & 1) acc = mulmod(acc, base);
    base = mulmod(base, base);
    exp >>= 1;
  }
  return acc;
}

uint64_t signed_mod(int64_t v) {
  int64_t r = v % static_cast<int64_t>(kPrime);
  if (r < 0) r += static_cast<int64_t>(kPrime);
  return static_cast<uint64_t>(r);
}

int ceil_log2(int64_t x) {
  int lg = 0;
  while ((int64_t{1} << lg) < x) ++lg;
  return lg;
}

uint64_t cell_key(uint64_t seed, int f, int r, int k) {
  uint64_t h = hash_combine(seed, kSaltLevels);
  h = hash_combine(h, static_cast<uint64_t>(f));
  h = hash_combine(h, static_cast<uint64_t>(r));
  return hash_combine(h, static_cast<uint64_t>(k));
}

// Deepest sampling level that keeps coordinate `idx`: level l keeps it with
// probability 2^-l, realized as "top l bits of the keyed hash are zero".
int coordinate_level(uint64_t cell, int64_t idx, int max_level) {
  uint64_t h = hash_combine(cell, static_cast<uint64_t>(idx));
  int lead = std::countl_zero(h);
  return std::min(lead, max_level);
}

uint64_t fingerprint_base(uint64_t cell) {
  return hash_combine(cell, kSaltFingerprint) % (kPrime - 1) + 1;
}

struct SampleResult {
  enum Kind { kEmpty, kEdge, kFail } kind = kFail;
  int64_t coordinate = -1;
  int64_t value = 0;
};

}  // namespace

SketchSuite::SketchSuite(uint64_t seed, int n, double eps, double lambda, const Profile& profile)
    : seed_(seed), n_(n), eps_(eps), lambda_(lambda) {
  if (n < 1 || n > 128) throw std::invalid_argument("sketch suite: vertex count must be in [1, 128]");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("sketch suite: eps must be in (0, 1)");
  if (!(lambda >= 0.0)) throw std::invalid_argument("sketch suite: lambda must be nonnegative");
  phi_ = profile.phi(n, eps);
  const int lg = std::max(1, ceil_log2(std::max(2, n)));
  forests_ = std::max(1, static_cast<int>(std::ceil(2.0 * lambda * lg)));
  rounds_ = 2 * lg + 4;
  samplers_ = kSamplersPerCell;
  levels_ = ceil_log2(std::max<int64_t>(2, pair_count(n))) + 1;
  banks_.assign(static_cast<size_t>(n_) * forests_ * rounds_ * samplers_ * levels_ * 3, 0);
  multiplicities_.assign(static_cast<size_t>(pair_count(n_)), 0);
}

SketchSuite SketchSuite::of_graph(const Graph& g, uint64_t seed, double eps, double lambda,
                                  const Profile& profile) {
  SketchSuite s(seed, g.vertex_count(), eps, lambda, profile);
  for (const VertexPair& e : g.edges()) s.update(e, +1);
  return s;
}

void SketchSuite::update(VertexPair e, int sign) {
  if (e.u < 0 || e.v >= n_ || e.u >= e.v) throw std::invalid_argument("sketch update: bad vertex pair");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sketch update: sign must be +1 or -1");
  const int64_t idx = pair_index(e, n_);
  const size_t cell_stride = static_cast<size_t>(levels_) * 3;
  for (int f = 0; f < forests_; ++f) {
    for (int r = 0; r < rounds_; ++r) {
      for (int k = 0; k < samplers_; ++k) {
        const uint64_t cell = cell_key(seed_, f, r, k);
        const int top = coordinate_level(cell, idx, levels_ - 1);
        const uint64_t term = mulmod(signed_mod(sign), powmod(fingerprint_base(cell), static_cast<uint64_t>(idx)));
        for (int ep = 0; ep < 2; ++ep) {
          const int v = ep == 0 ? e.u : e.v;
          const int64_t delta = ep == 0 ? sign : -sign;
          size_t base = ((((static_cast<size_t>(v) * forests_ + f) * rounds_ + r) * samplers_ + k)) * cell_stride;
          const uint64_t fp_term = ep == 0 ? term : kPrime - term % kPrime;
          for (int l = 0; l <= top; ++l) {
            banks_[base + 3 * l] += delta;
            banks_[base + 3 * l + 1] += delta * idx;
            banks_[base + 3 * l + 2] =
                static_cast<int64_t>((static_cast<uint64_t>(banks_[base + 3 * l + 2]) + fp_term) % kPrime);
          }
        }
      }
    }
  }
  multiplicities_[static_cast<size_t>(idx)] += sign;
  count_ += sign;
}

void SketchSuite::merge(const SketchSuite& other) {
  if (seed_ != other.seed_ || n_ != other.n_ || eps_ != other.eps_ || lambda_ != other.lambda_ ||
      phi_ != other.phi_) {
    throw std::invalid_argument("sketch merge: parameter mismatch");
  }
  for (size_t i = 0; i < banks_.size(); ++i) {
    if (i % 3 == 2) {
      banks_[i] = static_cast<int64_t>(
          (static_cast<uint64_t>(banks_[i]) + static_cast<uint64_t>(other.banks_[i])) % kPrime);
    } else {
      banks_[i] += other.banks_[i];
    }
  }
  for (size_t i = 0; i < multiplicities_.size(); ++i) multiplicities_[i] += other.multiplicities_[i];
  count_ += other.count_;
}

std::vector<uint8_t> SketchSuite::serialize() const {
  ByteWriter w;
  w.put_u32(0x31535044u);  // "DPS1"
  w.put_u32(1u);
  w.put_u64(seed_);
  w.put_u32(static_cast<uint32_t>(n_));
  w.put_f64(eps_);
  w.put_f64(lambda_);
  w.put_f64(phi_);
  w.put_u32(static_cast<uint32_t>(forests_));
  w.put_u32(static_cast<uint32_t>(rounds_));
  w.put_u32(static_cast<uint32_t>(samplers_));
  w.put_u32(static_cast<uint32_t>(levels_));
  for (int64_t v : banks_) w.put_i64(v);
  for (int64_t v : multiplicities_) w.put_i64(v);
  w.put_i64(count_);
  return w.take();
}

SketchSuite SketchSuite::deserialize(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  if (r.get_u32() != 0x31535044u) throw std::runtime_error("sketch deserialize: bad magic");
  if (r.get_u32() != 1u) throw std::runtime_error("sketch deserialize: unsupported version");
  const uint64_t seed = r.get_u64();
  const int n = static_cast<int>(r.get_u32());
  const double eps = r.get_f64();
  const double lambda = r.get_f64();
  const double phi = r.get_f64();
  SketchSuite s(seed, n, eps, lambda, Profile::desk());
  s.phi_ = phi;
  if (static_cast<uint32_t>(s.forests_) != r.get_u32() || static_cast<uint32_t>(s.rounds_) != r.get_u32() ||
      static_cast<uint32_t>(s.samplers_) != r.get_u32() || static_cast<uint32_t>(s.levels_) != r.get_u32()) {
    throw std::runtime_error("sketch deserialize: geometry mismatch");
  }
  for (int64_t& v : s.banks_) v = r.get_i64();
  for (int64_t& v : s.multiplicities_) v = r.get_i64();
  s.count_ = r.get_i64();
  if (!r.done()) throw std::runtime_error("sketch deserialize: trailing bytes");
  return s;
}

VertexSlice SketchSuite::vertex_slice(int v) const {
  if (v < 0 || v >= n_) throw std::invalid_argument("vertex slice: vertex out of range");
  VertexSlice slice;
  slice.v = v;
  const size_t block = static_cast<size_t>(forests_) * rounds_ * samplers_ * levels_ * 3;
  slice.bank_block.assign(banks_.begin() + static_cast<ptrdiff_t>(v * block),
                          banks_.begin() + static_cast<ptrdiff_t>((v + 1) * block));
  slice.multiplicity_row.reserve(static_cast<size_t>(n_ - 1 - v));
  slice.count_part = 0;
  for (int w = v + 1; w < n_; ++w) {
    const int64_t m = multiplicities_[static_cast<size_t>(pair_index(VertexPair::of(v, w), n_))];
    slice.multiplicity_row.push_back(m);
    slice.count_part += m;
  }
  return slice;
}

void SketchSuite::add_vertex_slice(const VertexSlice& slice) {
  const int v = slice.v;
  if (v < 0 || v >= n_) throw std::invalid_argument("vertex slice: vertex out of range");
  const size_t block = static_cast<size_t>(forests_) * rounds_ * samplers_ * levels_ * 3;
  if (slice.bank_block.size() != block) throw std::invalid_argument("vertex slice: bank block size mismatch");
  if (slice.multiplicity_row.size() != static_cast<size_t>(n_ - 1 - v)) {
    throw std::invalid_argument("vertex slice: multiplicity row size mismatch");
  }
  for (size_t i = 0; i < block; ++i) {
    const size_t at = v * block + i;
    if (i % 3 == 2) {
      banks_[at] = static_cast<int64_t>(
          (static_cast<uint64_t>(banks_[at]) + static_cast<uint64_t>(slice.bank_block[i])) % kPrime);
    } else {
      banks_[at] += slice.bank_block[i];
    }
  }
  for (int w = v + 1; w < n_; ++w) {
    multiplicities_[static_cast<size_t>(pair_index(VertexPair::of(v, w), n_))] +=
        slice.multiplicity_row[static_cast<size_t>(w - v - 1)];
  }
  count_ += slice.count_part;
}

size_t SketchSuite::vertex_slice_bytes(int v) const { return vertex_slice(v).serialize().size(); }

std::vector<uint8_t> VertexSlice::serialize() const {
  ByteWriter w;
  w.put_u32(static_cast<uint32_t>(v));
  w.put_u64(bank_block.size());
  for (int64_t x : bank_block) w.put_i64(x);
  w.put_u64(multiplicity_row.size());
  for (int64_t x : multiplicity_row) w.put_i64(x);
  w.put_i64(count_part);
  return w.take();
}

VertexSlice VertexSlice::deserialize(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  VertexSlice s;
  s.v = static_cast<int>(r.get_u32());
  s.bank_block.resize(r.get_u64());
  for (int64_t& x : s.bank_block) x = r.get_i64();
  s.multiplicity_row.resize(r.get_u64());
  for (int64_t& x : s.multiplicity_row) x = r.get_i64();
  s.count_part = r.get_i64();
  if (!r.done()) throw std::runtime_error("vertex slice deserialize: trailing bytes");
  return s;
}

void VertexSlice::add(const VertexSlice& other) {
  if (v != other.v || bank_block.size() != other.bank_block.size() ||
      multiplicity_row.size() != other.multiplicity_row.size()) {
    throw std::invalid_argument("vertex slice add: shape mismatch");
  }
  for (size_t i = 0; i < bank_block.size(); ++i) {
    if (i % 3 == 2) {
      bank_block[i] = static_cast<int64_t>(
          (static_cast<uint64_t>(bank_block[i]) + static_cast<uint64_t>(other.bank_block[i])) % kPrime);
    } else {
      bank_block[i] += other.bank_block[i];
    }
  }
  for (size_t i = 0; i < multiplicity_row.size(); ++i) multiplicity_row[i] += other.multiplicity_row[i];
  count_part += other.count_part;
}

namespace {

// Working view over a copied bank array during forest peeling.
struct BankView {
  const SketchSuite* suite;
  std::vector<int64_t> data;
  int n, forests, rounds, samplers, levels;
  uint64_t seed;

  size_t cell_base(int v, int f, int r, int k) const {
    return ((((static_cast<size_t>(v) * forests + f) * rounds + r) * samplers + k)) *
           (static_cast<size_t>(levels) * 3);
  }

  // Removes an edge from the banks of forests in [f_from, forests).
  void remove_edge(VertexPair e, int f_from) {
    const int64_t idx = pair_index(e, n);
    for (int f = f_from; f < forests; ++f) {
      for (int r = 0; r < rounds; ++r) {
        for (int k = 0; k < samplers; ++k) {
          const uint64_t cell = cell_key(seed, f, r, k);
          const int top = coordinate_level(cell, idx, levels - 1);
          const uint64_t term =
              mulmod(signed_mod(-1), powmod(fingerprint_base(cell), static_cast<uint64_t>(idx)));
          for (int ep = 0; ep < 2; ++ep) {
            const int v = ep == 0 ? e.u : e.v;
            const int64_t delta = ep == 0 ? -1 : 1;
            const uint64_t fp_term = ep == 0 ? term : kPrime - term % kPrime;
            const size_t base = cell_base(v, f, r, k);
            for (int l = 0; l <= top; ++l) {
              data[base + 3 * l] += delta;
              data[base + 3 * l + 1] += delta * idx;
              data[base + 3 * l + 2] = static_cast<int64_t>(
                  (static_cast<uint64_t>(data[base + 3 * l + 2]) + fp_term) % kPrime);
            }
          }
        }
      }
    }
  }

  SampleResult query(const std::vector<int>& members, int f, int r) const {
    const int64_t max_coord = pair_count(n);
    bool any_nonzero = false;
    for (int k = 0; k < samplers; ++k) {
      const uint64_t cell = cell_key(seed, f, r, k);
      const uint64_t z = fingerprint_base(cell);
      std::vector<int64_t> s0(static_cast<size_t>(levels), 0);
      std::vector<int64_t> s1(static_cast<size_t>(levels), 0);
      std::vector<uint64_t> fp(static_cast<size_t>(levels), 0);
      for (int v : members) {
        const size_t base = cell_base(v, f, r, k);
        for (int l = 0; l < levels; ++l) {
          s0[l] += data[base + 3 * l];
          s1[l] += data[base + 3 * l + 1];
          fp[l] = (fp[l] + static_cast<uint64_t>(data[base + 3 * l + 2])) % kPrime;
        }
      }
      if (s0[0] != 0 || s1[0] != 0 || fp[0] != 0) any_nonzero = true;
      for (int l = 0; l < levels; ++l) {
        if (s0[l] == 0) continue;
        if (s1[l] % s0[l] != 0) continue;
        const int64_t idx = s1[l] / s0[l];
        if (idx < 0 || idx >= max_coord) continue;
        if (coordinate_level(cell, idx, levels - 1) < l) continue;
        if (fp[l] != mulmod(signed_mod(s0[l]), powmod(z, static_cast<uint64_t>(idx)))) continue;
        return SampleResult{SampleResult::kEdge, idx, s0[l]};
      }
    }
    if (!any_nonzero) return SampleResult{SampleResult::kEmpty, -1, 0};
    return SampleResult{SampleResult::kFail, -1, 0};
  }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<size_t>(a)] = b;
    return true;
  }
};

struct SuiteFields {
  uint64_t seed;
  int n, forests, rounds, samplers, levels;
  const std::vector<int64_t>* banks;
  const std::vector<int64_t>* multiplicities;
  int64_t count;
  double lambda, phi;
};

}  // namespace

// Internal accessor kept out of the public header.
struct SuiteAccess {
  static SuiteFields fields(const SketchSuite& s) {
    return SuiteFields{s.seed_,     s.n_,     s.forests_,         s.rounds_,
                       s.samplers_, s.levels_, &s.banks_,          &s.multiplicities_,
                       s.count_,    s.lambda_, s.phi_};
  }
};

WeakEdgeRecovery recover_weak_edges(const SketchSuite& suite) {
  const SuiteFields f = SuiteAccess::fields(suite);
  WeakEdgeRecovery out;
  BankView view{&suite, *f.banks, f.n, f.forests, f.rounds, f.samplers, f.levels, f.seed};

  std::set<VertexPair> collected;
  int64_t missed_queries = 0;
  for (int forest = 0; forest < f.forests; ++forest) {
    UnionFind uf(f.n);
    std::vector<char> finished(static_cast<size_t>(f.n), 0);  // indexed by root
    std::vector<VertexPair> forest_edges;
    bool all_done = false;
    for (int round = 0; round < f.rounds && !all_done; ++round) {
      std::vector<std::vector<int>> members(static_cast<size_t>(f.n));
      for (int v = 0; v < f.n; ++v) members[static_cast<size_t>(uf.find(v))].push_back(v);
      std::vector<VertexPair> found;
      all_done = true;
      for (int root = 0; root < f.n; ++root) {
        if (members[static_cast<size_t>(root)].empty() || finished[static_cast<size_t>(root)]) continue;
        const SampleResult res = view.query(members[static_cast<size_t>(root)], forest, round);
        if (res.kind == SampleResult::kEmpty) {
          finished[static_cast<size_t>(root)] = 1;
          continue;
        }
        all_done = false;
        if (res.kind == SampleResult::kFail) {
          // No level of this cell verified as one-sparse. That is the ordinary
          // failure mode of a subsampling sketch; a later round retries the
          // supernode with fresh hash material, and final completeness is
          // certified against the edge counter, not against per-query luck.
          ++missed_queries;
          continue;
        }
        if (res.value != 1 && res.value != -1) {
          out.sampler_failure = true;
          out.notes.push_back("forest " + std::to_string(forest) + ": non-unit multiplicity recovered");
          continue;
        }
        const VertexPair e = pair_from_index(res.coordinate, f.n);
        const bool u_in = uf.find(e.u) == root;
        const bool v_in = uf.find(e.v) == root;
        if (u_in == v_in) {
          out.sampler_failure = true;
          out.notes.push_back("forest " + std::to_string(forest) + ": recovered pair does not cross supernode");
          continue;
        }
        found.push_back(e);
      }
      for (const VertexPair& e : found) {
        if (uf.unite(e.u, e.v)) forest_edges.push_back(e);
      }
      // Merged supernodes get fresh roots; carry the finished marks forward.
      std::vector<char> next(static_cast<size_t>(f.n), 0);
      for (int root = 0; root < f.n; ++root) {
        if (finished[static_cast<size_t>(root)]) next[static_cast<size_t>(uf.find(root))] |= 1;
      }
      // A finished supernode that absorbed a merge may have crossing edges again.
      for (const VertexPair& e : found) next[static_cast<size_t>(uf.find(e.u))] = 0;
      finished = std::move(next);
    }
    bool fresh = false;
    for (const VertexPair& e : forest_edges) {
      if (collected.insert(e).second) {
        fresh = true;
      } else {
        out.sampler_failure = true;
        out.notes.push_back("duplicate edge recovered across forests");
      }
      view.remove_edge(e, forest + 1);
    }
    if (!fresh && all_done) break;  // residual multiset is exhausted
  }

  std::vector<VertexPair> edges(collected.begin(), collected.end());
  out.candidate_union = Graph(f.n, edges);
  // Every collected edge passed fingerprint verification against the residual
  // state, so matching the overall edge counter certifies exact recovery.
  out.complete = !out.sampler_failure && out.candidate_union.edge_count() == f.count;
  if (missed_queries > 0) {
    out.notes.push_back(std::to_string(missed_queries) + " sampler queries missed and were retried");
  }
  if (!out.complete) {
    out.notes.push_back("candidate union has " + std::to_string(out.candidate_union.edge_count()) +
                        " edges, sketch counter says " + std::to_string(f.count));
  }
  const auto strengths = edge_strengths(out.candidate_union);
  for (const auto& [e, s] : strengths) {
    if (s <= f.lambda + 1e-12) out.weak_edges.push_back(e);
  }
  return out;
}

WeightedGraph recover_spectral(const SketchSuite& suite, const std::vector<VertexPair>& exclude) {
  const SuiteFields f = SuiteAccess::fields(suite);
  std::vector<int64_t> residual = *f.multiplicities;
  for (const VertexPair& e : exclude) {
    if (e.u < 0 || e.v >= f.n || e.u >= e.v) throw std::invalid_argument("recover_spectral: bad excluded pair");
    residual[static_cast<size_t>(pair_index(e, f.n))] -= 1;
  }
  std::vector<VertexPair> edges;
  for (int64_t i = 0; i < pair_count(f.n); ++i) {
    const int64_t m = residual[static_cast<size_t>(i)];
    if (m == 0) continue;
    if (m != 1) {
      throw std::runtime_error("recover_spectral: residual multiplicities are not 0/1; "
                               "the sketched multiset minus exclusions is not a simple graph");
    }
    edges.push_back(pair_from_index(i, f.n));
  }
  const Graph residual_graph(f.n, edges);
  const Eigen::MatrixXd er = effective_resistance_matrix(WeightedGraph::from_graph(residual_graph));
  const uint64_t material = hash_combine(f.seed, kSaltRecovery);
  std::vector<std::pair<VertexPair, double>> kept;
  for (const VertexPair& e : edges) {
    const double r = er(e.u, e.v);
    const double p = std::min(1.0, f.phi * r);
    const double coin = unit_from_hash(hash_combine(material, static_cast<uint64_t>(pair_index(e, f.n))));
    if (coin < p) kept.push_back({e, 1.0 / p});
  }
  return WeightedGraph(f.n, kept);
}

}  // namespace dsp

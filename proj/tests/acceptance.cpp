// Acceptance harness: one verdict line per criterion, exit 0 only when all
// thirteen hold. Every tolerance and trial count is pinned here, next to the
// check it gates.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "desparsify/cluster.hpp"
#include "desparsify/graph.hpp"
#include "desparsify/harness.hpp"
#include "desparsify/pipeline.hpp"
#include "desparsify/profile.hpp"
#include "desparsify/program.hpp"
#include "desparsify/rng.hpp"
#include "desparsify/sketches.hpp"
#include "desparsify/spectral.hpp"
#include "desparsify/strength.hpp"
#include "test_support.hpp"

using namespace dsp;
using namespace dsp::testing;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

// All restricted-growth strings of length n, i.e. every set partition.
std::vector<std::vector<int>> all_partition_labels(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(static_cast<size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int max_used) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (int c = 0; c <= max_used + 1; ++c) {
      labels[static_cast<size_t>(i)] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  rec(0, -1);
  return out;
}

// ---------------------------------------------------------------------------
// 1. Clustering-cost identity: the cut formulation equals the direct count,
//    exhaustively for n <= 6 and on 10^4 random (graph, partition) pairs.
Verdict criterion_1() {
  int64_t checked = 0;
  for (int n = 1; n <= 6; ++n) {
    const std::vector<std::vector<int>> parts = all_partition_labels(n);
    std::vector<Partition> partitions;
    partitions.reserve(parts.size());
    for (const auto& labels : parts) partitions.emplace_back(Partition::from_labels(n, labels));
    const int64_t masks = int64_t{1} << pair_count(n);
    for (int64_t mask = 0; mask < masks; ++mask) {
      std::vector<VertexPair> edges;
      for (int64_t b = 0; b < pair_count(n); ++b) {
        if (mask >> b & 1) edges.push_back(pair_from_index(b, n));
      }
      const Graph g(n, edges);
      for (const Partition& p : partitions) {
        const double via_cuts = cc_via_cuts(g, p);
        const int64_t direct = cc_cost(g, p);
        if (via_cuts != static_cast<double>(direct)) {
          return {false, "identity broke at n=" + std::to_string(n) +
                             " mask=" + std::to_string(mask)};
        }
        ++checked;
      }
    }
  }
  Rng rng(20260819);
  for (int t = 0; t < 10000; ++t) {
    const int n = 2 + static_cast<int>(rng.next_below(11));  // 2..12
    Graph g = gnp(n, 0.2 + 0.6 * rng.next_unit(), rng);
    const Partition p = random_partition(n, rng);
    if (cc_via_cuts(g, p) != static_cast<double>(cc_cost(g, p))) {
      return {false, "identity broke on random trial " + std::to_string(t)};
    }
    ++checked;
  }
  return {true, std::to_string(checked) + " exact matches, zero tolerance"};
}

// ---------------------------------------------------------------------------
// 2. Clustering costs transfer across verified TWP cut sparsifiers:
//    |CC_H - CC_G| <= 2 eps CC_G + 1e-6 on 50 verified pairs x 200 partitions.
//    H must be a genuinely weighted graph, never a verbatim copy of G.
Verdict criterion_2() {
  Rng rng(471);
  int sparser_support = 0;  // pairs where H dropped at least one edge of G
  for (int inst = 0; inst < 50; ++inst) {
    const double eps = (inst % 2 == 0) ? 0.1 : 0.3;
    const int n = 8 + static_cast<int>(rng.next_below(5));  // 8..12
    Graph g = (inst % 3 == 0) ? clique_union({n / 2, n - n / 2}, 1 + static_cast<int>(rng.next_below(2)))
                              : gnp_connected(n, 0.55, rng);
    const double m = static_cast<double>(g.edge_count());

    WeightedGraph h(0);
    bool verified = false;
    // At the wide band, resistance subsampling (keep probability well under 1)
    // produces reweighted sparser-support candidates; retries absorb the
    // rejection rate of the honest verifier.
    if (eps > 0.2) {
      for (int attempt = 0; attempt < 600 && !verified; ++attempt) {
        WeightedGraph sample = er_sample_sparsifier(g, 1.0, 0.85, rng);
        if (sample.edge_count() == 0 || sample.edge_count() == g.edge_count()) continue;
        sample = rescale_total(sample, m);
        if (is_cut_sparsifier_bruteforce(sample, g, eps).ok) {
          h = sample;
          verified = true;
          ++sparser_support;
        }
      }
    }
    // At the tight band (and as the wide-band fallback): jitter every weight
    // and renormalize to the exact total, then verify. Same support, but the
    // weights are all strictly off 1.
    for (int attempt = 0; attempt < 600 && !verified; ++attempt) {
      std::vector<std::pair<VertexPair, double>> entries;
      for (const VertexPair& e : g.edges()) {
        entries.push_back({e, 1.0 + (eps > 0.2 ? 0.22 : 0.07) * (2.0 * rng.next_unit() - 1.0)});
      }
      WeightedGraph jittered = rescale_total(WeightedGraph(g.vertex_count(), entries), m);
      if (is_cut_sparsifier_bruteforce(jittered, g, eps).ok) {
        h = jittered;
        verified = true;
      }
    }
    if (!verified) {
      return {false, "instance " + std::to_string(inst) + ": no verified weighted sparsifier found"};
    }
    if (std::abs(h.total_weight() - m) > 1e-9) {
      return {false, "instance " + std::to_string(inst) + ": total weight drifted"};
    }
    bool all_unit = h.edge_count() == g.edge_count();
    for (const auto& entry : h.entries()) {
      if (entry.second != 1.0) all_unit = false;
    }
    if (all_unit) {
      return {false, "instance " + std::to_string(inst) + ": H degenerated to G"};
    }

    for (int t = 0; t < 200; ++t) {
      const Partition p = random_partition(g.vertex_count(), rng);
      const double cc_g = static_cast<double>(cc_cost(g, p));
      const double cc_h = cc_via_cuts(h, p);
      if (std::abs(cc_h - cc_g) > 2.0 * eps * cc_g + 1e-6) {
        return {false, "transfer bound failed on instance " + std::to_string(inst)};
      }
    }
  }
  return {true, "50 weighted verified pairs (" + std::to_string(sparser_support) +
                    " with sparser support) x 200 partitions within 2*eps*CC+1e-6"};
}

// ---------------------------------------------------------------------------
// 3. Fractional recovery: the ellipsoid point passes an independent oracle
//    re-check at the full band and meets the weight budget to 1e-9.
Verdict criterion_3() {
  Rng rng(1031);
  const double eps = 0.3;
  int64_t total_iterations = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::vector<std::vector<int>> shapes = {{4, 4, 4}, {5, 4}, {6, 5}, {4, 3, 3}, {12}};
    const std::vector<int>& shape = shapes[static_cast<size_t>(inst) % shapes.size()];
    int n = 0;
    for (int s : shape) n += s;
    const Graph g = shape.size() == 1 ? clique(shape[0])
                                      : clique_union(shape, 1 + static_cast<int>(rng.next_below(2)));
    const double m = static_cast<double>(g.edge_count());

    // A verified tight spectral sparsifier keeps the indicator interior:
    // 0.2 / (1 - 0.2) = 0.25 <= 0.99 * 0.3.
    WeightedGraph h(0);
    for (int attempt = 0;; ++attempt) {
      WeightedGraph sample = rescale_total(er_sample_sparsifier(g, 1.1, 2.0, rng), m);
      if (sample.edge_count() > 0 && is_spectral_sparsifier(sample, g, 0.2).ok) {
        h = sample;
        break;
      }
      if (attempt >= 400) {
        h = WeightedGraph::from_graph(g);
        break;
      }
    }

    ProgramSpec spec;
    spec.n = g.vertex_count();
    spec.target = h;
    spec.support = within_component_pairs(h, WeightedGraph(spec.n));
    spec.total_weight = m;
    spec.eps = eps;
    const EllipsoidReport report = ellipsoid_feasibility(spec);
    if (!report.feasible) {
      return {false, "instance " + std::to_string(inst) + " infeasible: " + report.status};
    }
    total_iterations += report.iterations;

    // Independent re-check: a fresh oracle, the full band, the exact total.
    const SeparationOracle oracle(spec);
    if (!oracle.check(report.point, eps).ok) {
      return {false, "instance " + std::to_string(inst) + " failed the oracle re-check"};
    }
    if (std::abs(report.point.total() - m) > 1e-9) {
      return {false, "instance " + std::to_string(inst) + " missed the weight budget"};
    }
  }
  return {true, "20 instances feasible, re-checked at (1±0.3), |sum-m| <= 1e-9, " +
                    std::to_string(total_iterations) + " total ellipsoid steps"};
}

// ---------------------------------------------------------------------------
// 4. Bernoulli rounding concentration at n = 14: every one of the 2^13 - 1
//    cuts within (1 ± 0.9) of its fractional value on >= 95 of 100 seeds.
Verdict criterion_4() {
  const int n = 14;
  const double band = 0.9;
  const double mincut_floor = 2.0 * std::log(14.0) / (band * band);  // desk c_round = 2

  Rng rng(77);
  FractionalGraph f;
  f.n = n;
  for (int64_t i = 0; i < pair_count(n); ++i) f.support.push_back(pair_from_index(i, n));
  f.values.assign(f.support.size(), 0.0);
  double sum = 0.0;
  for (double& v : f.values) {
    v = 0.55 + 0.30 * rng.next_unit();
    sum += v;
  }
  // Shave the excess over the floor integer off a few coordinates.
  double excess = sum - std::floor(sum);
  for (double& v : f.values) {
    const double cut = std::min(excess, v - 0.55);
    v -= cut;
    excess -= cut;
    if (excess <= 0) break;
  }

  std::vector<std::pair<VertexPair, double>> entries;
  for (size_t i = 0; i < f.support.size(); ++i) entries.push_back({f.support[i], f.values[i]});
  const WeightedGraph fractional(n, entries);
  if (mincut(fractional).value < mincut_floor) {
    return {false, "construction bug: fractional mincut under the threshold"};
  }

  // Fractional cut values, one per mask with vertex 13 pinned.
  const int64_t masks = int64_t{1} << (n - 1);
  std::vector<double> frac_cut(static_cast<size_t>(masks), 0.0);
  for (size_t i = 0; i < f.support.size(); ++i) {
    const VertexPair e = f.support[i];
    for (int64_t mask = 1; mask < masks; ++mask) {
      const bool su = e.u < n - 1 ? (mask >> e.u & 1) : false;
      const bool sv = e.v < n - 1 ? (mask >> e.v & 1) : false;
      if (su != sv) frac_cut[static_cast<size_t>(mask)] += f.values[i];
    }
  }

  int good_seeds = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng round_rng(hash_combine(9000, seed));
    const Graph rounded = round_bernoulli(f, round_rng);
    std::vector<double> cut(static_cast<size_t>(masks), 0.0);
    for (const VertexPair& e : rounded.edges()) {
      for (int64_t mask = 1; mask < masks; ++mask) {
        const bool su = e.u < n - 1 ? (mask >> e.u & 1) : false;
        const bool sv = e.v < n - 1 ? (mask >> e.v & 1) : false;
        if (su != sv) cut[static_cast<size_t>(mask)] += 1.0;
      }
    }
    bool ok = true;
    for (int64_t mask = 1; mask < masks && ok; ++mask) {
      const double fc = frac_cut[static_cast<size_t>(mask)];
      ok = cut[static_cast<size_t>(mask)] >= (1.0 - band) * fc &&
           cut[static_cast<size_t>(mask)] <= (1.0 + band) * fc;
    }
    good_seeds += ok ? 1 : 0;
  }
  if (good_seeds < 95) {
    return {false, "only " + std::to_string(good_seeds) + "/100 seeds kept all cuts in band"};
  }
  return {true, std::to_string(good_seeds) + "/100 seeds kept all 8191 cuts within (1±0.9)"};
}

// ---------------------------------------------------------------------------
// 5. Exact-count success rate: empirical per-attempt frequency of hitting the
//    integer total is at least 1/(d+1) minus three Wilson sigmas.
Verdict criterion_5() {
  Rng rng(555);
  std::string detail;
  for (const int d : {3, 10, 25, 50}) {
    FractionalGraph f;
    f.n = 16;  // any n large enough to host d pairs
    for (int64_t i = 0; i < d; ++i) f.support.push_back(pair_from_index(i, 16));
    int64_t target = 0;
    for (int attempt = 0;; ++attempt) {
      f.values.clear();
      double sum = 0.0;
      for (int i = 0; i < d - 1; ++i) {
        f.values.push_back(rng.next_unit());
        sum += f.values.back();
      }
      const double rest = std::round(sum + 0.5) - sum;  // aim at a nearby integer
      if (rest >= 0.0 && rest <= 1.0) {
        f.values.push_back(rest);
        target = static_cast<int64_t>(std::llround(sum + rest));
        break;
      }
      if (attempt > 1000) return {false, "failed to build an integer-sum vector"};
    }

    const int64_t trials = 25000;
    int64_t hits = 0;
    for (int64_t t = 0; t < trials; ++t) {
      if (round_bernoulli(f, rng).edge_count() == target) ++hits;
    }
    const double phat = static_cast<double>(hits) / static_cast<double>(trials);
    const double p0 = 1.0 / (d + 1);
    const double sigma = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(trials));
    if (phat < p0 - 3.0 * sigma) {
      return {false, "d=" + std::to_string(d) + ": rate " + std::to_string(phat) +
                         " under 1/(d+1) - 3 sigma"};
    }
    detail += (detail.empty() ? "" : ", ") + std::string("d=") + std::to_string(d) + ":" +
              std::to_string(phat).substr(0, 6);
  }
  return {true, "per-attempt rates clear 1/(d+1)-3sigma at 25k trials each (" + detail + ")"};
}

// ---------------------------------------------------------------------------
// 6. End-to-end cut pipeline on three bridged cliques (n = 16, eps = 0.3):
//    simple output, exactly m edges, brute-force cuts within (1 ± 1.5),
//    on >= 95 of 100 sketch seeds.
Verdict criterion_6() {
  const Graph g = clique_union({6, 5, 5}, 3);
  const double eps = 0.3;
  const Profile profile = Profile::desk();
  const double lambda = profile.lambda(g.vertex_count(), eps);
  int good = 0;
  int retries = 0;
  for (uint64_t seed = 1; seed <= 100; ++seed) {
    try {
      const SketchSuite suite = SketchSuite::of_graph(g, seed, eps, lambda, profile);
      const DesparsifyResult r = desparsify_from_sketch(suite, recovery_rng(seed), profile);
      const bool edges_ok = r.graph.edge_count() == g.edge_count();
      const bool cuts_ok =
          is_cut_sparsifier_bruteforce(WeightedGraph::from_graph(r.graph), g, 5.0 * eps).ok;
      good += (edges_ok && cuts_ok) ? 1 : 0;
    } catch (const SketchRetry&) {
      ++retries;  // an uncertified sketch counts against the seed
    }
  }
  if (good < 95) {
    return {false, "only " + std::to_string(good) + "/100 seeds passed (" +
                       std::to_string(retries) + " sketch retries)"};
  }
  return {true, std::to_string(good) + "/100 seeds: simple, m edges, cuts within (1±1.5)"};
}

// ---------------------------------------------------------------------------
// 7. Clustering chain: pivot best-of-16 through the sketch pipeline lands
//    within 3 (1 + 2 eps)^2 OPT + 1e-9 of brute force on >= 95% of instances.
Verdict criterion_7() {
  Rng rng(731);
  const double eps = 0.3;
  const Profile profile = Profile::desk();
  const double factor = 3.0 * (1.0 + 2.0 * eps) * (1.0 + 2.0 * eps);
  int good = 0;
  const int instances = 30;
  for (int inst = 0; inst < instances; ++inst) {
    const int n = 5 + static_cast<int>(rng.next_below(5));  // 5..9
    const Graph g = gnp(n, 0.3 + 0.4 * rng.next_unit(), rng);
    const int64_t opt = brute_force_cc(g).cost;
    const uint64_t seed = 4000 + static_cast<uint64_t>(inst);
    try {
      const SketchSuite suite =
          SketchSuite::of_graph(g, seed, eps, profile.lambda(n, eps), profile);
      const SketchClusterResult r = cluster_from_sketch(suite, ClusterBackend::kPivot,
                                                        recovery_rng(seed), profile, 16, &g);
      if (!r.audit_cost) return {false, "missing audit cost"};
      if (static_cast<double>(*r.audit_cost) <=
          factor * static_cast<double>(opt) + 1e-9) {
        ++good;
      }
    } catch (const SketchRetry&) {
      // counts against the instance
    }
  }
  if (good * 100 < instances * 95) {
    return {false, "only " + std::to_string(good) + "/" + std::to_string(instances) +
                       " instances within the chained factor"};
  }
  return {true, std::to_string(good) + "/30 instances within 3(1+2eps)^2 OPT"};
}

// ---------------------------------------------------------------------------
// 8. Sketch linearity: random update/delete/merge schedules agree byte-exactly
//    with the one-shot sketch of the net graph, 1000 times.
Verdict criterion_8() {
  Rng rng(88);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(19));  // 2..20
    const double eps = 0.2 + 0.6 * rng.next_unit();
    const double lambda = 1.0 + 3.0 * rng.next_unit();
    const uint64_t seed = rng.next_u64();

    SketchSuite a(seed, n, eps, lambda);
    SketchSuite b(seed, n, eps, lambda);
    std::set<VertexPair> in_a, in_b;
    const int ops = 1 + static_cast<int>(rng.next_below(40));
    for (int op = 0; op < ops; ++op) {
      const bool to_a = rng.next_unit() < 0.5;
      SketchSuite& suite = to_a ? a : b;
      std::set<VertexPair>& present = to_a ? in_a : in_b;
      const VertexPair e =
          pair_from_index(static_cast<int64_t>(rng.next_below(static_cast<uint64_t>(pair_count(n)))), n);
      // Keep the union a simple graph: an edge lives in at most one half.
      if (present.count(e)) {
        suite.update(e, -1);
        present.erase(e);
      } else if (!in_a.count(e) && !in_b.count(e)) {
        suite.update(e, +1);
        present.insert(e);
      }
    }
    a.merge(b);
    std::vector<VertexPair> edges(in_a.begin(), in_a.end());
    edges.insert(edges.end(), in_b.begin(), in_b.end());
    std::sort(edges.begin(), edges.end());
    const SketchSuite canonical = SketchSuite::of_graph(Graph(n, edges), seed, eps, lambda);
    if (!(a.serialize() == canonical.serialize())) {
      return {false, "byte mismatch on trial " + std::to_string(trial)};
    }
  }
  return {true, "1000 schedules byte-identical to canonical construction"};
}

// ---------------------------------------------------------------------------
// 9. Model equivalence: dynamic, distributed (4 machines), and MPC (8
//    machines) match the offline suite byte-for-byte and the offline
//    partition exactly, 50 trials; the MPC round counter reads 2 every time.
Verdict criterion_9() {
  Rng rng(99);
  const Profile profile = Profile::desk();
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 8 + static_cast<int>(rng.next_below(9));  // 8..16
    const Graph g = gnp(n, 0.25 + 0.5 * rng.next_unit(), rng);
    const double eps = 0.3;
    const double lambda = profile.lambda(n, eps);
    const uint64_t seed = 500 + static_cast<uint64_t>(trial);

    // Offline reference: one-shot sketch of the whole graph, same seed.
    const SketchSuite offline = SketchSuite::of_graph(g, seed, eps, lambda, profile);
    Partition offline_partition(1, {0});
    bool offline_ok = true;
    try {
      offline_partition = cluster_from_sketch(offline, ClusterBackend::kPivot, recovery_rng(seed),
                                              profile, 1, nullptr)
                              .clustering.partition;
    } catch (const SketchRetry&) {
      offline_ok = false;  // all harnesses must then fail identically, skip trial
    }
    if (!offline_ok) continue;

    std::vector<StreamEvent> events;
    for (const VertexPair& e : g.edges()) events.push_back({e.u, e.v, +1});
    const DynamicStreamResult dyn =
        dynamic_stream_run(events, n, seed, eps, lambda, ClusterBackend::kPivot, profile);
    if (!dyn.audit.suite_matches_offline) return {false, "dynamic suite diverged"};
    if (!(dyn.outcome.clustering.partition == offline_partition)) {
      return {false, "dynamic partition diverged on trial " + std::to_string(trial)};
    }

    std::vector<std::vector<VertexPair>> parts4(4);
    for (size_t i = 0; i < g.edges().size(); ++i) parts4[i % 4].push_back(g.edges()[i]);
    const DistributedResult dist =
        distributed_run(parts4, n, seed, eps, lambda, ClusterBackend::kPivot, profile);
    if (!dist.suite_matches_offline) return {false, "distributed suite diverged"};
    if (!(dist.outcome.clustering.partition == offline_partition)) {
      return {false, "distributed partition diverged on trial " + std::to_string(trial)};
    }

    std::vector<std::vector<VertexPair>> parts8(8);
    for (size_t i = 0; i < g.edges().size(); ++i) parts8[i % 8].push_back(g.edges()[i]);
    const MpcResult mpc =
        mpc_run(parts8, n, seed, eps, lambda, ClusterBackend::kPivot, profile);
    if (mpc.rounds != 2) return {false, "mpc took a round count other than 2"};
    if (!mpc.suite_matches_offline) return {false, "mpc suite diverged"};
    if (!(mpc.outcome.clustering.partition == offline_partition)) {
      return {false, "mpc partition diverged on trial " + std::to_string(trial)};
    }
  }
  return {true, "50 trials x 3 models: byte-identical suites, identical partitions, 2 mpc rounds"};
}

// ---------------------------------------------------------------------------
// 10. Spectral pipeline at eps = 0.4 on K16 and two disjoint K12s: exactly m
//     edges and a spectral verdict at the declared 5 eps band, >= 90/100 seeds.
Verdict criterion_10() {
  const Profile profile = Profile::desk();
  const double eps = 0.4;
  std::string detail;
  const Graph k16 = clique(16);
  std::vector<VertexPair> twin_edges;
  for (int block = 0; block < 2; ++block) {
    for (int u = 0; u < 12; ++u) {
      for (int v = u + 1; v < 12; ++v) {
        twin_edges.push_back(VertexPair::of(12 * block + u, 12 * block + v));
      }
    }
  }
  const Graph twin(24, twin_edges);

  for (const Graph* g : {&k16, &twin}) {
    int good = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
      try {
        const SketchSuite suite =
            SketchSuite::of_graph(*g, seed, eps, profile.lambda(g->vertex_count(), eps), profile);
        const DesparsifyResult r = desparsify_spectral_from_sketch(suite, recovery_rng(seed), profile);
        const bool edges_ok = r.graph.edge_count() == g->edge_count();
        const bool band_ok =
            is_spectral_sparsifier(WeightedGraph::from_graph(r.graph), *g, r.declared_band).ok;
        good += (edges_ok && band_ok) ? 1 : 0;
      } catch (const std::exception&) {
        // sketch retry or infeasible program: counts against the seed
      }
    }
    if (good < 90) {
      return {false, "only " + std::to_string(good) + "/100 seeds on n=" +
                         std::to_string(g->vertex_count())};
    }
    detail += (detail.empty() ? "" : ", ") + std::string("n=") +
              std::to_string(g->vertex_count()) + ":" + std::to_string(good) + "/100";
  }
  return {true, detail + " seeds with m edges inside the declared (1±2.0) band"};
}

// ---------------------------------------------------------------------------
// 11. Insertion-only determinism: replayed streams give identical digests with
//     zero stream-phase draws; spanner stretch is verified by exhaustive BFS;
//     overflow resistances stay under ceil(log2 n) / ell + 1e-6.
Verdict criterion_11() {
  // (a) Digest determinism and the draw counter, on graphs with and without
  // overflow.
  const Graph g16 = clique(16);
  const InsertionOnlyResult a =
      insertion_only_run(g16.edges(), 16, 7, 0.3, ClusterBackend::kPivot, Profile::desk(), 3);
  const InsertionOnlyResult b =
      insertion_only_run(g16.edges(), 16, 7, 0.3, ClusterBackend::kPivot, Profile::desk(), 3);
  const InsertionOnlyResult c =
      insertion_only_run(g16.edges(), 16, 7777, 0.3, ClusterBackend::kPivot, Profile::desk(), 3);
  if (a.state_digest != b.state_digest || a.state_digest != c.state_digest) {
    return {false, "state digest depends on more than the stream"};
  }
  if (a.stream_phase_draws != 0 || c.stream_phase_draws != 0) {
    return {false, "randomness was drawn during the stream phase"};
  }

  // (b) Stretch verification by BFS-APSP over reconstructed spanner sequences.
  Rng rng(1111);
  for (const int n : {16, 64, 96}) {
    const Graph g = n == 16 ? clique(16) : gnp_connected(n, n == 64 ? 0.15 : 0.08, rng);
    const int stretch = std::max(2, static_cast<int>(std::ceil(std::log2(std::max(n, 2)))));
    const int ell = 3;
    SpannerSequence seq(n, ell, stretch);
    std::vector<VertexPair> overflow;
    std::vector<int> home(g.edges().size(), -1);
    for (size_t i = 0; i < g.edges().size(); ++i) {
      home[i] = seq.insert(g.edges()[i]);
      if (home[i] < 0) overflow.push_back(g.edges()[i]);
    }
    // Every edge must be within the stretch in each spanner that refused it.
    for (size_t i = 0; i < g.edges().size(); ++i) {
      const VertexPair e = g.edges()[i];
      const int upto = home[i] < 0 ? ell : home[i];
      for (int s = 0; s < upto; ++s) {
        if (seq.distance(s, e.u, e.v) > stretch) {
          return {false, "stretch bound broke at n=" + std::to_string(n)};
        }
      }
    }
    // Overflow edges: effective resistance over the spanner union, recomputed
    // from scratch, within ceil(log2 n)/ell + 1e-6.
    if (!overflow.empty()) {
      const Eigen::MatrixXd er =
          effective_resistance_matrix(WeightedGraph::from_graph(seq.union_graph()));
      for (const VertexPair& e : overflow) {
        if (er(e.u, e.v) > static_cast<double>(stretch) / ell + 1e-6) {
          return {false, "overflow resistance bound broke at n=" + std::to_string(n)};
        }
      }
    }
  }

  // (c) The harness agrees with the independent recomputation on K16.
  const int stretch16 = 4;
  SpannerSequence check(16, 3, stretch16);
  std::vector<VertexPair> over16;
  for (const VertexPair& e : g16.edges()) {
    if (check.insert(e) < 0) over16.push_back(e);
  }
  const Eigen::MatrixXd er16 =
      effective_resistance_matrix(WeightedGraph::from_graph(check.union_graph()));
  double max_er = 0.0;
  for (const VertexPair& e : over16) max_er = std::max(max_er, er16(e.u, e.v));
  if (std::abs(max_er - a.max_overflow_resistance) > 1e-12) {
    return {false, "harness resistance report disagrees with recomputation"};
  }
  if (static_cast<int64_t>(over16.size()) != a.overflow_count) {
    return {false, "harness overflow count disagrees with recomputation"};
  }
  return {true, "digests replayed, zero stream draws, stretch and resistance bounds verified"};
}

// ---------------------------------------------------------------------------
// 12. Strength peeling equals brute force exactly on 200 random graphs n <= 7.
Verdict criterion_12() {
  Rng rng(1212);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(6));  // 2..7
    const Graph g = gnp(n, 0.2 + 0.6 * rng.next_unit(), rng);
    const std::map<VertexPair, double> peeled = edge_strengths(g);
    for (const VertexPair& e : g.edges()) {
      const double brute = edge_strength_bruteforce(g, e);
      const auto it = peeled.find(e);
      if (it == peeled.end() || std::abs(it->second - brute) > 1e-9) {
        return {false, "strength mismatch on trial " + std::to_string(trial)};
      }
    }
  }
  return {true, "200 graphs, peeling == brute force on every edge"};
}

// ---------------------------------------------------------------------------
// 13. Effective resistance closed forms through the pseudo-inverse.
Verdict criterion_13() {
  const Graph k2(2, {VertexPair{0, 1}});
  if (std::abs(effective_resistance(k2, 0, 1) - 1.0) > 1e-9) {
    return {false, "single edge resistance is not 1"};
  }
  const Graph p4 = path(4);
  if (std::abs(effective_resistance(p4, 0, 3) - 3.0) > 1e-9 ||
      std::abs(effective_resistance(p4, 0, 2) - 2.0) > 1e-9) {
    return {false, "series path resistance does not sum"};
  }
  const Graph tri = clique(3);
  for (const VertexPair& e : tri.edges()) {
    if (std::abs(effective_resistance(tri, e.u, e.v) - 2.0 / 3.0) > 1e-9) {
      return {false, "triangle edge resistance is not 2/3"};
    }
  }
  return {true, "K2 = 1, path sums, triangle edge = 2/3, all within 1e-9"};
}

}  // namespace

int main() {
  struct Item {
    const char* name;
    Verdict (*fn)();
  };
  const std::vector<Item> items = {
      {"clustering-cost identity (exhaustive + random)", criterion_1},
      {"cost transfer across verified TWP cut sparsifiers", criterion_2},
      {"fractional recovery re-checked by the oracle", criterion_3},
      {"bernoulli rounding concentration over all cuts", criterion_4},
      {"exact-count success rate vs 1/(d+1)", criterion_5},
      {"end-to-end cut pipeline on bridged cliques", criterion_6},
      {"clustering chain vs brute-force optimum", criterion_7},
      {"sketch linearity vs canonical construction", criterion_8},
      {"dynamic/distributed/mpc equivalence", criterion_9},
      {"spectral pipeline at the declared band", criterion_10},
      {"insertion-only determinism and spanner bounds", criterion_11},
      {"strength peeling vs brute force", criterion_12},
      {"effective resistance closed forms", criterion_13},
  };

  int failures = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = items[i].fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%2zu/13] %s — %s (%s; %.1fs)\n", i + 1, v.pass ? "PASS" : "FAIL", items[i].name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  if (failures == 0) {
    std::printf("acceptance: all 13 criteria hold\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failing\n", failures);
  return 1;
}

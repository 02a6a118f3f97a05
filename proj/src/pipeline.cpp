#include "desparsify/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "desparsify/program.hpp"
#include "desparsify/spectral.hpp"

namespace dsp {

namespace {

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

WeightedGraph positive_part(const FractionalGraph& f) {
  std::vector<std::pair<VertexPair, double>> entries;
  for (size_t i = 0; i < f.support.size(); ++i) {
    if (f.values[i] > 0.0) entries.push_back({f.support[i], f.values[i]});
  }
  return WeightedGraph(f.n, entries);
}

// Minimum over components (with >= 2 vertices) of the component's mincut;
// +inf when every component is a singleton. Splitting a disconnected graph
// along existing component lines costs nothing, so only intra-component cuts
// constrain the rounding concentration.
double min_positive_cut(const WeightedGraph& g) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& comp : connected_components(g)) {
    if (comp.size() < 2) continue;
    std::vector<int> global_to_local(static_cast<size_t>(g.vertex_count()), -1);
    for (size_t i = 0; i < comp.size(); ++i) global_to_local[static_cast<size_t>(comp[i])] = static_cast<int>(i);
    std::vector<std::pair<VertexPair, double>> entries;
    for (const auto& [e, w] : g.entries()) {
      const int lu = global_to_local[static_cast<size_t>(e.u)];
      const int lv = global_to_local[static_cast<size_t>(e.v)];
      if (lu >= 0 && lv >= 0) entries.push_back({VertexPair::of(lu, lv), w});
    }
    const WeightedGraph local(static_cast<int>(comp.size()), entries);
    best = std::min(best, mincut(local).value);
  }
  return best;
}

void check_rounding_precondition(const FractionalGraph& frac, double eps, const Profile& profile,
                                 DesparsifyResult& result) {
  const WeightedGraph fw = positive_part(frac);
  const double cut = min_positive_cut(fw);
  const double need = profile.rounding_mincut_threshold(frac.n, eps);
  if (cut + 1e-9 < need) {
    result.precondition_ok = false;
    result.notes.push_back("fractional mincut " + std::to_string(cut) + " is below the rounding threshold " +
                           std::to_string(need) + "; the concentration guarantee does not apply");
  }
}

DesparsifyResult run_program_and_round(const WeightedGraph& target, const WeightedGraph& offset,
                                       const std::vector<VertexPair>& support, int64_t fractional_total,
                                       double eps, const Rng& rng, const Profile& profile,
                                       DesparsifyResult result) {
  ProgramSpec spec;
  spec.n = target.vertex_count();
  spec.target = target;
  spec.offset = offset;
  spec.support = support;
  spec.total_weight = static_cast<double>(fractional_total) + offset.total_weight();
  spec.eps = eps;
  const EllipsoidReport report = ellipsoid_feasibility(spec);
  result.ellipsoid_iterations = report.iterations;
  if (!report.feasible) {
    throw std::runtime_error("desparsify: " + report.status);
  }
  check_rounding_precondition(report.point, eps, profile, result);
  if (fractional_total > 0 || !report.point.support.empty()) {
    const RoundingResult rounded = round_exact_weight(report.point, fractional_total, rng);
    result.rounding_attempts = rounded.attempts;
    result.graph = rounded.graph;
  } else {
    result.graph = Graph(target.vertex_count());
  }
  return result;
}

}  // namespace

Graph round_bernoulli(const FractionalGraph& f, Rng& rng) {
  f.validate();
  std::vector<VertexPair> kept;
  for (size_t i = 0; i < f.support.size(); ++i) {
    if (rng.next_unit() < f.values[i]) kept.push_back(f.support[i]);
  }
  return Graph(f.n, kept);
}

RoundingResult round_exact_weight(const FractionalGraph& f, int64_t target_edge_count, const Rng& base,
                                  int64_t max_attempts) {
  f.validate();
  const double total = f.total();
  const int64_t rounded_total = std::llround(total);
  if (std::abs(total - static_cast<double>(rounded_total)) > 1e-6 || rounded_total != target_edge_count) {
    throw std::invalid_argument("round_exact_weight: fractional total must equal the integer target");
  }
  const int64_t n = std::max<int64_t>(f.n, 2);
  const int64_t cap = max_attempts > 0
                          ? max_attempts
                          : std::max<int64_t>(8, std::min<int64_t>(n * n * n, 1000000));
  for (int64_t attempt = 0; attempt < cap; ++attempt) {
    Rng r = base.fork(attempt);
    std::vector<VertexPair> kept;
    for (size_t i = 0; i < f.support.size(); ++i) {
      if (r.next_unit() < f.values[i]) kept.push_back(f.support[i]);
    }
    if (static_cast<int64_t>(kept.size()) == target_edge_count) {
      return {Graph(f.n, kept), attempt + 1};
    }
  }
  throw std::runtime_error("round_exact_weight: attempt budget exhausted without hitting the target count");
}

DesparsifyResult desparsify_cut(const WeightedGraph& h, int64_t m, double eps, const Rng& rng,
                                const Profile& profile) {
  if (m < 0) throw std::invalid_argument("desparsify_cut: negative edge target");
  DesparsifyResult result;
  result.eps = eps;
  result.declared_band = 5.0 * eps;
  result.target_edge_count = m;
  const std::vector<VertexPair> support = within_component_pairs(h, WeightedGraph(h.vertex_count()));
  return run_program_and_round(h, WeightedGraph(h.vertex_count()), support, m, eps, rng, profile,
                               std::move(result));
}

DesparsifyResult desparsify_spectral(const WeightedGraph& h, int64_t m, double eps, const Rng& rng,
                                     const Profile& profile) {
  if (m < 0) throw std::invalid_argument("desparsify_spectral: negative edge target");
  DesparsifyResult result;
  result.eps = eps;
  result.declared_band = 5.0 * eps;
  result.target_edge_count = m;
  // The guarantee wants every pair's resistance in the hidden original below
  // the profile threshold; bound it through the input sparsifier.
  const double need = profile.er_precondition_threshold(h.vertex_count(), eps);
  const Eigen::MatrixXd er = effective_resistance_matrix(h);
  double worst = 0.0;
  for (int u = 0; u < h.vertex_count(); ++u) {
    for (int v = u + 1; v < h.vertex_count(); ++v) worst = std::max(worst, er(u, v));
  }
  const double original_bound = eps < 0.5 ? worst / (1.0 - 2.0 * eps) : std::numeric_limits<double>::infinity();
  if (h.vertex_count() > 1 && !(original_bound <= need + 1e-12)) {
    result.precondition_ok = false;
    result.notes.push_back("all-pairs resistance precondition not verifiable from the input (bound " +
                           std::to_string(original_bound) + " vs threshold " + std::to_string(need) +
                           "); proceeding without the spectral guarantee");
  }
  const std::vector<VertexPair> support = within_component_pairs(h, WeightedGraph(h.vertex_count()));
  return run_program_and_round(h, WeightedGraph(h.vertex_count()), support, m, eps, rng, profile,
                               std::move(result));
}

DesparsifyResult desparsify_from_sketch(const SketchSuite& suite, const Rng& rng, const Profile& profile) {
  DesparsifyResult result;
  result.eps = suite.eps();
  result.declared_band = 5.0 * suite.eps();
  result.target_edge_count = suite.edge_count();

  const WeakEdgeRecovery rec = recover_weak_edges(suite);
  result.sketch_complete = rec.complete;
  for (const std::string& note : rec.notes) result.notes.push_back(note);
  if (!rec.complete) {
    throw SketchRetry("weak-edge recovery could not certify the full edge set; retry with a fresh sketch seed");
  }
  result.weak_edges = rec.weak_edges;

  const int n = suite.vertex_count();
  const int64_t m = suite.edge_count();
  const int64_t strong_count = m - static_cast<int64_t>(rec.weak_edges.size());
  if (strong_count < 0) throw std::logic_error("desparsify_from_sketch: weak edges exceed the edge counter");

  const Graph weak_graph(n, rec.weak_edges);
  if (strong_count == 0) {
    result.graph = weak_graph;
    result.notes.push_back("all edges are weak; they are returned verbatim");
    return result;
  }

  const WeightedGraph remainder = recover_spectral(suite, rec.weak_edges);
  const std::vector<VertexPair> support = within_component_pairs(remainder, WeightedGraph(n));
  try {
    result = run_program_and_round(remainder, WeightedGraph(n), support, strong_count, suite.eps(), rng,
                                   profile, std::move(result));
  } catch (const std::runtime_error& e) {
    throw SketchRetry(std::string("strong-part program failed after sketch recovery: ") + e.what());
  }
  result.graph = union_graphs(result.graph, weak_graph);
  return result;
}

DesparsifyResult desparsify_spectral_from_sketch(const SketchSuite& suite, const Rng& rng,
                                                 const Profile& profile) {
  DesparsifyResult result;
  result.eps = suite.eps();
  result.declared_band = 5.0 * suite.eps();
  result.target_edge_count = suite.edge_count();

  const int n = suite.vertex_count();
  const int64_t m = suite.edge_count();
  const WeightedGraph recovered = recover_spectral(suite, {});

  std::vector<std::pair<VertexPair, double>> forced_entries;
  std::vector<VertexPair> forced_pairs;
  for (const auto& [e, w] : recovered.entries()) {
    if (w == 1.0) {
      forced_entries.push_back({e, 1.0});
      forced_pairs.push_back(e);
    }
  }
  const WeightedGraph forced(n, forced_entries);
  result.weak_edges = forced_pairs;
  const int64_t free_total = m - forced.edge_count();
  if (free_total < 0) {
    throw SketchRetry("resistance-forced edges exceed the edge counter; the sample is inconsistent");
  }

  const Eigen::MatrixXd er = effective_resistance_matrix(recovered);

  // Checkable surrogate of the all-pairs resistance precondition.
  {
    const double need = profile.er_precondition_threshold(n, suite.eps());
    double worst = 0.0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) worst = std::max(worst, er(u, v));
    }
    const double bound =
        suite.eps() < 0.5 ? worst / (1.0 - 2.0 * suite.eps()) : std::numeric_limits<double>::infinity();
    if (n > 1 && !(bound <= need + 1e-12)) {
      result.precondition_ok = false;
      result.notes.push_back("all-pairs resistance precondition not verifiable from the recovered sparsifier; "
                             "proceeding without the spectral guarantee");
    }
  }

  const double ehat = profile.ehat_threshold(n, suite.eps());
  std::vector<VertexPair> support;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (forced.has_edge(u, v)) continue;
      if (er(u, v) <= ehat + 1e-12) support.push_back(VertexPair::of(u, v));
    }
  }

  try {
    result = run_program_and_round(recovered, forced, support, free_total, suite.eps(), rng, profile,
                                   std::move(result));
  } catch (const std::runtime_error& e) {
    throw SketchRetry(std::string("resistance-band program failed after sketch recovery: ") + e.what());
  }
  result.graph = union_graphs(result.graph, forced.support());
  return result;
}

}  // namespace dsp

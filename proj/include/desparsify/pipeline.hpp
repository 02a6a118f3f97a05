#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "desparsify/graph.hpp"
#include "desparsify/profile.hpp"
#include "desparsify/rng.hpp"
#include "desparsify/sketches.hpp"

namespace dsp {

// Raised when sketch recovery cannot certify a complete edge set; callers
// should retry with a fresh sketch seed.
struct SketchRetry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Keeps each support pair independently with probability equal to its value.
Graph round_bernoulli(const FractionalGraph& f, Rng& rng);

struct RoundingResult {
  Graph graph = Graph(0);
  int64_t attempts = 0;
};

// Repeats Bernoulli rounding with per-attempt forks of `base` until the
// sample has exactly `target_edge_count` edges. The fractional total must
// already equal that integer, which puts the mode of the edge-count
// distribution on the target and makes each attempt succeed with probability
// at least 1/(d+1). Throws std::runtime_error when the attempt budget
// (default min(n^3, 10^6), at least 8) is exhausted.
RoundingResult round_exact_weight(const FractionalGraph& f, int64_t target_edge_count,
                                  const Rng& base, int64_t max_attempts = 0);

struct DesparsifyResult {
  Graph graph = Graph(0);
  double eps = 0.0;            // band the feasibility program ran at
  double declared_band = 0.0;  // guarantee band on the graph the input approximated
  int64_t target_edge_count = 0;
  std::vector<VertexPair> weak_edges;   // sketch pipelines: strength-filtered edges kept verbatim
  int64_t ellipsoid_iterations = 0;
  int64_t rounding_attempts = 0;
  bool sketch_complete = true;
  bool precondition_ok = true;  // the checkable part of the guarantee's precondition
  std::vector<std::string> notes;
};

// Weighted (1 +- eps) cut sparsifier with total weight m -> simple unweighted
// (1 +- 5 eps) cut sparsifier with exactly m edges. The model guarantee needs
// every fractional cut to clear the profile's rounding threshold; the checkable
// surrogate (the solved fractional graph's mincut) is reported in
// `precondition_ok` and the run proceeds either way.
DesparsifyResult desparsify_cut(const WeightedGraph& h, int64_t m, double eps, const Rng& rng,
                                const Profile& profile = Profile::desk());

// Same contract for spectral sparsifiers; the guarantee additionally needs
// all-pairs effective resistances below the profile threshold, checked here
// against the input sparsifier (scaled by the band) and reported.
DesparsifyResult desparsify_spectral(const WeightedGraph& h, int64_t m, double eps, const Rng& rng,
                                     const Profile& profile = Profile::desk());

// Full cut pipeline from a linear sketch of a dynamic edge stream: peel the
// weak edges exactly, recover a weighted sparsifier of the strong remainder,
// de-sparsify it to m - |T| fractional weight, round to exact count, and
// return the union with the weak edges. Throws SketchRetry when the weak-edge
// recovery cannot certify completeness.
DesparsifyResult desparsify_from_sketch(const SketchSuite& suite, const Rng& rng,
                                        const Profile& profile = Profile::desk());

// Spectral variant: keeps the resistance-forced edges verbatim as a program
// offset and fills in the remainder over the low-resistance pair set.
DesparsifyResult desparsify_spectral_from_sketch(const SketchSuite& suite, const Rng& rng,
                                                 const Profile& profile = Profile::desk());

}  // namespace dsp

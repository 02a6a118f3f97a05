#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "desparsify/graph.hpp"

namespace dsp {

// Feasibility program over fractional edge weights y indexed by `support`:
//   y_e in [0, 1]
//   offset_total + sum_e y_e == total_weight
//   for all z:  z' L_offset z + sum_e y_e z' L_e z  in  (1 +- eps) z' L_target z
// The offset is a fixed graph kept at weight 1 on the left-hand side; pass an
// empty graph when there is none. Support pairs must avoid the offset's edges
// and must not cross the target's connected components.
struct ProgramSpec {
  int n = 0;
  WeightedGraph target = WeightedGraph(0);
  WeightedGraph offset = WeightedGraph(0);
  std::vector<VertexPair> support;
  double total_weight = 0.0;
  double eps = 0.0;

  void validate() const;  // throws std::invalid_argument on structural problems
};

struct OracleViolation {
  enum Kind { kBox, kWeight, kComponent, kSpectralLow, kSpectralHigh };
  Kind kind = kBox;
  // Separating hyperplane in y-space: every feasible x satisfies
  // direction . x <= threshold, while the queried point has direction . y > threshold.
  Eigen::VectorXd direction;
  double threshold = 0.0;
  // For spectral violations: the offending eigenvalue of the scaled quadratic
  // form and a vector z certifying the band failure.
  double extreme_eigenvalue = 0.0;
  Eigen::VectorXd witness;
  int box_index = -1;
};

struct OracleResult {
  bool ok = false;
  std::optional<OracleViolation> violation;
};

// Exact separation for a fixed spec; precomputes the target's kernel
// projector once. `band_eps` is the band actually enforced and may be
// tightened below spec.eps by callers that need interior points.
class SeparationOracle {
 public:
  explicit SeparationOracle(const ProgramSpec& spec);

  OracleResult check(const Eigen::VectorXd& y, double band_eps) const;
  OracleResult check(const FractionalGraph& y, double band_eps) const;

  int dimension() const { return static_cast<int>(spec_.support.size()); }
  const ProgramSpec& spec() const { return spec_; }

 private:
  ProgramSpec spec_;
  Eigen::MatrixXd projector_;      // pseudoinverse square root of the target Laplacian
  Eigen::MatrixXd offset_lap_;
  std::vector<int> target_comp_;   // component label per vertex
  int target_comp_count_ = 0;
  double target_total_ = 0.0;
};

OracleResult separation_oracle(const ProgramSpec& spec, const FractionalGraph& y, double band_eps);

struct EllipsoidReport {
  bool feasible = false;
  FractionalGraph point;
  int64_t iterations = 0;
  double ellipsoid_logdet = 0.0;
  std::string status;
};

// Central-cut ellipsoid run inside the affine slab sum(y) = total - offset,
// eliminated by an orthonormal parameterization of the sum-zero subspace so
// the weight constraint binds exactly by construction. Feasibility is decided
// against a slightly tightened band (eps * 99/100); any point returned is
// re-checked against the full band before being reported feasible.
EllipsoidReport ellipsoid_feasibility(const ProgramSpec& spec, int64_t max_iterations = 0);

// Convenience wrapper: solves the program and returns the fractional graph,
// throwing std::runtime_error when the ellipsoid reports infeasibility.
FractionalGraph fractional_sparsifier(const WeightedGraph& target, double total_weight, double eps,
                                      const std::vector<VertexPair>& support,
                                      const WeightedGraph& offset);

// All unordered pairs that do not cross components of g and are not edges of
// `avoid`; the canonical support set for the programs in this toolkit.
std::vector<VertexPair> within_component_pairs(const WeightedGraph& g, const WeightedGraph& avoid);

}  // namespace dsp

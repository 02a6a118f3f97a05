#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "desparsify/graph.hpp"

namespace dsp {

// Eigenvalues below kKernelRelTol * lambda_max are treated as null space.
inline constexpr double kKernelRelTol = 1e-8;
// Multiplicative slack applied beyond verdict bands to absorb eigensolver noise.
inline constexpr double kVerdictSlack = 1e-6;

// Pseudoinverse square root of a symmetric PSD matrix. Throws on asymmetric
// input or on eigenvalues that are negative beyond tolerance.
Eigen::MatrixXd pinv_sqrt(const Eigen::MatrixXd& m);

// Moore-Penrose pseudoinverse via the same eigendecomposition rules.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& m);

// Effective resistance between u and v; +infinity across components.
double effective_resistance(const WeightedGraph& g, int u, int v);
double effective_resistance(const Graph& g, int u, int v);

// All-pairs effective resistances; entries across components are +infinity.
Eigen::MatrixXd effective_resistance_matrix(const WeightedGraph& g);

struct SpectralVerdict {
  bool ok = false;
  // Most violating nontrivial eigenvalue of pinv_sqrt(L_g) L_h pinv_sqrt(L_g);
  // +infinity when h connects vertices that g does not.
  double extreme_eigenvalue = 1.0;
  // Witness direction z with z^T L_h z outside (1 +- eps) z^T L_g z; empty when ok.
  Eigen::VectorXd witness;
};

// True iff every nontrivial eigenvalue of pinv_sqrt(L_g) L_h pinv_sqrt(L_g)
// lies in [1-eps, 1+eps] (up to kVerdictSlack). The g-kernel directions are
// excluded by skipping one zero eigenvalue per connected component of g.
SpectralVerdict is_spectral_sparsifier(const WeightedGraph& h, const WeightedGraph& g, double eps);
SpectralVerdict is_spectral_sparsifier(const WeightedGraph& h, const Graph& g, double eps);
SpectralVerdict is_spectral_sparsifier(const Graph& h, const Graph& g, double eps);

struct CutVerdict {
  bool ok = false;
  double worst_ratio = 1.0;                 // cut_h / cut_g at the worst cut
  std::optional<std::vector<int>> witness;  // violating side when !ok
};

// Exhaustive check over all 2^(n-1)-1 cuts; n <= 20 enforced.
CutVerdict is_cut_sparsifier_bruteforce(const WeightedGraph& h, const WeightedGraph& g, double eps);
CutVerdict is_cut_sparsifier_bruteforce(const WeightedGraph& h, const Graph& g, double eps);
CutVerdict is_cut_sparsifier_bruteforce(const Graph& h, const Graph& g, double eps);

}  // namespace dsp

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dsp {

// Parameter profile for the pipelines. "paper" matches the analysis-grade
// formulas; "desk" shrinks the constants so the preconditions are satisfiable
// on graphs small enough for exhaustive verification (n <= 64).
struct Profile {
  std::string name;

  double c_lambda = 200.0;     // weak-edge threshold factor
  double c_round = 200.0;      // min cut needed for Bernoulli rounding: c*ln(n)/eps^2
  double c_er = 9.0;           // resistance precondition: eps^2 / (2*c*ln n)
  bool phi_paper_formula = true;
  double c_phi = 9.0;          // paper: phi = c*ln^3(n)/eps^2; desk: phi = c/eps^2
  bool ehat_paper_formula = true;  // paper: eps^2/(100 ln^2 n); desk: 2/phi
  double c_ell = 9.0;          // spanner count factor on log2(n)^2/eps^2

  double lambda(int n, double eps) const {
    double l = c_lambda * std::log(std::max(n, 2)) / (eps * eps);
    return std::max(1.0, l);
  }

  double rounding_mincut_threshold(int n, double eps) const {
    return c_round * std::log(std::max(n, 2)) / (eps * eps);
  }

  double er_precondition_threshold(int n, double eps) const {
    return eps * eps / (2.0 * c_er * std::log(std::max(n, 2)));
  }

  double phi(int n, double eps) const {
    if (phi_paper_formula) {
      double ln = std::log(std::max(n, 2));
      return c_phi * ln * ln * ln / (eps * eps);
    }
    return c_phi / (eps * eps);
  }

  double ehat_threshold(int n, double eps) const {
    if (ehat_paper_formula) {
      double ln = std::log(std::max(n, 2));
      return eps * eps / (100.0 * ln * ln);
    }
    // Wide enough that every edge the sketch may drop stays eligible.
    return 2.0 / phi(n, eps);
  }

  int spanner_count(int n, double eps) const {
    double l2 = std::log2(std::max(n, 2));
    return std::max(1, static_cast<int>(std::ceil(c_ell * l2 * l2 / (eps * eps))));
  }

  static Profile paper() { return Profile{"paper", 200.0, 200.0, 9.0, true, 9.0, true, 9.0}; }

  static Profile desk() {
    Profile p;
    p.name = "desk";
    p.c_lambda = 0.1;
    p.c_round = 2.0;
    p.c_er = 9.0;
    p.phi_paper_formula = false;
    p.c_phi = 1.2;
    p.ehat_paper_formula = false;
    p.c_ell = 0.5;
    return p;
  }

  static Profile by_name(const std::string& name) {
    if (name == "paper") return paper();
    if (name == "desk") return desk();
    throw std::invalid_argument("Profile: unknown profile '" + name + "'");
  }
};

}  // namespace dsp

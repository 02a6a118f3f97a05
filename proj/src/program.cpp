#include "desparsify/program.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "desparsify/spectral.hpp"

namespace dsp {

namespace {

constexpr double kWeightTol = 1e-9;
constexpr double kPresenceTol = 1e-12;
constexpr double kVolumeFloorLog = -18.420680743952367;  // ln(1e-8)
constexpr double kBandShrink = 0.99;  // oracle runs at eps * 0.99, re-check at full eps

std::vector<int> weighted_component_labels(const WeightedGraph& g) {
  std::vector<int> labels(static_cast<size_t>(g.vertex_count()), -1);
  const auto comps = connected_components(g);
  for (size_t c = 0; c < comps.size(); ++c) {
    for (int v : comps[c]) labels[static_cast<size_t>(v)] = static_cast<int>(c);
  }
  return labels;
}

}  // namespace

void ProgramSpec::validate() const {
  if (n < 1) throw std::invalid_argument("program: vertex count must be positive");
  if (target.vertex_count() != n) {
    throw std::invalid_argument("program: target vertex count mismatch");
  }
  // A zero-vertex offset is the default "no offset".
  if (offset.vertex_count() != n && !(offset.vertex_count() == 0 && offset.entries().empty())) {
    throw std::invalid_argument("program: offset vertex count mismatch");
  }
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("program: eps must be in (0, 1)");
  if (!(total_weight >= -kWeightTol)) throw std::invalid_argument("program: negative total weight");
  const std::vector<int> labels = weighted_component_labels(target);
  for (const auto& entry : offset.entries()) {
    if (labels[static_cast<size_t>(entry.first.u)] != labels[static_cast<size_t>(entry.first.v)]) {
      throw std::invalid_argument("program: offset edge crosses target components");
    }
  }
  std::set<VertexPair> seen;
  for (const VertexPair& e : support) {
    if (e.u < 0 || e.v >= n || e.u >= e.v) throw std::invalid_argument("program: bad support pair");
    if (!seen.insert(e).second) throw std::invalid_argument("program: duplicate support pair");
    if (offset.has_edge(e.u, e.v)) throw std::invalid_argument("program: support pair collides with offset");
    if (labels[static_cast<size_t>(e.u)] != labels[static_cast<size_t>(e.v)]) {
      throw std::invalid_argument("program: support pair crosses target components");
    }
  }
}

SeparationOracle::SeparationOracle(const ProgramSpec& spec) : spec_(spec) {
  spec_.validate();
  if (spec_.offset.vertex_count() == 0) spec_.offset = WeightedGraph(spec_.n);
  projector_ = pinv_sqrt(laplacian(spec_.target));
  offset_lap_ = laplacian(spec_.offset);
  target_comp_ = weighted_component_labels(spec_.target);
  target_comp_count_ = static_cast<int>(connected_components(spec_.target).size());
  target_total_ = spec_.target.total_weight();
}

OracleResult SeparationOracle::check(const FractionalGraph& y, double band_eps) const {
  if (y.support != spec_.support) throw std::invalid_argument("oracle: fractional support mismatch");
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.values.size()));
  for (size_t i = 0; i < y.values.size(); ++i) v(static_cast<Eigen::Index>(i)) = y.values[i];
  return check(v, band_eps);
}

OracleResult SeparationOracle::check(const Eigen::VectorXd& y, double band_eps) const {
  const int d = dimension();
  if (y.size() != d) throw std::invalid_argument("oracle: dimension mismatch");
  if (!(band_eps > 0.0) || band_eps > spec_.eps) {
    throw std::invalid_argument("oracle: band must be in (0, spec eps]");
  }
  const int n = spec_.n;

  // Box constraints.
  {
    int worst = -1;
    double worst_gap = 0.0;
    for (int i = 0; i < d; ++i) {
      const double low_gap = -y(i);
      const double high_gap = y(i) - 1.0;
      if (low_gap > worst_gap) {
        worst_gap = low_gap;
        worst = 2 * i;
      }
      if (high_gap > worst_gap) {
        worst_gap = high_gap;
        worst = 2 * i + 1;
      }
    }
    if (worst >= 0) {
      OracleViolation viol;
      viol.kind = OracleViolation::kBox;
      viol.box_index = worst / 2;
      viol.direction = Eigen::VectorXd::Zero(d);
      if (worst % 2 == 0) {
        viol.direction(viol.box_index) = -1.0;
        viol.threshold = 0.0;
      } else {
        viol.direction(viol.box_index) = 1.0;
        viol.threshold = 1.0;
      }
      return {false, viol};
    }
  }

  // Total weight.
  const double sum = y.sum() + spec_.offset.total_weight();
  if (std::abs(sum - spec_.total_weight) > kWeightTol) {
    OracleViolation viol;
    viol.kind = OracleViolation::kWeight;
    const double sign = sum > spec_.total_weight ? 1.0 : -1.0;
    viol.direction = Eigen::VectorXd::Constant(d, sign);
    viol.threshold = sign * (spec_.total_weight - spec_.offset.total_weight());
    return {false, viol};
  }

  // Component structure: the candidate graph (offset plus positive support
  // pairs) must not split any target component, or an indicator vector of the
  // dangling piece defeats the lower band. Crossing pairs are excluded by
  // validation, so candidate components always refine target components.
  if (1.0 - band_eps > 0.0) {
    std::vector<int> parent(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    auto find = [&parent](int x) {
      while (parent[static_cast<size_t>(x)] != x) {
        parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        x = parent[static_cast<size_t>(x)];
      }
      return x;
    };
    auto unite = [&parent, &find](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };
    for (const auto& entry : spec_.offset.entries()) unite(entry.first.u, entry.first.v);
    for (int i = 0; i < d; ++i) {
      if (y(i) > kPresenceTol) unite(spec_.support[static_cast<size_t>(i)].u, spec_.support[static_cast<size_t>(i)].v);
    }
    // Does some target component span several candidate pieces?
    std::vector<int> comp_root(static_cast<size_t>(target_comp_count_), -1);
    int split_piece = -1;
    for (int v = 0; v < n && split_piece < 0; ++v) {
      const int c = target_comp_[static_cast<size_t>(v)];
      const int r = find(v);
      if (comp_root[static_cast<size_t>(c)] < 0) {
        comp_root[static_cast<size_t>(c)] = r;
      } else if (comp_root[static_cast<size_t>(c)] != r) {
        split_piece = r;
      }
    }
    if (split_piece >= 0) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (int v = 0; v < n; ++v) {
        if (find(v) == split_piece) z(v) = 1.0;
      }
      const double rhs_q = z.dot(laplacian(spec_.target) * z);
      double lhs_q = z.dot(offset_lap_ * z);
      Eigen::VectorXd dir(d);
      for (int i = 0; i < d; ++i) {
        const VertexPair& e = spec_.support[static_cast<size_t>(i)];
        const double q = (z(e.u) - z(e.v)) * (z(e.u) - z(e.v));
        dir(i) = -q;
        lhs_q += y(i) * q;
      }
      if (lhs_q < (1.0 - band_eps) * rhs_q) {
        OracleViolation viol;
        viol.kind = OracleViolation::kComponent;
        viol.direction = dir;
        viol.threshold = z.dot(offset_lap_ * z) - (1.0 - band_eps) * rhs_q;
        viol.extreme_eigenvalue = rhs_q > 0.0 ? lhs_q / rhs_q : 0.0;
        viol.witness = z;
        return {false, viol};
      }
    }
  }

  // Spectral band on the nonzero eigenvalues of the scaled candidate form.
  Eigen::MatrixXd lap_y = offset_lap_;
  for (int i = 0; i < d; ++i) {
    const VertexPair& e = spec_.support[static_cast<size_t>(i)];
    const double w = y(i);
    lap_y(e.u, e.u) += w;
    lap_y(e.v, e.v) += w;
    lap_y(e.u, e.v) -= w;
    lap_y(e.v, e.u) -= w;
  }
  Eigen::MatrixXd m = projector_ * lap_y * projector_;
  m = ((m + m.transpose()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw std::runtime_error("oracle: eigensolver failed");
  const Eigen::VectorXd& evals = es.eigenvalues();
  const int skip = target_comp_count_;
  int worst_idx = -1;
  double worst_gap = 0.0;
  bool worst_high = false;
  for (int i = skip; i < n; ++i) {
    const double low_gap = (1.0 - band_eps) - evals(i);
    const double high_gap = evals(i) - (1.0 + band_eps);
    if (low_gap > worst_gap) {
      worst_gap = low_gap;
      worst_idx = i;
      worst_high = false;
    }
    if (high_gap > worst_gap) {
      worst_gap = high_gap;
      worst_idx = i;
      worst_high = true;
    }
  }
  if (worst_idx < 0) return {true, std::nullopt};

  Eigen::VectorXd z = projector_ * es.eigenvectors().col(worst_idx);
  const double zn = z.norm();
  if (zn > 0.0) z /= zn;
  const double rhs_q = z.dot(laplacian(spec_.target) * z);
  OracleViolation viol;
  viol.kind = worst_high ? OracleViolation::kSpectralHigh : OracleViolation::kSpectralLow;
  viol.extreme_eigenvalue = evals(worst_idx);
  viol.witness = z;
  viol.direction = Eigen::VectorXd(d);
  for (int i = 0; i < d; ++i) {
    const VertexPair& e = spec_.support[static_cast<size_t>(i)];
    const double q = (z(e.u) - z(e.v)) * (z(e.u) - z(e.v));
    viol.direction(i) = worst_high ? q : -q;
  }
  const double off_q = z.dot(offset_lap_ * z);
  viol.threshold = worst_high ? (1.0 + band_eps) * rhs_q - off_q : off_q - (1.0 - band_eps) * rhs_q;
  return {false, viol};
}

OracleResult separation_oracle(const ProgramSpec& spec, const FractionalGraph& y, double band_eps) {
  return SeparationOracle(spec).check(y, band_eps);
}

namespace {

FractionalGraph make_point(const ProgramSpec& spec, const Eigen::VectorXd& y) {
  FractionalGraph f;
  f.n = spec.n;
  f.support = spec.support;
  f.values.assign(static_cast<size_t>(y.size()), 0.0);
  for (Eigen::Index i = 0; i < y.size(); ++i) f.values[static_cast<size_t>(i)] = y(i);
  return f;
}

}  // namespace

EllipsoidReport ellipsoid_feasibility(const ProgramSpec& spec, int64_t max_iterations) {
  spec.validate();
  const SeparationOracle oracle(spec);
  const int d = oracle.dimension();
  const double inner = spec.eps * kBandShrink;
  const double slack_total = spec.total_weight - spec.offset.total_weight();

  EllipsoidReport report;
  report.point.n = spec.n;
  report.point.support = spec.support;
  report.point.values.assign(static_cast<size_t>(d), 0.0);

  auto accept = [&](const Eigen::VectorXd& y) {
    const OracleResult full = oracle.check(y, spec.eps);
    if (!full.ok) throw std::logic_error("ellipsoid: inner-band point failed the full-band re-check");
    report.feasible = true;
    report.point = make_point(spec, y);
    report.status = "feasible";
  };

  if (slack_total < -kWeightTol || slack_total > static_cast<double>(d) + kWeightTol) {
    report.status = "infeasible: required weight outside the box range";
    return report;
  }
  if (d == 0) {
    const Eigen::VectorXd empty(0);
    if (oracle.check(empty, inner).ok) {
      accept(empty);
    } else {
      report.status = "infeasible: empty support cannot meet the band";
    }
    return report;
  }

  // Degenerate slabs: the box corner is the only candidate.
  if (slack_total <= kWeightTol || slack_total >= static_cast<double>(d) - kWeightTol) {
    const double c = slack_total <= kWeightTol ? 0.0 : 1.0;
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(d, c);
    if (oracle.check(y, inner).ok) {
      accept(y);
    } else {
      report.status = "infeasible: box corner fails the band";
    }
    report.iterations = 1;
    return report;
  }

  const Eigen::VectorXd y0 = Eigen::VectorXd::Constant(d, slack_total / d);
  if (d == 1) {
    if (oracle.check(y0, inner).ok) {
      accept(y0);
    } else {
      report.status = "infeasible: single-variable program fails the band";
    }
    report.iterations = 1;
    return report;
  }

  const int dt = d - 1;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(d, 1));
  const Eigen::MatrixXd full_q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd basis = full_q.rightCols(dt);  // orthonormal, each column sums to zero

  Eigen::VectorXd t = Eigen::VectorXd::Zero(dt);
  Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(dt, dt) * static_cast<double>(d);
  double logdet = dt * std::log(static_cast<double>(d));
  const double logdet_floor = 2.0 * dt * kVolumeFloorLog;
  const int64_t cap = max_iterations > 0
                          ? max_iterations
                          : static_cast<int64_t>(std::ceil(50.0 * dt * dt * (-kVolumeFloorLog))) + 100;

  if (dt == 1) {
    // One free direction: plain bisection over the slab segment.
    double lo = -std::sqrt(static_cast<double>(d));
    double hi = std::sqrt(static_cast<double>(d));
    for (int64_t it = 0; it < cap; ++it) {
      ++report.iterations;
      const double mid = 0.5 * (lo + hi);
      const Eigen::VectorXd y = y0 + basis.col(0) * mid;
      const OracleResult res = oracle.check(y, inner);
      if (res.ok) {
        accept(y);
        return report;
      }
      const double a = basis.col(0).dot(res.violation->direction);
      if (std::abs(a) < 1e-13 * res.violation->direction.norm()) {
        report.status = "infeasible: separating plane is parallel to the weight slab";
        return report;
      }
      if (a > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
      if (hi - lo < 2e-8) {
        report.status = "infeasible: segment width below the volume floor";
        return report;
      }
    }
    report.status = "infeasible: iteration cap reached";
    return report;
  }

  const double step_logdet =
      dt * std::log(static_cast<double>(dt) * dt / (static_cast<double>(dt) * dt - 1.0)) +
      std::log((dt - 1.0) / (dt + 1.0));
  for (int64_t it = 0; it < cap; ++it) {
    ++report.iterations;
    const Eigen::VectorXd y = y0 + basis * t;
    const OracleResult res = oracle.check(y, inner);
    if (res.ok) {
      accept(y);
      report.ellipsoid_logdet = logdet;
      return report;
    }
    const Eigen::VectorXd a = basis.transpose() * res.violation->direction;
    const double an = a.norm();
    if (an < 1e-13 * res.violation->direction.norm()) {
      // The violated constraint is constant on the weight slab, so no point
      // of the slab can satisfy it.
      report.status = "infeasible: separating plane is parallel to the weight slab";
      report.ellipsoid_logdet = logdet;
      return report;
    }
    const Eigen::VectorXd qa = shape * a;
    const double aqa = a.dot(qa);
    if (!(aqa > 0.0) || !std::isfinite(aqa)) {
      report.status = "infeasible: ellipsoid shape degenerated";
      report.ellipsoid_logdet = logdet;
      return report;
    }
    t -= qa / ((dt + 1.0) * std::sqrt(aqa));
    shape = (static_cast<double>(dt) * dt / (static_cast<double>(dt) * dt - 1.0)) *
            (shape - (2.0 / (dt + 1.0)) * (qa * qa.transpose()) / aqa);
    shape = ((shape + shape.transpose()) * 0.5).eval();
    logdet += step_logdet;
    if (logdet <= logdet_floor) {
      report.status = "infeasible: ellipsoid volume below the floor";
      report.ellipsoid_logdet = logdet;
      return report;
    }
  }
  report.status = "infeasible: iteration cap reached";
  report.ellipsoid_logdet = logdet;
  return report;
}

FractionalGraph fractional_sparsifier(const WeightedGraph& target, double total_weight, double eps,
                                      const std::vector<VertexPair>& support,
                                      const WeightedGraph& offset) {
  ProgramSpec spec;
  spec.n = target.vertex_count();
  spec.target = target;
  spec.offset = offset;
  spec.support = support;
  spec.total_weight = total_weight;
  spec.eps = eps;
  const EllipsoidReport report = ellipsoid_feasibility(spec);
  if (!report.feasible) {
    throw std::runtime_error("fractional sparsifier: " + report.status);
  }
  return report.point;
}

std::vector<VertexPair> within_component_pairs(const WeightedGraph& g, const WeightedGraph& avoid) {
  const std::vector<int> labels = weighted_component_labels(g);
  std::vector<VertexPair> pairs;
  for (int u = 0; u < g.vertex_count(); ++u) {
    for (int v = u + 1; v < g.vertex_count(); ++v) {
      if (labels[static_cast<size_t>(u)] != labels[static_cast<size_t>(v)]) continue;
      if (avoid.has_edge(u, v)) continue;
      pairs.push_back(VertexPair::of(u, v));
    }
  }
  return pairs;
}

}  // namespace dsp

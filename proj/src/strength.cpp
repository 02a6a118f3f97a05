#include "desparsify/strength.hpp"

#include <algorithm>
#include <stdexcept>

namespace dsp {

double edge_strength_bruteforce(const Graph& g, VertexPair e) {
  int n = g.vertex_count();
  if (n > 12) throw std::invalid_argument("edge_strength_bruteforce: n must be <= 12");
  if (!g.has_edge(e.u, e.v)) throw std::invalid_argument("edge_strength_bruteforce: not an edge");

  std::vector<int> rest;
  for (int v = 0; v < n; ++v)
    if (v != e.u && v != e.v) rest.push_back(v);

  double best = 0.0;
  uint32_t limit = 1u << rest.size();
  for (uint32_t mask = 0; mask < limit; ++mask) {
    std::vector<int> verts{e.u, e.v};
    for (size_t i = 0; i < rest.size(); ++i)
      if ((mask >> i) & 1u) verts.push_back(rest[i]);
    Graph sub = induced_subgraph(g, verts);
    if (sub.vertex_count() < 2) continue;
    MincutResult mc = mincut(sub);
    if (mc.connected && mc.value > best) best = mc.value;
  }
  return best;
}

namespace {

// Assigns strengths inside the vertex set `verts`. `inherited` is the largest
// min cut of any enclosing component processed so far.
void assign_strengths(const Graph& g, std::vector<int> verts, double inherited,
                      std::map<VertexPair, double>& out) {
  if (verts.size() < 2) return;
  std::vector<int> to_global;
  Graph sub = induced_subgraph(g, verts, &to_global);
  if (sub.edge_count() == 0) return;

  auto comps = connected_components(sub);
  if (comps.size() > 1) {
    for (const auto& comp : comps) {
      std::vector<int> global;
      for (int v : comp) global.push_back(to_global[v]);
      assign_strengths(g, std::move(global), inherited, out);
    }
    return;
  }

  MincutResult mc = mincut(sub);
  double level = std::max(inherited, mc.value);

  std::vector<char> in_side(sub.vertex_count(), 0);
  for (int v : mc.side) in_side[v] = 1;
  for (const auto& e : sub.edges()) {
    if (in_side[e.u] != in_side[e.v]) {
      VertexPair global = VertexPair::of(to_global[e.u], to_global[e.v]);
      out[global] = level;
    }
  }

  std::vector<int> side_global, rest_global;
  for (int v = 0; v < sub.vertex_count(); ++v)
    (in_side[v] ? side_global : rest_global).push_back(to_global[v]);
  assign_strengths(g, std::move(side_global), level, out);
  assign_strengths(g, std::move(rest_global), level, out);
}

}  // namespace

std::map<VertexPair, double> edge_strengths(const Graph& g) {
  std::map<VertexPair, double> out;
  std::vector<int> all(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) all[v] = v;
  assign_strengths(g, std::move(all), 0.0, out);
  return out;
}

StrengthDecomposition weak_edge_decomposition(const Graph& g, double lambda) {
  if (!(lambda >= 1.0)) throw std::invalid_argument("weak_edge_decomposition: lambda must be >= 1");
  auto strengths = edge_strengths(g);

  StrengthDecomposition dec;
  dec.lambda = lambda;
  std::vector<VertexPair> strong;
  for (const auto& e : g.edges()) {
    if (strengths.at(e) <= lambda)
      dec.weak_edges.push_back(e);
    else
      strong.push_back(e);
  }
  Graph residual(g.vertex_count(), strong);
  dec.components = connected_components(residual);
  return dec;
}

}  // namespace dsp

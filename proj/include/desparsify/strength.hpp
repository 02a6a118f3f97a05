#pragma once

#include <map>
#include <vector>

#include "desparsify/graph.hpp"

namespace dsp {

// Strength of e: the largest min cut over induced subgraphs containing both
// endpoints. Reference implementation, enumerates all subsets; n <= 12.
double edge_strength_bruteforce(const Graph& g, VertexPair e);

// Exact strengths for every edge via recursive min-cut peeling: the strength
// of an edge is the largest min cut among the nested components containing it.
std::map<VertexPair, double> edge_strengths(const Graph& g);

struct StrengthDecomposition {
  double lambda = 0.0;
  std::vector<VertexPair> weak_edges;            // strength <= lambda
  std::vector<std::vector<int>> components;      // components of g minus weak edges
};

// Splits g into weak edges and the components they separate. Every weak edge
// crosses two components, and each surviving component of size >= 2 has min
// cut strictly above lambda. Requires lambda >= 1.
StrengthDecomposition weak_edge_decomposition(const Graph& g, double lambda);

}  // namespace dsp

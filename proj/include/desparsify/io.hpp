#pragma once

#include <string>
#include <vector>

#include "desparsify/graph.hpp"

namespace dsp {

// Edge list format: first line "n m", then one "u v" line per edge.
// Weighted files carry "u v w" lines; a missing third column means weight 1.
Graph read_graph(const std::string& path);
void write_graph(const Graph& g, const std::string& path);

WeightedGraph read_weighted_graph(const std::string& path);
void write_weighted_graph(const WeightedGraph& g, const std::string& path);

// Partition format: one "v cluster_id" line per vertex. Labels are
// normalized to 0..k-1 by first appearance on read.
Partition read_partition(const std::string& path, int n);
void write_partition(const Partition& p, const std::string& path);

struct StreamEvent {
  int u = 0;
  int v = 0;
  int sign = 1;  // +1 insert, -1 delete
};

// Stream format: one "u v +" or "u v -" line per event.
std::vector<StreamEvent> read_stream(const std::string& path);
void write_stream(const std::vector<StreamEvent>& events, const std::string& path);

}  // namespace dsp

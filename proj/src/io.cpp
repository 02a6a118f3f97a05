#include "desparsify/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsp {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

WeightedGraph read_weighted_graph(const std::string& path) {
  auto in = open_in(path);
  int n = 0;
  int64_t m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("bad header in " + path);
  std::vector<std::pair<VertexPair, double>> entries;
  entries.reserve(m);
  std::string line;
  std::getline(in, line);  // rest of header line
  int64_t read = 0;
  while (read < m && std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int u, v;
    double w = 1.0;
    if (!(ls >> u >> v)) throw std::runtime_error("bad edge line in " + path);
    ls >> w;
    entries.emplace_back(VertexPair::of(u, v), w);
    ++read;
  }
  if (read != m) throw std::runtime_error("edge count mismatch in " + path);
  return WeightedGraph(n, std::move(entries));
}

Graph read_graph(const std::string& path) {
  WeightedGraph w = read_weighted_graph(path);
  for (const auto& [e, wt] : w.entries())
    if (wt != 1.0) throw std::runtime_error("unweighted graph has weighted edge in " + path);
  return w.support();
}

void write_graph(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  out << g.vertex_count() << " " << g.edge_count() << "\n";
  for (const auto& e : g.edges()) out << e.u << " " << e.v << "\n";
}

void write_weighted_graph(const WeightedGraph& g, const std::string& path) {
  auto out = open_out(path);
  out << g.vertex_count() << " " << g.edge_count() << "\n";
  for (const auto& [e, w] : g.entries()) out << e.u << " " << e.v << " " << fmt_double(w) << "\n";
}

Partition read_partition(const std::string& path, int n) {
  auto in = open_in(path);
  std::vector<int> raw(n, -1);
  int u, c;
  int seen = 0;
  while (in >> u >> c) {
    if (u < 0 || u >= n) throw std::runtime_error("partition vertex out of range in " + path);
    if (raw[u] != -1) throw std::runtime_error("partition repeats vertex in " + path);
    raw[u] = c;
    ++seen;
  }
  if (seen != n) throw std::runtime_error("partition line count mismatch in " + path);
  return Partition::from_labels(n, raw);
}

void write_partition(const Partition& p, const std::string& path) {
  auto out = open_out(path);
  for (int v = 0; v < p.vertex_count(); ++v) out << v << " " << p.cluster_of(v) << "\n";
}

std::vector<StreamEvent> read_stream(const std::string& path) {
  auto in = open_in(path);
  std::vector<StreamEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int u, v;
    std::string op;
    if (!(ls >> u >> v >> op)) throw std::runtime_error("bad stream line in " + path);
    if (op != "+" && op != "-") throw std::runtime_error("bad stream op in " + path);
    events.push_back(StreamEvent{u, v, op == "+" ? 1 : -1});
  }
  return events;
}

void write_stream(const std::vector<StreamEvent>& events, const std::string& path) {
  auto out = open_out(path);
  for (const auto& ev : events)
    out << ev.u << " " << ev.v << " " << (ev.sign > 0 ? "+" : "-") << "\n";
}

}  // namespace dsp

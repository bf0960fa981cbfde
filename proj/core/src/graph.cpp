#include "colorlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "colorlab/errors.hpp"

namespace colorlab {

void Multigraph::add_edge(int u, int v) {
  if (u == v) throw ValidationError("multigraph: self-loop rejected");
  if (u < 0 || v < 0 || u >= n || v >= n)
    throw ValidationError("multigraph: endpoint out of range");
  edges.emplace_back(std::min(u, v), std::max(u, v));
}

std::vector<std::pair<int, int>> Multigraph::simple_edges() const {
  auto es = edges;
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return es;
}

bool Multigraph::has_parallel_edge() const {
  auto es = edges;
  std::sort(es.begin(), es.end());
  return std::adjacent_find(es.begin(), es.end()) != es.end();
}

std::int64_t ModelParams::edge_target() const {
  return static_cast<std::int64_t>(std::ceil(dprime * static_cast<double>(n) / 2.0));
}

double ModelParams::edge_density() const {
  return 2.0 * static_cast<double>(edge_target()) / static_cast<double>(n);
}

std::int64_t ModelParams::pair_count() const {
  return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

void ModelParams::validate() const {
  if (k < 2) throw ValidationError("model params: k must be >= 2");
  if (n < 2) throw ValidationError("model params: n must be >= 2");
  // d' = 0 is admitted as the degenerate empty ensemble
  if (!(dprime >= 0.0)) throw ValidationError("model params: d' must be >= 0");
}

void write_graph(std::ostream& out, const Multigraph& g, std::optional<int> k) {
  out << g.n << ' ' << g.edges.size();
  if (k) out << ' ' << *k;
  out << '\n';
  for (const auto& [u, v] : g.edges) out << u + 1 << ' ' << v + 1 << '\n';
}

GraphFile read_graph(std::istream& in) {
  std::string header;
  while (std::getline(in, header)) {
    if (!header.empty() && header.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (header.empty()) throw ValidationError("graph file: missing header");
  std::istringstream hs(header);
  long long n = 0, m = 0;
  if (!(hs >> n >> m)) throw ValidationError("graph file: header must be 'n m' or 'n m k'");
  GraphFile file;
  long long k = 0;
  if (hs >> k) {
    if (k < 2) throw ValidationError("graph file: k must be >= 2");
    file.k = static_cast<int>(k);
  }
  if (n < 0 || m < 0) throw ValidationError("graph file: negative header field");
  file.graph.n = static_cast<int>(n);
  file.graph.edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    if (!(in >> u >> v))
      throw ValidationError("graph file: expected " + std::to_string(m) + " edges, got " +
                            std::to_string(i));
    if (u < 1 || v < 1 || u > n || v > n)
      throw ValidationError("graph file: vertex out of range on edge " + std::to_string(i + 1));
    if (u == v)
      throw ValidationError("graph file: self-loop rejected on edge " + std::to_string(i + 1));
    file.graph.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }
  return file;
}

}  // namespace colorlab

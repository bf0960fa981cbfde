#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace colorlab {

/// Multigraph on vertices 0..n-1. Edges are unordered pairs stored as
/// (min, max) in the order they were sampled; parallel edges are permitted,
/// self-loops are not.
struct Multigraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges.size()); }
  void add_edge(int u, int v);
  /// Edge list with parallel copies collapsed, sorted ascending.
  std::vector<std::pair<int, int>> simple_edges() const;
  bool has_parallel_edge() const;
};

/// Ensemble parameters. The target density d' is fixed; the number of edges
/// is m = ceil(d' * n / 2) (evaluated in double precision, round-to-nearest
/// product), and d = 2m/n is the density the exact formulas use.
struct ModelParams {
  int k = 3;
  double dprime = 2.0;
  int n = 0;

  std::int64_t edge_target() const;        // m
  double edge_density() const;             // d = 2m/n
  std::int64_t pair_count() const;         // N = n(n-1)/2
  void validate() const;
};

/// Line-oriented text format: header "n m" or "n m k", then one "u v" pair
/// per line, 1-indexed. Parsers reject self-loops and out-of-range vertices.
struct GraphFile {
  Multigraph graph;
  std::optional<int> k;
};

void write_graph(std::ostream& out, const Multigraph& g, std::optional<int> k = {});
GraphFile read_graph(std::istream& in);

}  // namespace colorlab

#pragma once

#include <cstdint>

#include "colorlab/graph.hpp"
#include "colorlab/observables.hpp"
#include "colorlab/rng.hpp"

namespace colorlab {

/// m independent uniform draws from the n(n-1)/2 unordered vertex pairs,
/// with replacement. Deterministic for a fixed (seed, generator version).
Multigraph sample_gnm_multigraph(const ModelParams& params, std::uint64_t seed);

/// Uniform simple graph with m distinct edges, by whole-sample rejection of
/// multigraph draws containing a duplicate pair. Requires m <= n(n-1)/2.
Multigraph sample_gnm_simple(const ModelParams& params, std::uint64_t seed);

/// Edge probability dk/(n(k-1)) used by the planted ensemble.
double planted_edge_probability(int n, int k, double d);

struct PlantedSample {
  ColourAssignment colouring;
  Multigraph graph;
};

/// Uniform colouring sigma plus a graph wiring each bichromatic pair
/// independently with probability p'. sigma is proper for the output.
PlantedSample sample_planted(int n, int k, double pprime, std::uint64_t seed);

/// Pads the colouring to (near-)perfect balance: adds k*ceil(alpha) fresh
/// vertices, alpha = max_i | |sigma^{-1}(i)| - n/k |, assigns them so class
/// sizes become equal (when k divides the new vertex count; otherwise as
/// equal as possible, larger classes first), and wires every new bichromatic
/// pair independently with probability p'. sigma must be proper for g.
PlantedSample balance_augment(const Multigraph& g, const ColourAssignment& sigma,
                              double pprime, std::uint64_t seed);

/// Induced multigraph on the first n vertices; inverse of balance_augment on
/// the original vertex set.
Multigraph strip_augment(const Multigraph& g, int n);

}  // namespace colorlab

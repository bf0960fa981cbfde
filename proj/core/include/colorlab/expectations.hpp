#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "colorlab/exact_count.hpp"
#include "colorlab/graph.hpp"
#include "colorlab/numeric.hpp"
#include "colorlab/observables.hpp"

namespace colorlab {

enum class Ensemble { multigraph, simple };

/// Exact expected number of colourings with the given class sizes.
/// Multigraph ensemble: multinomial(n; counts) * (1 - F/N)^m with
/// F = sum_i C(counts_i, 2) monochromatic pairs and N = C(n,2).
/// Simple ensemble: multinomial * C(N-F, m) / C(N, m).
LogValue expected_count_by_density(const ModelParams& params, const DensityKey& counts,
                                   Ensemble ensemble);

/// Exact expected total count: sum of expected_count_by_density over every
/// density, accumulated stably in log space.
LogValue expected_count(const ModelParams& params, Ensemble ensemble);

/// Exact expected number of colouring pairs with the given overlap counts
/// (row-major k*k), multigraph ensemble: multinomial over the k^2 cells
/// times (1 - F/N)^m, where F counts pairs monochromatic under either side.
LogValue expected_pair_count_by_overlap(const ModelParams& params, const DensityKey& cells);

/// Optional restriction of the overlap lattice sum.
struct OverlapRestriction {
  enum class Kind { none, bucket, ball };
  Kind kind = Kind::none;
  BalanceSpec spec{};        // bucket: both margins must quantize to s
  std::vector<int> s{};
  double eta = 0.0;          // ball: ||rho - barycentre||_2 <= eta

  static OverlapRestriction none() { return {}; }
  static OverlapRestriction bucket(const BalanceSpec& spec, std::vector<int> s);
  static OverlapRestriction ball(double eta);
};

/// Exact expected squared count (or its restriction): sums the pair
/// expectation over all k x k count matrices with total n, enumerated cell
/// by cell with zero-probability leaves pruned.
LogValue expected_pair_count(const ModelParams& params,
                             const OverlapRestriction& restriction = {});

}  // namespace colorlab

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "colorlab/graph.hpp"

namespace colorlab {

/// Map from vertices to colours 0..k-1.
struct ColourAssignment {
  int k = 0;
  std::vector<int> values;

  int n() const { return static_cast<int>(values.size()); }
  bool proper_for(const Multigraph& g) const;
};

/// Colour-class sizes; entry i of the density is counts[i]/n, an exact
/// multiple of 1/n.
struct ColourDensity {
  int n = 0;
  std::vector<std::int64_t> counts;

  int k() const { return static_cast<int>(counts.size()); }
  std::vector<double> values() const;
};

/// Joint class sizes of two assignments; entry (i,j) is counts[i*k+j]/n.
/// Row margins equal the first assignment's density, column margins the
/// second's, exactly.
struct OverlapMatrix {
  int n = 0;
  int k = 0;
  std::vector<std::int64_t> counts;  // k*k, row-major

  std::int64_t at(int i, int j) const { return counts[static_cast<std::size_t>(i) * k + j]; }
  std::vector<double> values() const;
  ColourDensity row_margin() const;
  ColourDensity column_margin() const;
};

ColourDensity colour_density(const ColourAssignment& sigma);
OverlapMatrix overlap(const ColourAssignment& sigma, const ColourAssignment& tau);

/// Resolution parameters for grouping near-balanced densities. omega and nu
/// must be odd positive integers. A density is (omega,n)-balanced when every
/// entry lies in [1/k - omega/sqrt(n), 1/k + omega/sqrt(n)); the balanced
/// region is split into buckets indexed by integer vectors s with even
/// |s|_1, the bucket s having centre 1/k + s_i/(nu sqrt(n)).
struct BalanceSpec {
  int omega = 1;
  int nu = 1;

  void validate() const;
};

/// Exact integer test of (omega,n)-balance (closed below, open above).
bool is_balanced(const ColourDensity& rho, const BalanceSpec& spec);

/// Bucket index of a balanced density: the nearest centre on the even-parity
/// integer lattice, in units of 1/(nu sqrt(n)). Nearest-centre assignment
/// with deterministic tie-breaking makes the buckets a true partition of the
/// balanced densities; the returned s always satisfies the centred-box
/// membership |rho_i - centre_i| <= 1/(nu sqrt(n)) and |s|_inf <= omega*nu.
/// Returns nullopt iff rho is not balanced.
std::optional<std::vector<int>> density_bucket(const ColourDensity& rho, const BalanceSpec& spec);

/// All bucket indices reachable from balanced densities: even |s|_1 and
/// |s|_inf <= omega*nu.
std::vector<std::vector<int>> bucket_lattice(const BalanceSpec& spec, int k);

/// Bucket centre as a real vector, 1/k + s_i/(nu sqrt(n)).
std::vector<double> bucket_centre(const std::vector<int>& s, const BalanceSpec& spec, int k,
                                  std::int64_t n);

/// Box membership used by the partition tests: rho_i within 1/(nu sqrt(n))
/// of the bucket centre for all i (closed below, open above).
bool bucket_box_contains(const std::vector<int>& s, const ColourDensity& rho,
                         const BalanceSpec& spec);

/// Counts of short cycles: counts[l-2] holds the number of l-cycles for
/// l = 2..max_length. In a multigraph a 2-cycle is an unordered pair of
/// parallel edges; an l-cycle for l >= 3 visits l distinct vertices and
/// counts each parallel-edge choice separately.
struct CycleCensus {
  int max_length = 0;
  std::vector<std::int64_t> counts;

  std::int64_t count(int l) const { return counts[static_cast<std::size_t>(l) - 2]; }
};

CycleCensus cycle_census(const Multigraph& g, int max_length);

}  // namespace colorlab

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "colorlab/graph.hpp"
#include "colorlab/numeric.hpp"
#include "colorlab/observables.hpp"

namespace colorlab {

/// Resource guards for the exact counters. Exceeding a guard raises
/// GuardRefusal naming the guard; nothing is truncated silently.
struct CountGuards {
  int max_enumeration_vertices = 20;   // k^n enumeration counters
  int max_pair_vertices = 10;          // k^(2n) pair enumeration
  int max_elimination_width = 12;      // dynamic-programming table scope
};

/// Number of proper k-colourings by full enumeration. Parallel edges count
/// as a single constraint.
BigCount count_bruteforce(const Multigraph& g, int k, const CountGuards& guards = {});

/// Exact count for larger graphs: connected components are counted
/// independently, degree<=1 vertices are peeled off (factor k-1 per pendant
/// edge, k per isolated vertex), and the remaining 2-core is summed out
/// along a min-degree elimination order with arbitrary-precision tables.
/// Agrees with count_bruteforce on every input.
BigCount count_dp(const Multigraph& g, int k, const CountGuards& guards = {});

using DensityKey = std::vector<std::int64_t>;

/// Colouring counts split by colour density; values sum to the total count.
struct DensityCountTable {
  int n = 0;
  int k = 0;
  std::map<DensityKey, BigCount> rows;

  BigCount total() const;
};

DensityCountTable count_by_density(const Multigraph& g, int k, const CountGuards& guards = {});

/// Number of colourings whose density is (omega,n)-balanced, and the count
/// within one bucket. Summing count_bucket over bucket_lattice(spec, k)
/// reproduces count_balanced exactly.
BigCount count_balanced(const Multigraph& g, int k, const BalanceSpec& spec,
                        const CountGuards& guards = {});
BigCount count_bucket(const Multigraph& g, int k, const BalanceSpec& spec,
                      const std::vector<int>& s, const CountGuards& guards = {});

/// Pair counts split by overlap matrix (row-major k*k count key); values sum
/// to the squared total count.
struct OverlapCountTable {
  int n = 0;
  int k = 0;
  std::map<DensityKey, BigCount> rows;

  BigCount total() const;
};

OverlapCountTable count_pairs_by_overlap(const Multigraph& g, int k,
                                         const CountGuards& guards = {});

/// Default separability margin, ln^20(k)/k.
double default_kappa(int k);

/// Size of the cluster of sigma: proper colourings tau whose overlap with
/// sigma has precisely k entries above 0.51/k.
BigCount cluster_size(const Multigraph& g, const ColourAssignment& sigma, int k,
                      const CountGuards& guards = {});

/// True iff every proper tau yields a separable overlap with sigma, i.e. no
/// overlap entry has k*rho_ij inside (0.51, 1-kappa).
bool is_separable_colouring(const Multigraph& g, const ColourAssignment& sigma, int k,
                            double kappa, const CountGuards& guards = {});

/// CSV serialization: one row per density/overlap, entries as p/q rationals
/// followed by the decimal count.
void write_density_csv(std::ostream& out, const DensityCountTable& table);
void write_overlap_csv(std::ostream& out, const OverlapCountTable& table);

}  // namespace colorlab

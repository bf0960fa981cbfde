#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "colorlab/rng.hpp"

namespace colorlab {

/// k x k matrix with every row and column summing to 1/k (within 1e-12).
struct UniformMarginMatrix {
  int k = 0;
  std::vector<double> entries;  // row-major

  double margin_residual() const;
};

/// Alternating row/column rescaling onto margins 1/k. Entries at or below
/// zero are lifted to a 1e-12 floor first. Raises GuardRefusal carrying the
/// residual when the sweep cap is hit.
UniformMarginMatrix project_uniform_margins(int k, std::vector<double> entries,
                                            double tol = 1e-13, int max_sweeps = 10000);

struct AscentResult {
  std::vector<double> endpoint;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OptimizerReport {
  int k = 0;
  double d = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> best;       // argmax candidate
  double best_value = 0.0;
  double value_at_barycentre = 0.0;
  int stability = 0;              // entries of best above 0.51/k
  bool separable = false;
  std::vector<AscentResult> starts;
};

/// Per-iterate hook, called with each accepted iterate (tests use it to
/// check invariants along the path).
using IterateCallback = std::function<void(const std::vector<double>&)>;

/// Multi-start mirror ascent of the uniform-margin pair exponent:
/// multiplicative gradient update, re-projected to uniform margins each
/// step, step halved on non-increase. Starts: the barycentre, the k!
/// permutation-supported corners smoothed toward it, and random_starts
/// random matrices. Deterministic for fixed (seed, starts).
OptimizerReport maximize_uniform_pair_exponent(double d, int k, int random_starts,
                                               std::uint64_t seed,
                                               const IterateCallback& on_iterate = {});

/// Count of entries above 0.51/k.
int stability_class(const std::vector<double>& rho, int k);

/// True iff no entry has k*rho_ij inside (0.51, 1-kappa).
bool is_separable_matrix(const std::vector<double>& rho, int k, double kappa);

/// Numerical second-moment diagnostic: the largest d (to tolerance tol) in
/// [2(k-1)ln(k-1), 2k ln k] at which multi-start ascent still finds the
/// barycentre globally maximal within 1e-8. This is a property of the
/// uniform-margin exponent only, not a colourability threshold.
double second_moment_threshold_proxy(int k, double tol, std::uint64_t seed);

std::string to_json(const OptimizerReport& report);

}  // namespace colorlab

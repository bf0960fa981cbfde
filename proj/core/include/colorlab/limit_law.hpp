#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "colorlab/rng.hpp"

namespace colorlab {

/// Parameters of the limiting fluctuation of the log colouring count: a
/// compensated Poisson series over cycle lengths l >= 3 minus the exact
/// constant d^2/(4(k-1)). Requires d < (k-1)^2 for convergence. truncation 0
/// means "choose from tolerance".
struct FluctuationLaw {
  double d = 2.0;
  int k = 3;
  int truncation = 0;
  double tolerance = 1e-6;

  void validate() const;
  int resolved_truncation() const;
};

/// Smallest L >= 3 whose dropped tail sum_{l>L} (|delta_l| sqrt(lambda_l) +
/// delta_l^2 lambda_l) is below tol, using the geometric tail bound.
int choose_truncation(double d, int k, double tol);

/// One draw: sum_{l=3}^{L} [X_l ln(1+delta_l) - lambda_l delta_l] -
/// d^2/(4(k-1)), X_l independent Poisson(lambda_l). The l=2 term is never
/// sampled; its compensator is the exact trailing constant.
double sample_fluctuation(const FluctuationLaw& law, Rng& rng);

struct SampleBatch {
  FluctuationLaw law;
  std::uint64_t seed = 0;
  std::vector<double> values;
};

/// Deterministic batch; sample i uses the (seed, i) substream, so the batch
/// is identical for every thread count.
SampleBatch sample_fluctuation_batch(const FluctuationLaw& law, std::uint64_t seed,
                                     std::size_t count, int threads = 1);

/// Mean of the truncated series, sum_{l=3}^{L} lambda_l (ln(1+delta_l) -
/// delta_l) - d^2/(4(k-1)).
double fluctuation_mean(const FluctuationLaw& law);

/// Closed-form E[exp(order * (W + lambda_2 delta_2))]: 1 for order 1,
/// exp(sum_{l>=3} lambda_l delta_l^2) for order 2.
double fluctuation_exp_moment(const FluctuationLaw& law, int order);

/// Exact two-sample sup distance between empirical CDFs.
double ecdf_distance(std::span<const double> a, std::span<const double> b);

/// One JSON header line (law, seed, generator version), then one value per
/// line in round-trip precision.
void write_sample_batch(std::ostream& out, const SampleBatch& batch);
SampleBatch read_sample_batch(std::istream& in);

}  // namespace colorlab

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "colorlab/graph.hpp"
#include "colorlab/numeric.hpp"
#include "colorlab/observables.hpp"

namespace colorlab {

/// Poisson mean of l-cycles, d^l / (2l).
double cycle_poisson_mean(double d, int l);

/// Alternating correction (-1)^l / (k-1)^(l-1).
double cycle_correction(int k, int l);

/// Mean cycle count seen from a planted colouring: lambda_l * (1 + delta_l).
double planted_cycle_mean(double d, int k, int l);

/// Number of cyclic colour-type sequences of length l: (k-1)^l + (-1)^l(k-1);
/// satisfies T_l + T_{l-1} = k(k-1)^(l-1) with T_1 = 0.
std::int64_t cycle_type_count(int k, int l);

/// Shannon entropy with the 0 ln 0 = 0 convention.
double entropy(std::span<const double> p);

struct ExponentReport {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<double> location;
};

/// First-moment exponent H(rho) + (d/2) ln(1 - sum rho_i^2).
ExponentReport density_exponent(std::span<const double> rho, double d, int k);

/// Pair exponent H(rho) + (d/2) ln(1 - |rows|^2 - |cols|^2 + |rho|^2) over
/// k x k overlap densities (row-major).
ExponentReport overlap_exponent(std::span<const double> rho, double d, int k);

/// Pair exponent with both margins pinned to uniform:
/// H(rho) + (d/2) ln(1 - 2/k + |rho|^2). Coincides with overlap_exponent on
/// exactly uniform-margin matrices.
ExponentReport overlap_exponent_uniform(std::span<const double> rho, double d, int k);

/// Pair exponent with both margins pinned to a bucket centre:
/// H(rho) + (d/2) ln(1 - 2|centre|^2 + |rho|^2).
ExponentReport overlap_exponent_at_centre(std::span<const double> rho,
                                          std::span<const double> centre, double d, int k);

/// ln of the total first-moment asymptotic,
/// exp(d/2 + n f(uniform)) * (1 + d/(k-1))^(-(k-1)/2).
LogValue first_moment_asymptotic(const ModelParams& params);

/// ln of the per-density asymptotic,
/// (2 pi n)^((1-k)/2) k^(k/2) exp(d/2 + n f(rho)).
LogValue first_moment_density_asymptotic(const ModelParams& params,
                                         std::span<const double> rho);

/// Limit of E[Z^2]/E[Z]^2: (1 - d/(k-1)^2)^(-(k-1)^2/2) e^(-d/2).
/// Requires d < (k-1)^2.
double second_moment_ratio_limit(double d, int k);

/// The same constant as exp(sum_{l>=2} lambda_l delta_l^2), summed with an
/// explicit geometric tail bound; from_l shifts the series start.
double cycle_series_exponent(double d, int k, int from_l = 2, double tol = 1e-14);

/// Conditional first-moment ratio prod (1+delta_l)^{c_l} exp(-delta_l lambda_l)
/// over the census lengths.
double conditional_cycle_ratio(const CycleCensus& census, double d, int k);

struct SaddleConstants {
  double density_curvature;   // k (1 + d/(k-1))
  double pair_prefactor;      // e^{d/2} k^{k^2} (2 pi n)^{(1-k^2)/2}
  double overlap_curvature;   // k^2 (1 - d/(k-1)^2)
};

SaddleConstants saddle_constants(double d, int k, std::int64_t n);

/// The (k-1)^2-square matrix H with eps_free^T H eps_free = |eps|_2^2 for
/// every k x k matrix eps with zero row and column sums (eps_free is the
/// leading (k-1)x(k-1) block). Equals (I + J) tensor (I + J); determinant
/// k^{2(k-1)}, positive definite.
Eigen::MatrixXd norm_quadratic_form(int k);

enum class LatticeSumMode { exact, closed };

/// Gaussian sum over k x k matrices with entries in Z/n and zero row/column
/// sums: exact mode enumerates the lattice with a relative tail below 1e-12;
/// closed mode evaluates sqrt(2 pi n)^{(k-1)^2} D^{-(k-1)^2/2} k^{-(k-1)}.
double gaussian_lattice_sum(double D, int k, std::int64_t n, LatticeSumMode mode);

/// Slack of the uniform-margin upper bound at rho: the bound value minus the
/// exponent, with the vanishing finite-size correction dropped:
/// f(centre) - (2(k-1)ln(k-1) - d)/(4(k-1)^2) (k^2 |rho|^2 - 1) - f(rho).
double achlioptas_naor_slack(std::span<const double> rho, double d, int k);

}  // namespace colorlab

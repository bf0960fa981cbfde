#include "colorlab/rng.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

#include "colorlab/errors.hpp"

namespace colorlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ull * (stream + 1))));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound < 2) return 0;
  const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
  for (;;) {
    const std::uint64_t x = engine_() & mask;
    if (x < bound) return x;
  }
}

namespace {

// Hormann, "The transformed rejection method for generating Poisson random
// variables" (PTRD). Valid for lambda >= 10.
std::uint64_t poisson_ptrd(Rng& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = rng.unit() - 0.5;
    double v = rng.unit();
    double us = 0.5 - std::abs(u);
    double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * loglam - lambda - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

}  // namespace

std::uint64_t Rng::poisson(double lambda) {
  if (!(lambda >= 0.0)) throw ValidationError("poisson: lambda must be >= 0");
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) {
    std::uint64_t k = 0;
    double p = std::exp(-lambda);
    double cumulative = p;
    const double u = unit();
    while (u > cumulative) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cumulative += p;
    }
    return k;
  }
  return poisson_ptrd(*this, lambda);
}

}  // namespace colorlab

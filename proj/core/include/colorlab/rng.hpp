#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace colorlab {

/// Generator identifier embedded in every run record. Bump when the engine,
/// the substream derivation, or any variate algorithm changes.
inline constexpr std::string_view kGeneratorVersion = "mt19937_64/v1";

std::uint64_t splitmix64(std::uint64_t x);

/// Seedable deterministic RNG. The engine (std::mt19937_64) and all variate
/// algorithms here are fully specified, so identical seeds give identical
/// streams on every platform and thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, stream index) via splitmix64.
  /// Parallel work items take substream(seed, item_index).
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). Bitmask rejection, exactly uniform.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1), 53 mantissa bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Poisson variate: sequential inversion for lambda < 10, Hormann's PTRD
  /// transformed rejection for larger means. Exact for lambda >= 0.
  std::uint64_t poisson(double lambda);

 private:
  std::mt19937_64 engine_;
};

}  // namespace colorlab

#include "colorlab/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "colorlab/errors.hpp"

namespace colorlab {

Multigraph sample_gnm_multigraph(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  const std::int64_t m = params.edge_target();
  Rng rng(seed);
  Multigraph g;
  g.n = params.n;
  g.edges.reserve(static_cast<std::size_t>(m));
  const auto n = static_cast<std::uint64_t>(params.n);
  for (std::int64_t e = 0; e < m; ++e) {
    const auto u = static_cast<int>(rng.below(n));
    auto v = static_cast<int>(rng.below(n - 1));
    if (v >= u) ++v;
    g.add_edge(u, v);
  }
  return g;
}

Multigraph sample_gnm_simple(const ModelParams& params, std::uint64_t seed) {
  params.validate();
  if (params.edge_target() > params.pair_count())
    throw ValidationError("simple sampler: m exceeds the number of vertex pairs");
  Rng rng(seed);
  constexpr int kMaxAttempts = 1000000;
  const std::int64_t m = params.edge_target();
  const auto n = static_cast<std::uint64_t>(params.n);
  Multigraph g;
  g.n = params.n;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    g.edges.clear();
    for (std::int64_t e = 0; e < m; ++e) {
      const auto u = static_cast<int>(rng.below(n));
      auto v = static_cast<int>(rng.below(n - 1));
      if (v >= u) ++v;
      g.add_edge(u, v);
    }
    if (!g.has_parallel_edge()) return g;
  }
  throw GuardRefusal("simple sampler: no duplicate-free draw in 1e6 attempts (m too dense)");
}

double planted_edge_probability(int n, int k, double d) {
  return d * k / (static_cast<double>(n) * (k - 1));
}

PlantedSample sample_planted(int n, int k, double pprime, std::uint64_t seed) {
  if (n < 1) throw ValidationError("planted sampler: n must be >= 1");
  if (k < 2) throw ValidationError("planted sampler: k must be >= 2");
  if (!(pprime >= 0.0 && pprime <= 1.0))
    throw ValidationError("planted sampler: p' must lie in [0,1]");
  Rng rng(seed);
  PlantedSample out;
  out.colouring.k = k;
  out.colouring.values.resize(n);
  for (int v = 0; v < n; ++v)
    out.colouring.values[v] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  out.graph.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (out.colouring.values[u] != out.colouring.values[v] && rng.unit() < pprime)
        out.graph.add_edge(u, v);
  return out;
}

PlantedSample balance_augment(const Multigraph& g, const ColourAssignment& sigma,
                              double pprime, std::uint64_t seed) {
  if (!sigma.proper_for(g)) throw ValidationError("balance augment: colouring is not proper");
  if (!(pprime >= 0.0 && pprime <= 1.0))
    throw ValidationError("balance augment: p' must lie in [0,1]");
  const int k = sigma.k;
  const int n = g.n;
  const auto counts = colour_density(sigma).counts;

  // alpha = max_i |c_i - n/k| = max_i |k c_i - n| / k, taken as an exact rational.
  std::int64_t max_dev = 0;
  for (std::int64_t c : counts) max_dev = std::max(max_dev, std::abs(k * c - n));
  const std::int64_t ceil_alpha = (max_dev + k - 1) / k;
  const std::int64_t added = static_cast<std::int64_t>(k) * ceil_alpha;
  const int n_prime = n + static_cast<int>(added);

  // Class targets: every class reaches floor(n'/k), the n' mod k remainder
  // going to the largest classes (ties by index).
  const std::int64_t base = n_prime / k;
  const int rem = n_prime % k;
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[a] > counts[b]; });
  std::vector<std::int64_t> target(k, base);
  for (int r = 0; r < rem; ++r) target[order[r]] = base + 1;

  PlantedSample out;
  out.colouring.k = k;
  out.colouring.values = sigma.values;
  out.colouring.values.reserve(n_prime);
  for (int colour = 0; colour < k; ++colour)
    for (std::int64_t j = counts[colour]; j < target[colour]; ++j)
      out.colouring.values.push_back(colour);

  out.graph = g;
  out.graph.n = n_prime;
  Rng rng(seed);
  for (int i = n; i < n_prime; ++i)
    for (int j = 0; j < i; ++j)
      if (out.colouring.values[i] != out.colouring.values[j] && rng.unit() < pprime)
        out.graph.add_edge(j, i);
  return out;
}

Multigraph strip_augment(const Multigraph& g, int n) {
  if (n < 0 || n > g.n) throw ValidationError("strip: original vertex count out of range");
  Multigraph out;
  out.n = n;
  for (const auto& [u, v] : g.edges)
    if (u < n && v < n) out.edges.emplace_back(u, v);
  return out;
}

}  // namespace colorlab

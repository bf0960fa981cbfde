#include "colorlab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "colorlab/errors.hpp"

namespace colorlab {

bool ColourAssignment::proper_for(const Multigraph& g) const {
  if (g.n != n()) throw ValidationError("assignment/graph size mismatch");
  for (const auto& [u, v] : g.edges)
    if (values[u] == values[v]) return false;
  return true;
}

std::vector<double> ColourDensity::values() const {
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return out;
}

std::vector<double> OverlapMatrix::values() const {
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return out;
}

ColourDensity OverlapMatrix::row_margin() const {
  ColourDensity rho{n, std::vector<std::int64_t>(k, 0)};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) rho.counts[i] += at(i, j);
  return rho;
}

ColourDensity OverlapMatrix::column_margin() const {
  ColourDensity rho{n, std::vector<std::int64_t>(k, 0)};
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) rho.counts[j] += at(i, j);
  return rho;
}

ColourDensity colour_density(const ColourAssignment& sigma) {
  ColourDensity rho{sigma.n(), std::vector<std::int64_t>(sigma.k, 0)};
  for (int c : sigma.values) ++rho.counts[c];
  return rho;
}

OverlapMatrix overlap(const ColourAssignment& sigma, const ColourAssignment& tau) {
  if (sigma.n() != tau.n()) throw ValidationError("overlap: length mismatch");
  if (sigma.k != tau.k) throw ValidationError("overlap: colour count mismatch");
  const int k = sigma.k;
  OverlapMatrix rho{sigma.n(), k, std::vector<std::int64_t>(static_cast<std::size_t>(k) * k, 0)};
  for (int v = 0; v < sigma.n(); ++v)
    ++rho.counts[static_cast<std::size_t>(sigma.values[v]) * k + tau.values[v]];
  return rho;
}

void BalanceSpec::validate() const {
  if (omega < 1 || omega % 2 == 0) throw ValidationError("balance spec: omega must be odd >= 1");
  if (nu < 1 || nu % 2 == 0) throw ValidationError("balance spec: nu must be odd >= 1");
}

namespace {

// Sign of A - B*sqrt(n), decided exactly in integer arithmetic.
int cmp_sqrt(std::int64_t A, std::int64_t B, std::int64_t n) {
  if (B == 0) return (A > 0) - (A < 0);
  if (B > 0) {
    if (A <= 0) return (A == 0 && B == 0) ? 0 : -1;
    const __int128 lhs = static_cast<__int128>(A) * A;
    const __int128 rhs = static_cast<__int128>(B) * B * n;
    return (lhs > rhs) - (lhs < rhs);
  }
  if (A >= 0) return 1;
  const __int128 lhs = static_cast<__int128>(A) * A;
  const __int128 rhs = static_cast<__int128>(B) * B * n;
  return (rhs > lhs) - (rhs < lhs);
}

}  // namespace

bool is_balanced(const ColourDensity& rho, const BalanceSpec& spec) {
  spec.validate();
  const int k = rho.k();
  for (std::int64_t c : rho.counts) {
    const std::int64_t a = k * c - rho.n;  // rho_i - 1/k == a / (n k)
    const std::int64_t bound = static_cast<std::int64_t>(spec.omega) * k;
    if (cmp_sqrt(a, -bound, rho.n) < 0) return false;  // below 1/k - omega/sqrt(n)
    if (cmp_sqrt(a, bound, rho.n) >= 0) return false;  // at or above 1/k + omega/sqrt(n)
  }
  return true;
}

std::optional<std::vector<int>> density_bucket(const ColourDensity& rho,
                                               const BalanceSpec& spec) {
  if (!is_balanced(rho, spec)) return std::nullopt;
  const int k = rho.k();
  const double root_n = std::sqrt(static_cast<double>(rho.n));
  std::vector<int> s(k);
  std::vector<double> err(k);
  long long parity = 0;
  for (int i = 0; i < k; ++i) {
    const double x =
        static_cast<double>(spec.nu) * static_cast<double>(k * rho.counts[i] - rho.n) /
        (static_cast<double>(k) * root_n);
    const double r = std::floor(x + 0.5);
    s[i] = static_cast<int>(r);
    err[i] = x - r;
    parity += s[i];
  }
  if (parity % 2 != 0) {
    // Nearest even-parity lattice point: flip the coordinate whose rounding
    // error is largest to its second-nearest integer.
    int j = 0;
    for (int i = 1; i < k; ++i)
      if (std::abs(err[i]) > std::abs(err[j])) j = i;
    if (err[j] > 0)
      s[j] += 1;
    else if (err[j] < 0)
      s[j] -= 1;
    else
      s[j] += 1;  // exact centre: the upward neighbour keeps the box half-open
  }
  return s;
}

namespace {

void lattice_recurse(int k, int depth, int bound, int parity, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (depth == k) {
    if (parity % 2 == 0) out.push_back(cur);
    return;
  }
  for (int v = -bound; v <= bound; ++v) {
    cur[depth] = v;
    lattice_recurse(k, depth + 1, bound, parity + std::abs(v), cur, out);
  }
}

}  // namespace

std::vector<std::vector<int>> bucket_lattice(const BalanceSpec& spec, int k) {
  spec.validate();
  const int bound = spec.omega * spec.nu;
  double size = 1.0;
  for (int i = 0; i < k; ++i) size *= 2.0 * bound + 1.0;
  if (size > 2e7)
    throw GuardRefusal("bucket lattice: " + std::to_string(size) +
                       " indices exceed the 2e7 enumeration cap");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  lattice_recurse(k, 0, bound, 0, cur, out);
  return out;
}

std::vector<double> bucket_centre(const std::vector<int>& s, const BalanceSpec& spec, int k,
                                  std::int64_t n) {
  std::vector<double> centre(k);
  const double h = 1.0 / (spec.nu * std::sqrt(static_cast<double>(n)));
  for (int i = 0; i < k; ++i) centre[i] = 1.0 / k + s[i] * h;
  return centre;
}

bool bucket_box_contains(const std::vector<int>& s, const ColourDensity& rho,
                         const BalanceSpec& spec) {
  const int k = rho.k();
  for (int i = 0; i < k; ++i) {
    // x = nu*(k c - n)/(k sqrt(n)) must lie in [s_i - 1, s_i + 1).
    const std::int64_t A = static_cast<std::int64_t>(spec.nu) * (k * rho.counts[i] - rho.n);
    const std::int64_t lo = static_cast<std::int64_t>(s[i] - 1) * k;
    const std::int64_t hi = static_cast<std::int64_t>(s[i] + 1) * k;
    if (cmp_sqrt(A, lo, rho.n) < 0) return false;
    if (cmp_sqrt(A, hi, rho.n) >= 0) return false;
  }
  return true;
}

CycleCensus cycle_census(const Multigraph& g, int max_length) {
  if (max_length < 2) throw ValidationError("cycle census: max length must be >= 2");
  CycleCensus census{max_length,
                     std::vector<std::int64_t>(static_cast<std::size_t>(max_length) - 1, 0)};

  auto es = g.edges;
  std::sort(es.begin(), es.end());
  // Collapsed adjacency with edge multiplicities.
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(g.n);
  for (std::size_t i = 0; i < es.size();) {
    std::size_t j = i;
    while (j < es.size() && es[j] == es[i]) ++j;
    const auto mult = static_cast<std::int64_t>(j - i);
    const auto [u, v] = es[i];
    adj[u].emplace_back(v, mult);
    adj[v].emplace_back(u, mult);
    census.counts[0] += mult * (mult - 1) / 2;  // parallel pairs
    i = j;
  }

  if (max_length < 3) return census;

  std::vector<char> on_path(g.n, 0);
  std::vector<int> path;
  auto dfs = [&](auto&& self, int root, int u, std::int64_t mult_prod) -> void {
    for (const auto& [w, mw] : adj[u]) {
      if (w == root && path.size() >= 3) {
        if (path[1] < path.back())  // count each cycle once, from its least vertex
          census.counts[path.size() - 2] += mult_prod * mw;
      }
      if (w > root && !on_path[w] && static_cast<int>(path.size()) < max_length) {
        on_path[w] = 1;
        path.push_back(w);
        self(self, root, w, mult_prod * mw);
        path.pop_back();
        on_path[w] = 0;
      }
    }
  };
  for (int root = 0; root < g.n; ++root) {
    on_path[root] = 1;
    path.assign(1, root);
    dfs(dfs, root, root, 1);
    on_path[root] = 0;
  }
  return census;
}

}  // namespace colorlab

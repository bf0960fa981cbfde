#include "colorlab/exact_count.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "colorlab/errors.hpp"

namespace colorlab {

namespace {

void check_enumeration_guard(int n, int cap, const char* op) {
  if (n > cap)
    throw GuardRefusal(std::string(op) + ": n=" + std::to_string(n) +
                       " exceeds the enumeration guard (" + std::to_string(cap) + ")");
}

// Odometer over k^|colours| assignments. on_change(v, old, new) fires for
// every single-vertex change; at_leaf() after each full assignment.
template <class OnChange, class AtLeaf>
void enumerate_assignments(std::vector<int>& colours, int k, OnChange&& on_change,
                           AtLeaf&& at_leaf) {
  const int n = static_cast<int>(colours.size());
  at_leaf();
  for (;;) {
    int pos = 0;
    while (pos < n) {
      const int old = colours[pos];
      if (old + 1 < k) {
        colours[pos] = old + 1;
        on_change(pos, old, old + 1);
        break;
      }
      colours[pos] = 0;
      on_change(pos, old, 0);
      ++pos;
    }
    if (pos == n) return;
    at_leaf();
  }
}

struct Component {
  std::vector<int> vertices;                 // global ids
  std::vector<std::pair<int, int>> edges;    // local indices
};

std::vector<Component> split_components(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : edges) parent[find(u)] = find(v);

  std::map<int, int> root_to_comp;
  std::vector<Component> comps;
  std::vector<int> local(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    auto [it, fresh] = root_to_comp.try_emplace(r, static_cast<int>(comps.size()));
    if (fresh) comps.emplace_back();
    auto& comp = comps[it->second];
    local[v] = static_cast<int>(comp.vertices.size());
    comp.vertices.push_back(v);
  }
  for (const auto& [u, v] : edges)
    comps[root_to_comp[find(u)]].edges.emplace_back(local[u], local[v]);
  return comps;
}

// Incidence lists for incremental violation tracking.
std::vector<std::vector<int>> incidence(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> inc(n);
  for (const auto& [u, v] : edges) {
    inc[u].push_back(v);
    inc[v].push_back(u);
  }
  return inc;
}

}  // namespace

BigCount count_bruteforce(const Multigraph& g, int k, const CountGuards& guards) {
  if (k < 1) throw ValidationError("count: k must be >= 1");
  check_enumeration_guard(g.n, guards.max_enumeration_vertices, "count_bruteforce");
  const auto edges = g.simple_edges();
  const auto inc = incidence(g.n, edges);
  std::vector<int> colours(g.n, 0);
  std::int64_t violations = static_cast<std::int64_t>(edges.size());  // all vertices colour 0
  BigCount total = 0;
  enumerate_assignments(
      colours, k,
      [&](int v, int oldc, int newc) {
        for (int w : inc[v]) {
          violations -= (colours[w] == oldc);
          violations += (colours[w] == newc);
        }
      },
      [&] { total += (violations == 0); });
  return total;
}

namespace {

struct Factor {
  std::vector<int> scope;  // ascending vertex ids
  std::vector<BigCount> table;
  bool alive = true;
};

// Counts proper colourings of a connected component given by local vertex
// ids 0..vertex_count-1 and edges over those ids.
BigCount eliminate_component(int vertex_count, const std::vector<std::pair<int, int>>& edges,
                             int k, const CountGuards& guards) {
  std::vector<Factor> factors;
  factors.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    Factor f;
    f.scope = {std::min(u, v), std::max(u, v)};
    f.table.assign(static_cast<std::size_t>(k) * k, 0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        f.table[static_cast<std::size_t>(a) * k + b] = (a != b) ? 1 : 0;
    factors.push_back(std::move(f));
  }

  // Elimination graph, updated as eliminated vertices fuse their neighbours.
  std::map<int, std::set<int>> adj;
  for (int v = 0; v < vertex_count; ++v) adj[v];
  for (const auto& [u, v] : edges) {
    adj[u].insert(v);
    adj[v].insert(u);
  }

  while (!adj.empty()) {
    auto best = adj.begin();
    for (auto it = adj.begin(); it != adj.end(); ++it)
      if (it->second.size() < best->second.size()) best = it;
    const int v = best->first;

    std::vector<int> rest;  // scope union minus v
    std::vector<std::size_t> gathered;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (!factors[i].alive) continue;
      const auto& s = factors[i].scope;
      if (std::find(s.begin(), s.end(), v) == s.end()) continue;
      gathered.push_back(i);
      for (int u : s)
        if (u != v && std::find(rest.begin(), rest.end(), u) == rest.end()) rest.push_back(u);
    }
    std::sort(rest.begin(), rest.end());
    const int width = static_cast<int>(rest.size()) + 1;
    if (width > guards.max_elimination_width)
      throw GuardRefusal("count_dp: elimination width " + std::to_string(width) +
                         " exceeds cap " + std::to_string(guards.max_elimination_width));

    // Digit order: rest ascending (most significant first), v fastest.
    std::vector<int> order = rest;
    order.push_back(v);
    std::vector<int> digits(order.size(), 0);
    auto digit_of = [&](int u) {
      for (std::size_t p = 0; p < order.size(); ++p)
        if (order[p] == u) return digits[p];
      return 0;
    };

    std::size_t total_states = 1;
    for (std::size_t i = 0; i < order.size(); ++i) total_states *= static_cast<std::size_t>(k);

    Factor out;
    out.scope = rest;
    out.table.assign(total_states / static_cast<std::size_t>(k), 0);

    BigCount prod;
    for (std::size_t idx = 0;; ++idx) {
      prod = 1;
      for (std::size_t gi : gathered) {
        const auto& f = factors[gi];
        std::size_t fidx = 0;
        for (int u : f.scope) fidx = fidx * static_cast<std::size_t>(k) + digit_of(u);
        prod *= f.table[fidx];
        if (prod == 0) break;
      }
      if (prod != 0) out.table[idx / static_cast<std::size_t>(k)] += prod;
      if (idx + 1 == total_states) break;
      // advance odometer, last digit fastest
      for (std::size_t p = order.size(); p-- > 0;) {
        if (++digits[p] < k) break;
        digits[p] = 0;
      }
    }

    for (std::size_t gi : gathered) factors[gi].alive = false;
    factors.push_back(std::move(out));

    for (int u : adj[v]) adj[u].erase(v);
    for (int a : adj[v])
      for (int b : adj[v])
        if (a != b) adj[a].insert(b);
    adj.erase(v);
  }

  BigCount result = 1;
  for (const auto& f : factors)
    if (f.alive) {
      if (!f.scope.empty()) throw std::logic_error("count_dp: dangling non-scalar factor");
      result *= f.table[0];
    }
  return result;
}

}  // namespace

BigCount count_dp(const Multigraph& g, int k, const CountGuards& guards) {
  if (k < 1) throw ValidationError("count: k must be >= 1");
  if (k == 1) return g.edges.empty() ? 1 : 0;
  const auto edges = g.simple_edges();

  // Peel degree <= 1 vertices: pendant edge -> factor (k-1), isolated -> k.
  std::vector<std::set<int>> adj(g.n);
  for (const auto& [u, v] : edges) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::vector<char> removed(g.n, 0);
  std::vector<int> queue;
  for (int v = 0; v < g.n; ++v)
    if (adj[v].size() <= 1) queue.push_back(v);
  std::int64_t pendant = 0, isolated = 0;
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    if (removed[v]) continue;
    if (adj[v].size() > 1) continue;
    removed[v] = 1;
    if (adj[v].empty()) {
      ++isolated;
    } else {
      ++pendant;
      const int w = *adj[v].begin();
      adj[w].erase(v);
      adj[v].clear();
      if (adj[w].size() <= 1 && !removed[w]) queue.push_back(w);
    }
  }

  std::vector<int> core;
  std::vector<int> core_index(g.n, -1);
  for (int v = 0; v < g.n; ++v)
    if (!removed[v]) {
      core_index[v] = static_cast<int>(core.size());
      core.push_back(v);
    }
  std::vector<std::pair<int, int>> core_edges;
  for (const auto& [u, v] : edges)
    if (!removed[u] && !removed[v]) core_edges.emplace_back(core_index[u], core_index[v]);

  BigCount result = big_pow(k, isolated) * big_pow(k - 1, pendant);
  if (core.empty()) return result;

  for (const auto& comp : split_components(static_cast<int>(core.size()), core_edges)) {
    if (comp.vertices.size() == 1 && comp.edges.empty()) {
      result *= k;  // unreachable for a 2-core, kept for safety
      continue;
    }
    result *= eliminate_component(static_cast<int>(comp.vertices.size()), comp.edges, k, guards);
  }
  return result;
}

BigCount DensityCountTable::total() const {
  BigCount t = 0;
  for (const auto& [key, value] : rows) t += value;
  return t;
}

BigCount OverlapCountTable::total() const {
  BigCount t = 0;
  for (const auto& [key, value] : rows) t += value;
  return t;
}

DensityCountTable count_by_density(const Multigraph& g, int k, const CountGuards& guards) {
  if (k < 1) throw ValidationError("count: k must be >= 1");
  check_enumeration_guard(g.n, guards.max_enumeration_vertices, "count_by_density");
  const auto edges = g.simple_edges();

  DensityCountTable table{g.n, k, {}};
  std::map<DensityKey, BigCount> acc;
  acc.emplace(DensityKey(k, 0), BigCount(1));

  for (const auto& comp : split_components(g.n, edges)) {
    const int c = static_cast<int>(comp.vertices.size());
    const auto inc = incidence(c, comp.edges);
    std::vector<int> colours(c, 0);
    std::int64_t violations = static_cast<std::int64_t>(comp.edges.size());
    DensityKey counts(k, 0);
    counts[0] = c;
    std::map<DensityKey, BigCount> local;
    enumerate_assignments(
        colours, k,
        [&](int v, int oldc, int newc) {
          for (int w : inc[v]) {
            violations -= (colours[w] == oldc);
            violations += (colours[w] == newc);
          }
          --counts[oldc];
          ++counts[newc];
        },
        [&] {
          if (violations == 0) local[counts] += 1;
        });

    std::map<DensityKey, BigCount> next;
    DensityKey key(k);
    for (const auto& [gk, gv] : acc)
      for (const auto& [lk, lv] : local) {
        for (int i = 0; i < k; ++i) key[i] = gk[i] + lk[i];
        next[key] += gv * lv;
      }
    acc = std::move(next);
  }
  table.rows = std::move(acc);
  return table;
}

BigCount count_balanced(const Multigraph& g, int k, const BalanceSpec& spec,
                        const CountGuards& guards) {
  spec.validate();
  const auto table = count_by_density(g, k, guards);
  BigCount total = 0;
  for (const auto& [key, value] : table.rows)
    if (is_balanced(ColourDensity{g.n, key}, spec)) total += value;
  return total;
}

BigCount count_bucket(const Multigraph& g, int k, const BalanceSpec& spec,
                      const std::vector<int>& s, const CountGuards& guards) {
  spec.validate();
  const auto table = count_by_density(g, k, guards);
  BigCount total = 0;
  for (const auto& [key, value] : table.rows) {
    const auto bucket = density_bucket(ColourDensity{g.n, key}, spec);
    if (bucket && *bucket == s) total += value;
  }
  return total;
}

OverlapCountTable count_pairs_by_overlap(const Multigraph& g, int k,
                                         const CountGuards& guards) {
  if (k < 1) throw ValidationError("count: k must be >= 1");
  check_enumeration_guard(g.n, guards.max_pair_vertices, "count_pairs_by_overlap");
  const auto edges = g.simple_edges();

  std::map<DensityKey, BigCount> acc;
  acc.emplace(DensityKey(static_cast<std::size_t>(k) * k, 0), BigCount(1));

  for (const auto& comp : split_components(g.n, edges)) {
    const int c = static_cast<int>(comp.vertices.size());
    const auto inc = incidence(c, comp.edges);
    std::vector<int> colours(c, 0);
    std::int64_t violations = static_cast<std::int64_t>(comp.edges.size());
    std::vector<std::vector<int>> proper;
    enumerate_assignments(
        colours, k,
        [&](int v, int oldc, int newc) {
          for (int w : inc[v]) {
            violations -= (colours[w] == oldc);
            violations += (colours[w] == newc);
          }
        },
        [&] {
          if (violations == 0) proper.push_back(colours);
        });

    std::map<DensityKey, BigCount> local;
    DensityKey cell(static_cast<std::size_t>(k) * k);
    for (const auto& sigma : proper)
      for (const auto& tau : proper) {
        std::fill(cell.begin(), cell.end(), 0);
        for (int v = 0; v < c; ++v)
          ++cell[static_cast<std::size_t>(sigma[v]) * k + tau[v]];
        local[cell] += 1;
      }

    std::map<DensityKey, BigCount> next;
    DensityKey key(static_cast<std::size_t>(k) * k);
    for (const auto& [gk, gv] : acc)
      for (const auto& [lk, lv] : local) {
        for (std::size_t i = 0; i < key.size(); ++i) key[i] = gk[i] + lk[i];
        next[key] += gv * lv;
      }
    acc = std::move(next);
  }
  return OverlapCountTable{g.n, k, std::move(acc)};
}

double default_kappa(int k) {
  return std::pow(std::log(static_cast<double>(k)), 20.0) / static_cast<double>(k);
}

namespace {

// Shared scan over proper tau maintaining the overlap with sigma.
template <class AtProper>
void scan_proper_overlaps(const Multigraph& g, const ColourAssignment& sigma, int k,
                          const CountGuards& guards, const char* op, AtProper&& at_proper) {
  check_enumeration_guard(g.n, guards.max_enumeration_vertices, op);
  if (!sigma.proper_for(g)) throw ValidationError(std::string(op) + ": sigma is not proper");
  const auto edges = g.simple_edges();
  const auto inc = incidence(g.n, edges);
  const int n = g.n;

  std::vector<std::int64_t> ov(static_cast<std::size_t>(k) * k, 0);
  std::vector<int> colours(n, 0);
  for (int v = 0; v < n; ++v) ++ov[static_cast<std::size_t>(sigma.values[v]) * k + 0];
  std::int64_t violations = static_cast<std::int64_t>(edges.size());

  enumerate_assignments(
      colours, k,
      [&](int v, int oldc, int newc) {
        for (int w : inc[v]) {
          violations -= (colours[w] == oldc);
          violations += (colours[w] == newc);
        }
        const auto row = static_cast<std::size_t>(sigma.values[v]) * k;
        --ov[row + oldc];
        ++ov[row + newc];
      },
      [&] {
        if (violations == 0) at_proper(ov);
      });
}

}  // namespace

BigCount cluster_size(const Multigraph& g, const ColourAssignment& sigma, int k,
                      const CountGuards& guards) {
  const std::int64_t n = g.n;
  BigCount cluster = 0;
  scan_proper_overlaps(g, sigma, k, guards, "cluster_size",
                       [&](const std::vector<std::int64_t>& ov) {
                         int big = 0;
                         for (std::int64_t c : ov) big += (100 * k * c > 51 * n);
                         cluster += (big == k);
                       });
  return cluster;
}

bool is_separable_colouring(const Multigraph& g, const ColourAssignment& sigma, int k,
                            double kappa, const CountGuards& guards) {
  const std::int64_t n = g.n;
  // k*rho in (0.51, 1-kappa) <=> 100*k*c > 51*n and k*c < (1-kappa)*n.
  std::vector<char> banned(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t c = 0; c <= n; ++c)
    banned[static_cast<std::size_t>(c)] =
        (100 * k * c > 51 * n) &&
        (static_cast<double>(k) * static_cast<double>(c) < (1.0 - kappa) * static_cast<double>(n));
  bool separable = true;
  scan_proper_overlaps(g, sigma, k, guards, "is_separable_colouring",
                       [&](const std::vector<std::int64_t>& ov) {
                         if (!separable) return;
                         for (std::int64_t c : ov)
                           if (banned[static_cast<std::size_t>(c)]) {
                             separable = false;
                             return;
                           }
                       });
  return separable;
}

void write_density_csv(std::ostream& out, const DensityCountTable& table) {
  for (int i = 0; i < table.k; ++i) out << "rho_" << i + 1 << ',';
  out << "count\n";
  for (const auto& [key, value] : table.rows) {
    for (std::int64_t c : key) out << c << '/' << table.n << ',';
    out << value << '\n';
  }
}

void write_overlap_csv(std::ostream& out, const OverlapCountTable& table) {
  for (int i = 0; i < table.k; ++i)
    for (int j = 0; j < table.k; ++j) out << "rho_" << i + 1 << j + 1 << ',';
  out << "count\n";
  for (const auto& [key, value] : table.rows) {
    for (std::int64_t c : key) out << c << '/' << table.n << ',';
    out << value << '\n';
  }
}

}  // namespace colorlab

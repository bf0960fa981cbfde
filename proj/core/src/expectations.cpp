#include "colorlab/expectations.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "colorlab/errors.hpp"

namespace colorlab {

namespace {

std::int64_t monochromatic_pairs(const DensityKey& counts) {
  std::int64_t f = 0;
  for (std::int64_t c : counts) f += c * (c - 1) / 2;
  return f;
}

// ln of the edge-placement weight given F forbidden pairs.
std::optional<double> ln_edge_weight(const ModelParams& params, std::int64_t forbidden,
                                     Ensemble ensemble) {
  const std::int64_t m = params.edge_target();
  const std::int64_t N = params.pair_count();
  if (m == 0) return 0.0;
  if (ensemble == Ensemble::multigraph) {
    if (forbidden >= N) return std::nullopt;
    return static_cast<double>(m) *
           std::log1p(-static_cast<double>(forbidden) / static_cast<double>(N));
  }
  if (N - forbidden < m) return std::nullopt;
  return ln_binomial(static_cast<double>(N - forbidden), static_cast<double>(m)) -
         ln_binomial(static_cast<double>(N), static_cast<double>(m));
}

}  // namespace

LogValue expected_count_by_density(const ModelParams& params, const DensityKey& counts,
                                   Ensemble ensemble) {
  params.validate();
  if (static_cast<int>(counts.size()) != params.k)
    throw ValidationError("expected count: density has wrong colour count");
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw ValidationError("expected count: negative class size");
    total += c;
  }
  if (total != params.n)
    throw ValidationError("expected count: class sizes must sum to n");
  if (ensemble == Ensemble::simple && params.edge_target() > params.pair_count())
    throw ValidationError("expected count: m exceeds the number of vertex pairs");

  const auto weight = ln_edge_weight(params, monochromatic_pairs(counts), ensemble);
  if (!weight) return LogValue::zero();
  return LogValue::from_log(ln_multinomial(params.n, counts) + *weight);
}

LogValue expected_count(const ModelParams& params, Ensemble ensemble) {
  params.validate();
  const int k = params.k;
  std::vector<double> logs;
  DensityKey counts(k, 0);
  std::function<void(int, std::int64_t)> recurse = [&](int idx, std::int64_t remaining) {
    if (idx == k - 1) {
      counts[idx] = remaining;
      const auto v = expected_count_by_density(params, counts, ensemble);
      if (!v.is_zero()) logs.push_back(v.log());
      return;
    }
    for (std::int64_t c = 0; c <= remaining; ++c) {
      counts[idx] = c;
      recurse(idx + 1, remaining - c);
    }
  };
  recurse(0, params.n);
  if (logs.empty()) return LogValue::zero();
  return LogValue::from_log(log_sum_exp(logs));
}

LogValue expected_pair_count_by_overlap(const ModelParams& params, const DensityKey& cells) {
  params.validate();
  const int k = params.k;
  if (cells.size() != static_cast<std::size_t>(k) * k)
    throw ValidationError("expected pair count: overlap has wrong shape");
  std::int64_t total = 0;
  for (std::int64_t c : cells) {
    if (c < 0) throw ValidationError("expected pair count: negative cell");
    total += c;
  }
  if (total != params.n)
    throw ValidationError("expected pair count: cells must sum to n");

  DensityKey rows(k, 0), cols(k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      rows[i] += cells[static_cast<std::size_t>(i) * k + j];
      cols[j] += cells[static_cast<std::size_t>(i) * k + j];
    }
  const std::int64_t forbidden =
      monochromatic_pairs(rows) + monochromatic_pairs(cols) - monochromatic_pairs(cells);
  const auto weight = ln_edge_weight(params, forbidden, Ensemble::multigraph);
  if (!weight) return LogValue::zero();
  return LogValue::from_log(ln_multinomial(params.n, cells) + *weight);
}

OverlapRestriction OverlapRestriction::bucket(const BalanceSpec& spec, std::vector<int> s) {
  OverlapRestriction r;
  r.kind = Kind::bucket;
  r.spec = spec;
  r.s = std::move(s);
  return r;
}

OverlapRestriction OverlapRestriction::ball(double eta) {
  OverlapRestriction r;
  r.kind = Kind::ball;
  r.eta = eta;
  return r;
}

LogValue expected_pair_count(const ModelParams& params, const OverlapRestriction& restriction) {
  params.validate();
  const int k = params.k;
  const int cells = k * k;
  const std::int64_t n = params.n;
  const std::int64_t m = params.edge_target();
  const std::int64_t N = params.pair_count();

  double lattice_size = 1.0;
  for (int i = 1; i < cells; ++i)
    lattice_size *= static_cast<double>(n + i) / static_cast<double>(i);
  if (lattice_size > 5e7)
    throw GuardRefusal("expected_pair_count: overlap lattice has ~" +
                       std::to_string(lattice_size) + " points, exceeding the 5e7 cap");

  std::vector<double> lnfact(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::int64_t i = 1; i <= n; ++i)
    lnfact[static_cast<std::size_t>(i)] =
        lnfact[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));

  std::vector<std::int64_t> row(k, 0), col(k, 0), cur(cells, 0);
  std::vector<double> logs;
  double lnfact_cells = 0.0;
  std::int64_t cell_pairs = 0;

  const bool ball = restriction.kind == OverlapRestriction::Kind::ball;
  const bool bucket = restriction.kind == OverlapRestriction::Kind::bucket;

  auto admit = [&]() {
    if (bucket) {
      const auto rs = density_bucket(ColourDensity{params.n, row}, restriction.spec);
      const auto cs = density_bucket(ColourDensity{params.n, col}, restriction.spec);
      return rs && cs && *rs == restriction.s && *cs == restriction.s;
    }
    if (ball) {
      double dist2 = 0.0;
      for (std::int64_t c : cur) {
        const double diff =
            static_cast<double>(c) / static_cast<double>(n) - 1.0 / static_cast<double>(cells);
        dist2 += diff * diff;
      }
      return dist2 <= restriction.eta * restriction.eta;
    }
    return true;
  };

  std::function<void(int, std::int64_t)> recurse = [&](int idx, std::int64_t remaining) {
    if (idx == cells - 1) {
      const std::int64_t c = remaining;
      const int i = idx / k, j = idx % k;
      row[i] += c;
      col[j] += c;
      cur[idx] = c;
      if (admit()) {
        std::int64_t forbidden = -(cell_pairs + c * (c - 1) / 2);
        for (int a = 0; a < k; ++a) forbidden += row[a] * (row[a] - 1) / 2;
        for (int b = 0; b < k; ++b) forbidden += col[b] * (col[b] - 1) / 2;
        bool include = true;
        double weight = 0.0;
        if (m > 0) {
          if (forbidden >= N)
            include = false;  // zero-probability overlap, pruned
          else
            weight = static_cast<double>(m) *
                     std::log1p(-static_cast<double>(forbidden) / static_cast<double>(N));
        }
        if (include)
          logs.push_back(lnfact[static_cast<std::size_t>(n)] - lnfact_cells -
                         lnfact[static_cast<std::size_t>(c)] + weight);
      }
      row[i] -= c;
      col[j] -= c;
      cur[idx] = 0;
      return;
    }
    const int i = idx / k, j = idx % k;
    for (std::int64_t c = 0; c <= remaining; ++c) {
      row[i] += c;
      col[j] += c;
      cur[idx] = c;
      lnfact_cells += lnfact[static_cast<std::size_t>(c)];
      cell_pairs += c * (c - 1) / 2;
      recurse(idx + 1, remaining - c);
      row[i] -= c;
      col[j] -= c;
      cur[idx] = 0;
      lnfact_cells -= lnfact[static_cast<std::size_t>(c)];
      cell_pairs -= c * (c - 1) / 2;
    }
  };
  recurse(0, n);
  if (logs.empty()) return LogValue::zero();
  return LogValue::from_log(log_sum_exp(logs));
}

}  // namespace colorlab

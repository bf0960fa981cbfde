#include "colorlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "colorlab/asymptotics.hpp"
#include "colorlab/errors.hpp"
#include "colorlab/exact_count.hpp"

namespace colorlab {

namespace {

constexpr double kEntryFloor = 1e-12;

double margin_residual_of(int k, const std::vector<double>& e) {
  double res = 0.0;
  for (int i = 0; i < k; ++i) {
    double row = 0.0, col = 0.0;
    for (int j = 0; j < k; ++j) {
      row += e[static_cast<std::size_t>(i) * k + j];
      col += e[static_cast<std::size_t>(j) * k + i];
    }
    res = std::max({res, std::abs(row - 1.0 / k), std::abs(col - 1.0 / k)});
  }
  return res;
}

}  // namespace

double UniformMarginMatrix::margin_residual() const {
  return margin_residual_of(k, entries);
}

UniformMarginMatrix project_uniform_margins(int k, std::vector<double> entries, double tol,
                                            int max_sweeps) {
  if (k < 2) throw ValidationError("margin projection: k must be >= 2");
  if (entries.size() != static_cast<std::size_t>(k) * k)
    throw ValidationError("margin projection: wrong shape");
  for (double& x : entries) {
    if (!(x >= 0.0)) throw ValidationError("margin projection: negative entry");
    x = std::max(x, kEntryFloor);
  }
  const double target = 1.0 / k;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < k; ++i) {
      double row = 0.0;
      for (int j = 0; j < k; ++j) row += entries[static_cast<std::size_t>(i) * k + j];
      const double scale = target / row;
      for (int j = 0; j < k; ++j) entries[static_cast<std::size_t>(i) * k + j] *= scale;
    }
    for (int j = 0; j < k; ++j) {
      double col = 0.0;
      for (int i = 0; i < k; ++i) col += entries[static_cast<std::size_t>(i) * k + j];
      const double scale = target / col;
      for (int i = 0; i < k; ++i) entries[static_cast<std::size_t>(i) * k + j] *= scale;
    }
    if (margin_residual_of(k, entries) < tol) return UniformMarginMatrix{k, std::move(entries)};
  }
  throw GuardRefusal("margin projection: residual " +
                     std::to_string(margin_residual_of(k, entries)) + " after " +
                     std::to_string(max_sweeps) + " sweeps");
}

namespace {

AscentResult ascend(std::vector<double> rho, double d, int k,
                    const IterateCallback& on_iterate) {
  constexpr int kMaxIterations = 5000;
  const auto cells = static_cast<std::size_t>(k) * k;
  rho = project_uniform_margins(k, std::move(rho)).entries;
  double value = overlap_exponent_uniform(rho, d, k).value;
  double step = 0.5;
  AscentResult result;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    double norm2 = 0.0;
    for (double x : rho) norm2 += x * x;
    const double arg = 1.0 - 2.0 / k + norm2;
    std::vector<double> candidate(cells);
    bool improved = false;
    while (step > 1e-14) {
      for (std::size_t idx = 0; idx < cells; ++idx) {
        const double grad = -std::log(rho[idx]) - 1.0 + d * rho[idx] / arg;
        candidate[idx] = std::max(rho[idx] * std::exp(step * grad), kEntryFloor);
      }
      candidate = project_uniform_margins(k, std::move(candidate)).entries;
      const double cand_value = overlap_exponent_uniform(candidate, d, k).value;
      if (cand_value > value) {
        improved = true;
        double move = 0.0;
        for (std::size_t idx = 0; idx < cells; ++idx)
          move = std::max(move, std::abs(candidate[idx] - rho[idx]));
        rho.swap(candidate);
        value = cand_value;
        if (on_iterate) on_iterate(rho);
        if (move < 1e-13) result.converged = true;
        step = std::min(step * 2.0, 0.5);
        break;
      }
      step /= 2.0;
    }
    if (!improved || result.converged) {
      result.converged = true;
      break;
    }
  }
  result.endpoint = std::move(rho);
  result.value = value;
  result.iterations = iter;
  return result;
}

}  // namespace

OptimizerReport maximize_uniform_pair_exponent(double d, int k, int random_starts,
                                               std::uint64_t seed,
                                               const IterateCallback& on_iterate) {
  if (k < 2) throw ValidationError("optimizer: k must be >= 2");
  if (!(d >= 0.0)) throw ValidationError("optimizer: d must be >= 0");
  const auto cells = static_cast<std::size_t>(k) * k;

  OptimizerReport report;
  report.k = k;
  report.d = d;
  report.seed = seed;

  std::vector<std::vector<double>> starts;
  starts.emplace_back(cells, 1.0 / static_cast<double>(cells));  // barycentre

  // Permutation-supported corners, smoothed toward the barycentre.
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int perm_count = 0;
  do {
    std::vector<double> corner(cells, 0.1 / static_cast<double>(cells));
    for (int i = 0; i < k; ++i)
      corner[static_cast<std::size_t>(i) * k + perm[i]] += 0.9 / k;
    starts.push_back(std::move(corner));
  } while (std::next_permutation(perm.begin(), perm.end()) && ++perm_count < 720);

  Rng rng = Rng::substream(seed, 0);
  for (int r = 0; r < random_starts; ++r) {
    std::vector<double> random(cells);
    for (double& x : random) x = -std::log(1.0 - rng.unit());
    starts.push_back(std::move(random));
  }

  report.value_at_barycentre =
      overlap_exponent_uniform(std::vector<double>(cells, 1.0 / static_cast<double>(cells)), d, k)
          .value;

  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    report.starts.push_back(ascend(std::move(starts[i]), d, k, on_iterate));
    if (report.starts[i].value > report.starts[best_idx].value) best_idx = i;
  }
  report.best = report.starts[best_idx].endpoint;
  report.best_value = report.starts[best_idx].value;
  report.stability = stability_class(report.best, k);
  report.separable = is_separable_matrix(report.best, k, default_kappa(k));
  return report;
}

int stability_class(const std::vector<double>& rho, int k) {
  if (rho.size() != static_cast<std::size_t>(k) * k)
    throw ValidationError("stability: wrong shape");
  int big = 0;
  for (double x : rho) big += (x > 0.51 / k);
  return big;
}

bool is_separable_matrix(const std::vector<double>& rho, int k, double kappa) {
  if (rho.size() != static_cast<std::size_t>(k) * k)
    throw ValidationError("separability: wrong shape");
  for (double x : rho) {
    const double scaled = k * x;
    if (scaled > 0.51 && scaled < 1.0 - kappa) return false;
  }
  return true;
}

double second_moment_threshold_proxy(int k, double tol, std::uint64_t seed) {
  if (k < 3) throw ValidationError("threshold proxy: k must be >= 3");
  if (!(tol > 0.0)) throw ValidationError("threshold proxy: tol must be > 0");
  constexpr int kRandomStarts = 24;
  std::uint64_t stream = 0;
  auto barycentre_is_global = [&](double d) {
    const auto report = maximize_uniform_pair_exponent(
        d, k, kRandomStarts, splitmix64(seed ^ stream++));
    return report.best_value <= report.value_at_barycentre + 1e-8;
  };
  double lo = 2.0 * (k - 1) * std::log(static_cast<double>(k - 1));
  double hi = 2.0 * k * std::log(static_cast<double>(k));
  if (!barycentre_is_global(lo))
    throw GuardRefusal("threshold proxy: lower bracket fails at d=" + std::to_string(lo));
  if (barycentre_is_global(hi))
    throw GuardRefusal("threshold proxy: upper bracket passes at d=" + std::to_string(hi));
  while (hi - lo > tol) {
    const double mid = (lo + hi) / 2.0;
    if (barycentre_is_global(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::string to_json(const OptimizerReport& report) {
  nlohmann::json j;
  j["k"] = report.k;
  j["d"] = report.d;
  j["seed"] = report.seed;
  j["best"] = report.best;
  j["best_value"] = report.best_value;
  j["value_at_barycentre"] = report.value_at_barycentre;
  j["stability"] = report.stability;
  j["separable"] = report.separable;
  j["start_count"] = report.starts.size();
  auto& starts = j["starts"] = nlohmann::json::array();
  for (const auto& s : report.starts)
    starts.push_back({{"value", s.value},
                      {"iterations", s.iterations},
                      {"converged", s.converged}});
  return j.dump();
}

}  // namespace colorlab

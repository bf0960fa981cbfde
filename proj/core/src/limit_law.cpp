#include "colorlab/limit_law.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <thread>

#include <json.hpp>

#include "colorlab/asymptotics.hpp"
#include "colorlab/errors.hpp"

namespace colorlab {

void FluctuationLaw::validate() const {
  if (k < 3) throw ValidationError("fluctuation law: k must be >= 3");
  if (!(d >= 0.0)) throw ValidationError("fluctuation law: d must be >= 0");
  const double km1sq = static_cast<double>(k - 1) * (k - 1);
  if (!(d < km1sq))
    throw ValidationError("fluctuation law: d must be < (k-1)^2 for convergence");
  if (truncation == 0 && !(tolerance > 0.0))
    throw ValidationError("fluctuation law: adaptive truncation needs tolerance > 0");
  if (truncation != 0 && truncation < 3)
    throw ValidationError("fluctuation law: truncation must be >= 3");
}

int FluctuationLaw::resolved_truncation() const {
  validate();
  return truncation != 0 ? truncation : choose_truncation(d, k, tolerance);
}

int choose_truncation(double d, int k, double tol) {
  if (k < 3 || !(tol > 0.0)) throw ValidationError("choose_truncation: k >= 3, tol > 0");
  const double km1 = k - 1;
  if (!(d >= 0.0 && d < km1 * km1))
    throw ValidationError("choose_truncation: series diverges unless 0 <= d < (k-1)^2");
  if (d == 0.0) return 3;
  const double r1 = std::sqrt(d) / km1;        // ratio of |delta| sqrt(lambda)
  const double r2 = d / (km1 * km1);           // ratio of delta^2 lambda
  double p1 = std::pow(r1, 4);                 // r1^(L+1) at L = 3
  double p2 = std::pow(r2, 4);
  for (int trunc = 3; trunc < 1000000; ++trunc) {
    const int l = trunc + 1;
    const double t1 = km1 * p1 / std::sqrt(2.0 * l);
    const double t2 = km1 * km1 * p2 / (2.0 * l);
    if (t1 / (1.0 - r1) + t2 / (1.0 - r2) < tol) return trunc;
    p1 *= r1;
    p2 *= r2;
  }
  throw GuardRefusal("choose_truncation: no truncation below 1e6 terms reaches the tolerance");
}

double sample_fluctuation(const FluctuationLaw& law, Rng& rng) {
  const int trunc = law.resolved_truncation();
  const double km1 = law.k - 1;
  double value = -law.d * law.d / (4.0 * km1);  // equals lambda_2 delta_2 exactly
  for (int l = 3; l <= trunc; ++l) {
    const double lambda = cycle_poisson_mean(law.d, l);
    if (!(lambda <= 4e15))
      throw GuardRefusal("fluctuation sampler: lambda_" + std::to_string(l) +
                         " exceeds the exact-integer range of double");
    const double delta = cycle_correction(law.k, l);
    const auto x = static_cast<double>(rng.poisson(lambda));
    value += x * std::log1p(delta) - lambda * delta;
  }
  return value;
}

SampleBatch sample_fluctuation_batch(const FluctuationLaw& law, std::uint64_t seed,
                                     std::size_t count, int threads) {
  FluctuationLaw resolved = law;
  resolved.truncation = law.resolved_truncation();
  SampleBatch batch{resolved, seed, std::vector<double>(count)};
  const int workers = std::max(1, threads);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      Rng rng = Rng::substream(seed, i);
      batch.values[i] = sample_fluctuation(resolved, rng);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return batch;
}

double fluctuation_mean(const FluctuationLaw& law) {
  const int trunc = law.resolved_truncation();
  const double km1 = law.k - 1;
  double mean = -law.d * law.d / (4.0 * km1);
  for (int l = 3; l <= trunc; ++l) {
    const double lambda = cycle_poisson_mean(law.d, l);
    const double delta = cycle_correction(law.k, l);
    mean += lambda * (std::log1p(delta) - delta);
  }
  return mean;
}

double fluctuation_exp_moment(const FluctuationLaw& law, int order) {
  law.validate();
  if (order == 1) return 1.0;
  if (order == 2) return cycle_series_exponent(law.d, law.k, 3);
  throw ValidationError("fluctuation moment: order must be 1 or 2");
}

double ecdf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("ecdf distance: empty batch");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double dist = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j]))
      x = sa[i];
    else
      x = sb[j];
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    dist = std::max(dist, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return dist;
}

void write_sample_batch(std::ostream& out, const SampleBatch& batch) {
  nlohmann::json header{{"d", batch.law.d},
                        {"k", batch.law.k},
                        {"truncation", batch.law.truncation},
                        {"tolerance", batch.law.tolerance},
                        {"seed", batch.seed},
                        {"count", batch.values.size()},
                        {"generator", std::string(kGeneratorVersion)}};
  out << header.dump() << '\n';
  char buf[64];
  for (double v : batch.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

SampleBatch read_sample_batch(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("sample batch: missing header");
  const auto header = nlohmann::json::parse(line);
  SampleBatch batch;
  batch.law.d = header.at("d").get<double>();
  batch.law.k = header.at("k").get<int>();
  batch.law.truncation = header.at("truncation").get<int>();
  batch.law.tolerance = header.at("tolerance").get<double>();
  batch.seed = header.at("seed").get<std::uint64_t>();
  const auto count = header.at("count").get<std::size_t>();
  batch.values.reserve(count);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    batch.values.push_back(std::stod(line));
  }
  if (batch.values.size() != count)
    throw ValidationError("sample batch: header count does not match value lines");
  return batch;
}

}  // namespace colorlab

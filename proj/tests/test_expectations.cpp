#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "colorlab/errors.hpp"
#include "colorlab/exact_count.hpp"
#include "colorlab/expectations.hpp"
#include "colorlab/numeric.hpp"
#include "colorlab/sampling.hpp"

using namespace colorlab;

TEST_CASE("log values behave") {
  CHECK(LogValue::zero().is_zero());
  CHECK(LogValue::from_value(0.0).is_zero());
  const auto two = LogValue::from_value(2.0);
  const auto three = LogValue::from_value(3.0);
  CHECK((two * three).value() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK((two + three).value() == doctest::Approx(5.0).epsilon(1e-14));
  CHECK((two / three).value() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK((LogValue::zero() + two).value() == doctest::Approx(2.0));
  CHECK((LogValue::zero() * two).is_zero());
  CHECK_THROWS_AS(two / LogValue::zero(), ValidationError);
}

TEST_CASE("log_of large counts") {
  CHECK(log_of(BigCount(1)) == 0.0);
  CHECK(log_of(big_pow(3, 400)) == doctest::Approx(400.0 * std::log(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(log_of(BigCount(0)), ValidationError);
}

TEST_CASE("per-density expectation on pinned cases") {
  SUBCASE("n=2, m=1, k=2: the forced edge keeps both bichromatic maps") {
    ModelParams p{2, 1.0, 2};
    CHECK(expected_count_by_density(p, {1, 1}, Ensemble::multigraph).value() ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(expected_count_by_density(p, {2, 0}, Ensemble::multigraph).is_zero());
  }
  SUBCASE("n=3, m=3, k=3 simple: the triangle keeps all six balanced maps") {
    ModelParams p{3, 2.0, 3};
    CHECK(expected_count_by_density(p, {1, 1, 1}, Ensemble::simple).value() ==
          doctest::Approx(6.0).epsilon(1e-12));
  }
  SUBCASE("singleton classes carry the multinomial weight exactly") {
    ModelParams p{4, 1.0, 4};  // m = 2
    CHECK(expected_count_by_density(p, {1, 1, 1, 1}, Ensemble::simple).value() ==
          doctest::Approx(24.0).epsilon(1e-12));
  }
  SUBCASE("coordinate permutations leave the value unchanged") {
    ModelParams p{3, 2.0, 12};
    DensityKey key{6, 4, 2};
    const double base = expected_count_by_density(p, key, Ensemble::multigraph).log();
    std::sort(key.begin(), key.end());
    do {
      CHECK(expected_count_by_density(p, key, Ensemble::multigraph).log() ==
            doctest::Approx(base).epsilon(1e-13));
    } while (std::next_permutation(key.begin(), key.end()));
  }
  SUBCASE("validation") {
    ModelParams p{3, 2.0, 6};
    CHECK_THROWS_AS(expected_count_by_density(p, {3, 3}, Ensemble::multigraph),
                    ValidationError);
    CHECK_THROWS_AS(expected_count_by_density(p, {4, 4, -2}, Ensemble::multigraph),
                    ValidationError);
  }
}

TEST_CASE("ensembles agree in the sparse limit") {
  ModelParams p{3, 0.1, 200};  // m = 10 out of N = 19900 pairs
  const DensityKey near_uniform{67, 67, 66};
  const double multi = expected_count_by_density(p, near_uniform, Ensemble::multigraph).log();
  const double simple = expected_count_by_density(p, near_uniform, Ensemble::simple).log();
  CHECK(std::abs(multi - simple) < 0.01);
}

TEST_CASE("total expectation identities") {
  SUBCASE("no edges counts every map") {
    ModelParams zero{3, 0.0, 4};
    CHECK(zero.edge_target() == 0);
    CHECK(expected_count(zero, Ensemble::multigraph).value() ==
          doctest::Approx(81.0).epsilon(1e-12));
    CHECK(expected_count(zero, Ensemble::simple).value() ==
          doctest::Approx(81.0).epsilon(1e-12));
  }
  SUBCASE("expectation grows strictly with k") {
    ModelParams p2{2, 2.0, 12}, p3{3, 2.0, 12}, p4{4, 2.0, 12};
    const double e2 = expected_count(p2, Ensemble::multigraph).log();
    const double e3 = expected_count(p3, Ensemble::multigraph).log();
    const double e4 = expected_count(p4, Ensemble::multigraph).log();
    CHECK(e2 < e3);
    CHECK(e3 < e4);
  }
  SUBCASE("Monte Carlo means match the exact expectation (multigraph)") {
    ModelParams p{3, 2.0, 8};
    const double log_expected = expected_count(p, Ensemble::multigraph).log();
    const int draws = 4000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto z = count_bruteforce(sample_gnm_multigraph(p, 100 + i), 3);
      const double ratio = z == 0 ? 0.0 : std::exp(log_of(z) - log_expected);
      sum += ratio;
      sumsq += ratio * ratio;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(sumsq / draws - mean * mean);
    CHECK(std::abs(mean - 1.0) < 3 * sd / std::sqrt(static_cast<double>(draws)));
  }
  SUBCASE("Monte Carlo means match the exact expectation (simple)") {
    ModelParams p{3, 2.0, 8};
    const double log_expected = expected_count(p, Ensemble::simple).log();
    const int draws = 4000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto z = count_bruteforce(sample_gnm_simple(p, 500 + i), 3);
      const double ratio = z == 0 ? 0.0 : std::exp(log_of(z) - log_expected);
      sum += ratio;
      sumsq += ratio * ratio;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(sumsq / draws - mean * mean);
    CHECK(std::abs(mean - 1.0) < 3 * sd / std::sqrt(static_cast<double>(draws)));
  }
}

TEST_CASE("per-density Monte Carlo agrees with the exact formula") {
  ModelParams p{3, 2.0, 12};
  const int draws = 3000;
  std::map<DensityKey, double> sums, sumsqs;
  for (int i = 0; i < draws; ++i) {
    const auto g = sample_gnm_multigraph(p, 7000 + i);
    const auto table = count_by_density(g, 3);
    for (const auto& [key, value] : table.rows) {
      const double v = value.convert_to<double>();
      sums[key] += v;
      sumsqs[key] += v * v;
    }
  }
  int tested = 0;
  for (const auto& [key, sum] : sums) {
    const double mean = sum / draws;
    if (mean < 5.0) continue;  // skip noise-dominated rare densities
    const double var = sumsqs[key] / draws - mean * mean;
    const double se = std::sqrt(var / draws);
    const double exact = expected_count_by_density(p, key, Ensemble::multigraph).value();
    CHECK(std::abs(mean - exact) < 3.5 * se);
    ++tested;
  }
  CHECK(tested > 20);
}

TEST_CASE("log-sum accumulation is order insensitive") {
  ModelParams p{3, 2.0, 40};
  std::vector<double> logs;
  DensityKey key(3);
  for (std::int64_t a = 0; a <= 40; ++a)
    for (std::int64_t b = 0; a + b <= 40; ++b) {
      key = {a, b, 40 - a - b};
      const auto v = expected_count_by_density(p, key, Ensemble::multigraph);
      if (!v.is_zero()) logs.push_back(v.log());
    }
  const double forward = log_sum_exp(logs);
  std::reverse(logs.begin(), logs.end());
  const double backward = log_sum_exp(logs);
  CHECK(std::abs(forward - backward) < 1e-10 * std::abs(forward));

  LogSumAccumulator acc;
  for (double x : logs) acc.add_log(x);
  CHECK(acc.total().log() == doctest::Approx(forward).epsilon(1e-12));
}

TEST_CASE("pair expectation identities") {
  SUBCASE("sparse pinned case equals the direct pair enumeration") {
    // direct oracle: sum over all sigma,tau of (1 - F/N)^m at n=5, k=2
    ModelParams p{2, 1.6, 5};  // m = 4, N = 10
    const int n = 5, k = 2;
    double direct = 0.0;
    for (int sig = 0; sig < 32; ++sig)
      for (int tau = 0; tau < 32; ++tau) {
        std::int64_t rows[2] = {0, 0}, cols[2] = {0, 0}, cells[4] = {0, 0, 0, 0};
        for (int v = 0; v < n; ++v) {
          const int a = (sig >> v) & 1, b = (tau >> v) & 1;
          ++rows[a];
          ++cols[b];
          ++cells[a * k + b];
        }
        auto c2 = [](std::int64_t x) { return x * (x - 1) / 2; };
        const double forbidden = static_cast<double>(c2(rows[0]) + c2(rows[1]) + c2(cols[0]) +
                                                     c2(cols[1]) - c2(cells[0]) - c2(cells[1]) -
                                                     c2(cells[2]) - c2(cells[3]));
        const double w = 1.0 - forbidden / 10.0;
        direct += w > 0.0 ? std::pow(w, 4) : 0.0;
      }
    CHECK(expected_pair_count(p).value() == doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("Monte Carlo squared counts match") {
    ModelParams p{2, 2.0, 6};
    const double log_pair = expected_pair_count(p).log();
    const int draws = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
      const auto z = count_bruteforce(sample_gnm_multigraph(p, 300 + i), 2);
      const double r = std::exp(2.0 * log_of(std::max(z, BigCount(1))) - log_pair) *
                       (z == 0 ? 0.0 : 1.0);
      sum += r;
      sumsq += r * r;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt(sumsq / draws - mean * mean);
    CHECK(std::abs(mean - 1.0) < 3 * sd / std::sqrt(static_cast<double>(draws)));
  }
  SUBCASE("restrictions only remove mass") {
    ModelParams p{3, 2.0, 9};
    const double full = expected_pair_count(p).log();
    const auto bucket = expected_pair_count(
        p, OverlapRestriction::bucket(BalanceSpec{1, 1}, {0, 0, 0}));
    CHECK(bucket.log() < full);
    // a ball wide enough to hold the whole simplex changes nothing
    const auto wide = expected_pair_count(p, OverlapRestriction::ball(2.0));
    CHECK(wide.log() == doctest::Approx(full).epsilon(1e-14));
  }
  SUBCASE("overlap expectation reduces to the multinomial without forbidden pairs") {
    ModelParams p{2, 1.0, 2};  // m = 1, N = 1; the diagonal overlap forbids nothing
    CHECK(expected_pair_count_by_overlap(p, {1, 0, 0, 1}).value() ==
          doctest::Approx(2.0).epsilon(1e-12));
    // fully monochromatic pair under both maps is forbidden by the edge
    CHECK(expected_pair_count_by_overlap(p, {2, 0, 0, 0}).is_zero());
  }
}

TEST_CASE("pair expectation guard") {
  ModelParams p{4, 2.0, 60};  // C(60+15,15) compositions is far beyond the cap
  CHECK_THROWS_AS(expected_pair_count(p), GuardRefusal);
}

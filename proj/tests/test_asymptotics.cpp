#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "colorlab/asymptotics.hpp"
#include "colorlab/errors.hpp"
#include "colorlab/expectations.hpp"
#include "colorlab/graph.hpp"
#include "colorlab/numeric.hpp"
#include "colorlab/rng.hpp"

using namespace colorlab;

TEST_CASE("cycle statistics closed forms") {
  CHECK(cycle_poisson_mean(2.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cycle_correction(3, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cycle_correction(3, 3) == doctest::Approx(-0.25).epsilon(1e-15));
  CHECK(planted_cycle_mean(2.0, 3, 3) == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 3 + static_cast<int>(rng.below(5));
    const double d = 0.3 + 4.0 * rng.unit();
    const int l = 2 + static_cast<int>(rng.below(9));
    CHECK(planted_cycle_mean(d, k, l) ==
          doctest::Approx(cycle_poisson_mean(d, l) * (1.0 + cycle_correction(k, l)))
              .epsilon(1e-14));
    // the limiting law's trailing constant is exactly lambda_2 delta_2
    CHECK(cycle_poisson_mean(d, 2) * cycle_correction(k, 2) ==
          doctest::Approx(d * d / (4.0 * (k - 1))).epsilon(1e-14));
  }
  // the corrections die off geometrically below the convergence boundary
  CHECK(std::abs(cycle_correction(3, 30)) < 1e-8);
  CHECK(cycle_poisson_mean(2.0, 30) * cycle_correction(3, 30) * cycle_correction(3, 30) < 1e-6);
}

TEST_CASE("cycle type counts") {
  CHECK(cycle_type_count(3, 2) == 6);
  CHECK(cycle_type_count(3, 3) == 6);
  CHECK(cycle_type_count(4, 3) == 24);
  for (int k = 2; k <= 6; ++k) {
    CHECK(cycle_type_count(k, 1) == 0);
    for (int l = 2; l <= 20; ++l) {
      std::int64_t pow = 1;
      for (int i = 0; i < l - 1; ++i) pow *= (k - 1);
      CHECK(cycle_type_count(k, l) + cycle_type_count(k, l - 1) ==
            static_cast<std::int64_t>(k) * pow);
    }
  }
}

TEST_CASE("entropy") {
  const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
  CHECK(entropy(uniform) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  const std::vector<double> with_zero{0.5, 0.5, 0.0};
  CHECK(entropy(with_zero) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> p(4);
    double total = 0.0;
    for (double& x : p) total += (x = -std::log(1.0 - rng.unit()));
    for (double& x : p) x /= total;
    if (std::abs(p[0] - 0.25) > 1e-3) CHECK(entropy(p) < std::log(4.0));
  }
  CHECK_THROWS_AS(entropy(std::vector<double>{-0.1, 1.1}), ValidationError);
}

TEST_CASE("density exponent") {
  const std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto at_uniform = density_exponent(uniform, 2.0, 3);
  CHECK(at_uniform.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  // strict maximum at the uniform density
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> p(3);
    double total = 0.0;
    for (double& x : p) total += (x = 0.01 - std::log(1.0 - rng.unit()));
    for (double& x : p) x /= total;
    double dist = 0.0;
    for (double x : p) dist += (x - 1.0 / 3) * (x - 1.0 / 3);
    if (dist > 1e-8) CHECK(density_exponent(p, 2.0, 3).value < at_uniform.value);
  }

  // concavity along random chords
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(3), b(3), mid(3);
    double ta = 0.0, tb = 0.0;
    for (double& x : a) ta += (x = 0.05 - std::log(1.0 - rng.unit()));
    for (double& x : b) tb += (x = 0.05 - std::log(1.0 - rng.unit()));
    for (int i = 0; i < 3; ++i) {
      a[i] /= ta;
      b[i] /= tb;
      mid[i] = 0.5 * (a[i] + b[i]);
    }
    CHECK(density_exponent(mid, 1.7, 3).value >=
          0.5 * density_exponent(a, 1.7, 3).value + 0.5 * density_exponent(b, 1.7, 3).value -
              1e-12);
  }

  CHECK_THROWS_AS(density_exponent(std::vector<double>{1.0, 0.0}, 2.0, 2), std::domain_error);
}

TEST_CASE("overlap exponents") {
  const int k = 3;
  const std::vector<double> barycentre(9, 1.0 / 9.0);
  const std::vector<double> uniform{1.0 / 3, 1.0 / 3, 1.0 / 3};

  SUBCASE("pair exponent doubles the density exponent at the barycentre") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
      const double d = 0.2 + 4.0 * rng.unit();
      CHECK(overlap_exponent(barycentre, d, k).value ==
            doctest::Approx(2.0 * density_exponent(uniform, d, k).value).epsilon(1e-13));
    }
  }
  SUBCASE("uniform-margin form agrees exactly on uniform-margin matrices") {
    // permutation/barycentre mixtures have exactly uniform margins
    std::vector<double> rho(9, 0.05 / 9.0);
    rho[0 * 3 + 1] += 0.95 / 3.0;
    rho[1 * 3 + 2] += 0.95 / 3.0;
    rho[2 * 3 + 0] += 0.95 / 3.0;
    CHECK(overlap_exponent(rho, 2.0, k).value ==
          doctest::Approx(overlap_exponent_uniform(rho, 2.0, k).value).epsilon(1e-14));
  }
  SUBCASE("product overlaps add entropies") {
    const std::vector<double> p{0.5, 0.3, 0.2}, q{0.6, 0.25, 0.15};
    std::vector<double> prod(9);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) prod[static_cast<std::size_t>(i) * 3 + j] = p[i] * q[j];
    CHECK(entropy(prod) == doctest::Approx(entropy(p) + entropy(q)).epsilon(1e-13));
  }
  SUBCASE("centre-pinned form matches the uniform form at the uniform centre") {
    const std::vector<double> centre{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::vector<double> rho(9, 1.0 / 9.0);
    rho[0] += 0.01;
    rho[4] -= 0.01;
    CHECK(overlap_exponent_at_centre(rho, centre, 2.0, k).value ==
          doctest::Approx(overlap_exponent_uniform(rho, 2.0, k).value).epsilon(1e-13));
  }
}

TEST_CASE("first-moment asymptotics converge to the exact sum") {
  double previous = 1e9;
  for (int n : {20, 40, 80}) {
    ModelParams p{3, 2.0, n};
    const double gap = std::abs(std::exp(expected_count(p, Ensemble::multigraph).log() -
                                         first_moment_asymptotic(p).log()) -
                                1.0);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("per-density asymptotic integrates back to the total") {
  ModelParams p{3, 2.0, 200};
  LogSumAccumulator acc;
  std::vector<double> rho(3);
  for (std::int64_t a = 0; a <= 200; ++a)
    for (std::int64_t b = 0; a + b <= 200; ++b) {
      rho[0] = a / 200.0;
      rho[1] = b / 200.0;
      rho[2] = (200 - a - b) / 200.0;
      double s2 = 0.0;
      for (double x : rho) s2 += x * x;
      if (s2 >= 1.0) continue;
      acc.add(first_moment_density_asymptotic(p, rho));
    }
  const double total = acc.total().log();
  CHECK(std::abs(std::exp(total - first_moment_asymptotic(p).log()) - 1.0) < 0.01);
}

TEST_CASE("second-moment constant: closed form vs series") {
  CHECK(second_moment_ratio_limit(2.0, 3) ==
        doctest::Approx(4.0 / std::numbers::e).epsilon(1e-14));
  CHECK(second_moment_ratio_limit(1e-12, 3) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(second_moment_ratio_limit(4.0, 3), ValidationError);

  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 3 + static_cast<int>(rng.below(5));
    const double cap = 0.9 * (k - 1) * (k - 1);
    const double d = cap * (0.05 + 0.95 * rng.unit());
    const double closed = second_moment_ratio_limit(d, k);
    const double series = cycle_series_exponent(d, k, 2, 1e-15);
    CHECK(std::abs(series / closed - 1.0) < 1e-10);
  }
}

TEST_CASE("conditional cycle ratio") {
  CycleCensus zero{3, {0, 0}};
  CHECK(conditional_cycle_ratio(zero, 2.0, 3) ==
        doctest::Approx(std::exp(-1.0 / 6.0)).epsilon(1e-14));

  CycleCensus one_triangle{3, {0, 1}};
  CHECK(conditional_cycle_ratio(one_triangle, 2.0, 3) /
            conditional_cycle_ratio(zero, 2.0, 3) ==
        doctest::Approx(1.0 + cycle_correction(3, 3)).epsilon(1e-13));

  CycleCensus busy{4, {1, 2, 1}};
  CHECK(conditional_cycle_ratio(busy, 2.0, 1000) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("saddle constants") {
  const auto c = saddle_constants(2.0, 3, 100);
  CHECK(c.overlap_curvature == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(c.density_curvature == doctest::Approx(3.0 * 2.0).epsilon(1e-14));
  const auto zero_d = saddle_constants(0.0, 4, 50);
  CHECK(zero_d.overlap_curvature == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(zero_d.density_curvature == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(c.pair_prefactor ==
        doctest::Approx(std::exp(1.0) * std::pow(3.0, 9) *
                        std::pow(2 * std::numbers::pi * 100.0, -4.0))
            .epsilon(1e-12));
}

namespace {

// random k x k matrix with zero row and column sums
std::vector<double> random_zero_sum(int k, Rng& rng, double scale) {
  std::vector<double> eps(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k - 1; ++i)
    for (int j = 0; j < k - 1; ++j) {
      const double x = scale * (2.0 * rng.unit() - 1.0);
      eps[static_cast<std::size_t>(i) * k + j] += x;
      eps[static_cast<std::size_t>(i) * k + (k - 1)] -= x;
      eps[static_cast<std::size_t>(k - 1) * k + j] -= x;
      eps[static_cast<std::size_t>(k - 1) * k + (k - 1)] += x;
    }
  return eps;
}

}  // namespace

TEST_CASE("pair exponent is locally quadratic with curvature D") {
  const int k = 3;
  const double d = 2.0;
  const double curvature = saddle_constants(d, k, 1).overlap_curvature;
  std::vector<double> barycentre(9, 1.0 / 9.0);
  const double at_centre = overlap_exponent(barycentre, d, k).value;
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto direction = random_zero_sum(k, rng, 1.0);
    double norm = 0.0;
    for (double x : direction) norm += x * x;
    norm = std::sqrt(norm);
    double residual_coarse = 0.0, residual_fine = 0.0;
    for (const double scale : {1e-2, 1e-3}) {
      std::vector<double> rho = barycentre;
      double eps_norm2 = 0.0;
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const double e = direction[i] / norm * scale;
        rho[i] += e;
        eps_norm2 += e * e;
      }
      const double model = at_centre - curvature / 2.0 * eps_norm2;
      const double residual = std::abs(overlap_exponent(rho, d, k).value - model);
      (scale == 1e-2 ? residual_coarse : residual_fine) = residual;
    }
    CHECK(residual_coarse < 1e-4);
    CHECK(residual_fine < residual_coarse / 100.0);
  }
}

TEST_CASE("norm quadratic form") {
  SUBCASE("k=2 pins the whole matrix") {
    const auto h = norm_quadratic_form(2);
    REQUIRE(h.rows() == 1);
    CHECK(h(0, 0) == doctest::Approx(4.0));
    CHECK(h.determinant() == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("determinant equals k^(2(k-1))") {
    for (int k = 3; k <= 6; ++k) {
      const auto h = norm_quadratic_form(k);
      CHECK(std::abs(h.determinant() / std::pow(static_cast<double>(k), 2 * (k - 1)) - 1.0) <
            1e-9);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
      CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
  }
  SUBCASE("quadratic form reproduces the squared norm, exactly on integers") {
    Rng rng(23);
    for (int k = 2; k <= 4; ++k) {
      const auto h = norm_quadratic_form(k);
      for (int trial = 0; trial < 40; ++trial) {
        // integer free block
        std::vector<std::int64_t> a(static_cast<std::size_t>(k - 1) * (k - 1));
        for (auto& x : a) x = static_cast<std::int64_t>(rng.below(21)) - 10;
        // complete to a zero-sum matrix and take the exact squared norm
        std::vector<std::int64_t> eps(static_cast<std::size_t>(k) * k, 0);
        for (int i = 0; i < k - 1; ++i)
          for (int j = 0; j < k - 1; ++j) {
            const auto x = a[static_cast<std::size_t>(i) * (k - 1) + j];
            eps[static_cast<std::size_t>(i) * k + j] += x;
            eps[static_cast<std::size_t>(i) * k + (k - 1)] -= x;
            eps[static_cast<std::size_t>(k - 1) * k + j] -= x;
            eps[static_cast<std::size_t>(k - 1) * k + (k - 1)] += x;
          }
        std::int64_t norm2 = 0;
        for (auto e : eps) norm2 += e * e;
        std::int64_t form = 0;
        for (std::size_t r = 0; r < a.size(); ++r)
          for (std::size_t c = 0; c < a.size(); ++c)
            form += static_cast<std::int64_t>(h(static_cast<Eigen::Index>(r),
                                                static_cast<Eigen::Index>(c))) *
                    a[r] * a[c];
        CHECK(form == norm2);
      }
    }
  }
  SUBCASE("double-precision check on continuous zero-sum matrices") {
    Rng rng(29);
    const auto h = norm_quadratic_form(3);
    for (int trial = 0; trial < 100; ++trial) {
      const auto eps = random_zero_sum(3, rng, 1.0);
      double norm2 = 0.0;
      for (double e : eps) norm2 += e * e;
      Eigen::VectorXd free(4);
      free << eps[0], eps[1], eps[3], eps[4];
      const double form = free.transpose() * h * free;
      CHECK(std::abs(form - norm2) < 1e-12 * std::max(1.0, norm2));
    }
  }
}

TEST_CASE("gaussian lattice sum") {
  SUBCASE("one-dimensional case against the closed form") {
    const double exact = gaussian_lattice_sum(1.0, 2, 400, LatticeSumMode::exact);
    const double closed = gaussian_lattice_sum(1.0, 2, 400, LatticeSumMode::closed);
    CHECK(std::abs(exact / closed - 1.0) < 0.02);
  }
  SUBCASE("ratio approaches one monotonically") {
    // The lattice converges exponentially in n/D, so a large D keeps the
    // discretization error visible across the ladder.
    double previous = 1e9;
    for (std::int64_t n : {100, 400, 1600}) {
      const double gap =
          std::abs(gaussian_lattice_sum(200.0, 2, n, LatticeSumMode::exact) /
                       gaussian_lattice_sum(200.0, 2, n, LatticeSumMode::closed) -
                   1.0);
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous < 1e-10);
  }
  SUBCASE("four-dimensional sum against a direct grid oracle") {
    const int k = 3;
    const std::int64_t n = 25;
    const double curvature = 2.0;
    const double gamma = curvature / (2.0 * static_cast<double>(n));
    double direct = 0.0;
    const int radius = 34;
    for (int a = -radius; a <= radius; ++a)
      for (int b = -radius; b <= radius; ++b)
        for (int c = -radius; c <= radius; ++c)
          for (int d = -radius; d <= radius; ++d) {
            const std::int64_t eps[3][3] = {{a, b, -(a + b)},
                                            {c, d, -(c + d)},
                                            {-(a + c), -(b + d), a + b + c + d}};
            std::int64_t q = 0;
            for (const auto& row : eps)
              for (auto e : row) q += e * e;
            direct += std::exp(-gamma * static_cast<double>(q));
          }
    const double exact = gaussian_lattice_sum(curvature, k, n, LatticeSumMode::exact);
    CHECK(std::abs(exact / direct - 1.0) < 1e-11);
  }
  CHECK_THROWS_AS(gaussian_lattice_sum(-1.0, 3, 100, LatticeSumMode::exact), ValidationError);
}

TEST_CASE("uniform-margin bound slack") {
  const int k = 3;
  const double d = 2.0;
  const std::vector<double> barycentre(9, 1.0 / 9.0);
  CHECK(std::abs(achlioptas_naor_slack(barycentre, d, k)) < 1e-12);

  std::vector<double> diagonal(9, 0.0);
  diagonal[0] = diagonal[4] = diagonal[8] = 1.0 / 3.0;
  CHECK(achlioptas_naor_slack(diagonal, d, k) > 0.0);
}

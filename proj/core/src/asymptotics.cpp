#include "colorlab/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "colorlab/errors.hpp"

namespace colorlab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw ValidationError(msg);
}

double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double log_or_domain_error(double arg, double d) {
  if (arg <= 0.0) {
    if (d == 0.0) return 0.0;  // exponent multiplies by d/2 = 0
    throw std::domain_error("exponent: log argument " + std::to_string(arg) + " is not positive");
  }
  return std::log(arg);
}

}  // namespace

double cycle_poisson_mean(double d, int l) {
  require(l >= 2, "cycle statistics need l >= 2");
  require(d >= 0.0, "cycle statistics need d >= 0");
  return std::pow(d, l) / (2.0 * l);
}

double cycle_correction(int k, int l) {
  require(k >= 2, "cycle statistics need k >= 2");
  require(l >= 2, "cycle statistics need l >= 2");
  const double mag = std::pow(static_cast<double>(k - 1), -(l - 1));
  return (l % 2 == 0) ? mag : -mag;
}

double planted_cycle_mean(double d, int k, int l) {
  return cycle_poisson_mean(d, l) * (1.0 + cycle_correction(k, l));
}

std::int64_t cycle_type_count(int k, int l) {
  require(k >= 2, "type count needs k >= 2");
  require(l >= 1, "type count needs l >= 1");
  std::int64_t pow = 1;
  for (int i = 0; i < l; ++i) pow *= (k - 1);
  return pow + ((l % 2 == 0) ? (k - 1) : -(k - 1));
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    require(x >= 0.0, "entropy: negative entry");
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

ExponentReport density_exponent(std::span<const double> rho, double d, int k) {
  require(static_cast<int>(rho.size()) == k, "density exponent: wrong dimension");
  const double arg = 1.0 - sum_squares(rho);
  ExponentReport report;
  report.location.assign(rho.begin(), rho.end());
  report.value = entropy(rho) + d / 2.0 * log_or_domain_error(arg, d);
  bool interior = true;
  for (double x : rho) interior = interior && x > 0.0;
  if (interior) {
    report.gradient.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
      report.gradient[i] = -std::log(rho[i]) - 1.0 - d * rho[i] / arg;
  }
  return report;
}

namespace {

ExponentReport overlap_exponent_impl(std::span<const double> rho, double d, int k,
                                     double margin_term, const double* rows,
                                     const double* cols) {
  ExponentReport report;
  report.location.assign(rho.begin(), rho.end());
  const double arg = margin_term + sum_squares(rho);
  report.value = entropy(rho) + d / 2.0 * log_or_domain_error(arg, d);
  bool interior = true;
  for (double x : rho) interior = interior && x > 0.0;
  if (interior) {
    report.gradient.resize(rho.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * k + j;
        double margin_grad = 0.0;
        if (rows != nullptr) margin_grad = -2.0 * rows[i] - 2.0 * cols[j];
        report.gradient[idx] = -std::log(rho[idx]) - 1.0 +
                               d / 2.0 * (margin_grad + 2.0 * rho[idx]) / arg;
      }
  }
  return report;
}

}  // namespace

ExponentReport overlap_exponent(std::span<const double> rho, double d, int k) {
  require(rho.size() == static_cast<std::size_t>(k) * k, "overlap exponent: wrong dimension");
  std::vector<double> rows(k, 0.0), cols(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      rows[i] += rho[static_cast<std::size_t>(i) * k + j];
      cols[j] += rho[static_cast<std::size_t>(i) * k + j];
    }
  const double margin = 1.0 - sum_squares(rows) - sum_squares(cols);
  return overlap_exponent_impl(rho, d, k, margin, rows.data(), cols.data());
}

ExponentReport overlap_exponent_uniform(std::span<const double> rho, double d, int k) {
  require(rho.size() == static_cast<std::size_t>(k) * k, "overlap exponent: wrong dimension");
  return overlap_exponent_impl(rho, d, k, 1.0 - 2.0 / k, nullptr, nullptr);
}

ExponentReport overlap_exponent_at_centre(std::span<const double> rho,
                                          std::span<const double> centre, double d, int k) {
  require(rho.size() == static_cast<std::size_t>(k) * k, "overlap exponent: wrong dimension");
  require(static_cast<int>(centre.size()) == k, "overlap exponent: centre has wrong dimension");
  return overlap_exponent_impl(rho, d, k, 1.0 - 2.0 * sum_squares(centre), nullptr, nullptr);
}

LogValue first_moment_asymptotic(const ModelParams& params) {
  params.validate();
  const double d = params.edge_density();
  const int k = params.k;
  const double f_uniform = std::log(static_cast<double>(k)) +
                           d / 2.0 * std::log1p(-1.0 / static_cast<double>(k));
  return LogValue::from_log(d / 2.0 + params.n * f_uniform -
                            (k - 1) / 2.0 * std::log1p(d / (k - 1)));
}

LogValue first_moment_density_asymptotic(const ModelParams& params,
                                         std::span<const double> rho) {
  params.validate();
  const double d = params.edge_density();
  const int k = params.k;
  const auto f = density_exponent(rho, d, k);
  return LogValue::from_log((1.0 - k) / 2.0 * std::log(2.0 * std::numbers::pi * params.n) +
                            k / 2.0 * std::log(static_cast<double>(k)) + d / 2.0 +
                            params.n * f.value);
}

double second_moment_ratio_limit(double d, int k) {
  require(k >= 2, "second moment limit needs k >= 2");
  const double km1sq = static_cast<double>(k - 1) * (k - 1);
  require(d >= 0.0 && d < km1sq, "second moment limit needs 0 <= d < (k-1)^2");
  return std::pow(1.0 - d / km1sq, -km1sq / 2.0) * std::exp(-d / 2.0);
}

double cycle_series_exponent(double d, int k, int from_l, double tol) {
  require(k >= 2 && from_l >= 2, "cycle series needs k >= 2 and l >= 2");
  const double km1sq = static_cast<double>(k - 1) * (k - 1);
  require(d >= 0.0 && d < km1sq, "cycle series diverges unless d < (k-1)^2");
  if (d == 0.0) return 1.0;
  const double x = d / km1sq;
  // sum_{l >= from} lambda_l delta_l^2 = ((k-1)^2/2) sum x^l / l
  double sum = 0.0;
  double xl = std::pow(x, from_l);
  for (int l = from_l;; ++l) {
    sum += xl / l;
    const double tail = xl * x / ((l + 1) * (1.0 - x));
    if (tail < tol * 2.0 / km1sq) break;
    xl *= x;
  }
  return std::exp(km1sq / 2.0 * sum);
}

double conditional_cycle_ratio(const CycleCensus& census, double d, int k) {
  double log_ratio = 0.0;
  for (int l = 2; l <= census.max_length; ++l) {
    const double delta = cycle_correction(k, l);
    const double lambda = cycle_poisson_mean(d, l);
    log_ratio += census.count(l) * std::log1p(delta) - delta * lambda;
  }
  return std::exp(log_ratio);
}

SaddleConstants saddle_constants(double d, int k, std::int64_t n) {
  require(k >= 2, "saddle constants need k >= 2");
  const double km1 = k - 1;
  return SaddleConstants{
      k * (1.0 + d / km1),
      std::exp(d / 2.0) * std::pow(static_cast<double>(k), k * k) *
          std::pow(2.0 * std::numbers::pi * static_cast<double>(n),
                   (1.0 - static_cast<double>(k) * k) / 2.0),
      static_cast<double>(k) * k * (1.0 - d / (km1 * km1)),
  };
}

Eigen::MatrixXd norm_quadratic_form(int k) {
  require(k >= 2, "quadratic form needs k >= 2");
  const int dim = (k - 1) * (k - 1);
  Eigen::MatrixXd h(dim, dim);
  for (int i = 0; i < k - 1; ++i)
    for (int j = 0; j < k - 1; ++j)
      for (int a = 0; a < k - 1; ++a)
        for (int b = 0; b < k - 1; ++b)
          h(i * (k - 1) + j, a * (k - 1) + b) =
              (1.0 + (i == a ? 1.0 : 0.0)) * (1.0 + (j == b ? 1.0 : 0.0));
  return h;
}

double gaussian_lattice_sum(double D, int k, std::int64_t n, LatticeSumMode mode) {
  require(k >= 2, "lattice sum needs k >= 2");
  require(D > 0.0, "lattice sum needs D > 0");
  require(n >= 1, "lattice sum needs n >= 1");
  const int dim = (k - 1) * (k - 1);
  if (mode == LatticeSumMode::closed) {
    return std::pow(std::sqrt(2.0 * std::numbers::pi * static_cast<double>(n)), dim) *
           std::pow(D, -dim / 2.0) * std::pow(static_cast<double>(k), -(k - 1));
  }

  // Free coordinates: the (k-1)x(k-1) block a (integers); the full matrix is
  // completed by the zero-sum constraints and |eps|^2 = a^T H a / n^2, so the
  // summand is exp(-gamma a^T H a) with gamma = D/(2n). Sphere enumeration
  // through the LDL^T factorization, truncated where the integrand drops
  // below e^-45 of the peak (relative tail < 1e-12).
  const double gamma = D / (2.0 * static_cast<double>(n));
  const Eigen::MatrixXd h = norm_quadratic_form(k);
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd diag(dim);
  {
    Eigen::MatrixXd a = h;
    for (int j = 0; j < dim; ++j) {
      diag(j) = a(j, j);
      for (int i = j + 1; i < dim; ++i) l(i, j) = a(i, j) / diag(j);
      for (int i = j + 1; i < dim; ++i)
        for (int t = j + 1; t < dim; ++t) a(i, t) -= l(i, j) * diag(j) * l(t, j);
    }
  }

  constexpr double kLogBudget = 45.0;
  std::vector<long long> a(dim, 0);
  double total = 0.0;
  // Q(a) = sum_i diag_i (a_i + c_i)^2 with c_i = sum_{j>i} L_{ji} a_j.
  auto recurse = [&](auto&& self, int level, double q_acc) -> void {
    if (level < 0) {
      total += std::exp(-q_acc);
      return;
    }
    double c = 0.0;
    for (int j = level + 1; j < dim; ++j) c += l(j, level) * static_cast<double>(a[j]);
    const double gd = gamma * diag(level);
    const auto centre = static_cast<long long>(std::llround(-c));
    for (long long t = centre;; ++t) {
      const double off = static_cast<double>(t) + c;
      const double q = gd * off * off;
      if (q_acc + q > kLogBudget) break;
      a[level] = t;
      self(self, level - 1, q_acc + q);
    }
    for (long long t = centre - 1;; --t) {
      const double off = static_cast<double>(t) + c;
      const double q = gd * off * off;
      if (q_acc + q > kLogBudget) break;
      a[level] = t;
      self(self, level - 1, q_acc + q);
    }
    a[level] = 0;
  };
  recurse(recurse, dim - 1, 0.0);
  return total;
}

double achlioptas_naor_slack(std::span<const double> rho, double d, int k) {
  require(rho.size() == static_cast<std::size_t>(k) * k, "slack: wrong dimension");
  const std::vector<double> centre(static_cast<std::size_t>(k) * k,
                                   1.0 / (static_cast<double>(k) * k));
  const double at_centre = overlap_exponent_uniform(centre, d, k).value;
  const double at_rho = overlap_exponent_uniform(rho, d, k).value;
  const double coeff =
      (2.0 * (k - 1) * std::log(static_cast<double>(k - 1)) - d) / (4.0 * (k - 1) * (k - 1));
  return at_centre - coeff * (static_cast<double>(k) * k * sum_squares(rho) - 1.0) - at_rho;
}

}  // namespace colorlab

#include "colorlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "colorlab/asymptotics.hpp"
#include "colorlab/errors.hpp"
#include "colorlab/exact_count.hpp"
#include "colorlab/expectations.hpp"
#include "colorlab/graph.hpp"
#include "colorlab/limit_law.hpp"
#include "colorlab/numeric.hpp"
#include "colorlab/rng.hpp"
#include "colorlab/sampling.hpp"

namespace colorlab {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "1.0";
constexpr std::uint64_t kSectionShift = 40;
constexpr int kBaselineBatches = 20;
constexpr int kExactCountCap = 64;  // count_dp feasibility cap for experiments

std::uint64_t sample_stream(int section, std::int64_t i) {
  return (static_cast<std::uint64_t>(section) << kSectionShift) + static_cast<std::uint64_t>(i);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (0xD1B54A32D192ED03ull * (stream + 1)));
}

std::uint64_t reference_seed(std::uint64_t seed) {
  return splitmix64(seed ^ 0x5EEDFACEDE7E57EDull);
}

template <class Fn>
void for_indices(std::int64_t count, int threads, Fn&& fn) {
  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

double ladder_density(const ExperimentConfig& config, int n) {
  return ModelParams{config.k, config.dprime, n}.edge_density();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double compositions(double n, int parts) {
  double size = 1.0;
  for (int i = 1; i < parts; ++i) size *= (n + i) / i;
  return size;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::limit_check: return "limit-check";
    case ExperimentKind::cond_ratio: return "cond-ratio";
    case ExperimentKind::moment_suite: return "moment-suite";
    case ExperimentKind::poisson_fit: return "poisson-fit";
    case ExperimentKind::secondmoment_scan: return "secondmoment";
  }
  throw ValidationError("unknown experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "limit-check") return ExperimentKind::limit_check;
  if (name == "cond-ratio") return ExperimentKind::cond_ratio;
  if (name == "moment-suite") return ExperimentKind::moment_suite;
  if (name == "poisson-fit") return ExperimentKind::poisson_fit;
  if (name == "secondmoment") return ExperimentKind::secondmoment_scan;
  throw ValidationError("unknown experiment kind '" + name + "'");
}

void ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  if (k < 2) errors.push_back("k must be >= 2");
  if (kind == ExperimentKind::limit_check && k < 3)
    errors.push_back("limit-check needs k >= 3");
  if (!(dprime > 0.0)) errors.push_back("dprime must be > 0");
  if (n_ladder.empty()) errors.push_back("at least one n is required");
  for (int n : n_ladder)
    if (n < 2) errors.push_back("n=" + std::to_string(n) + " is below 2");
  const bool sampled = kind == ExperimentKind::limit_check ||
                       kind == ExperimentKind::cond_ratio ||
                       kind == ExperimentKind::poisson_fit;
  if (sampled && samples < 1) errors.push_back("samples must be >= 1");
  if (!(tolerance > 0.0)) errors.push_back("tolerance must be > 0");
  if (census_length < 2) errors.push_back("census_length must be >= 2");
  if (reference_samples < 1) errors.push_back("reference_samples must be >= 1");
  if (min_stratum < 1) errors.push_back("min_stratum must be >= 1");
  if (threads < 1) errors.push_back("threads must be >= 1");
  if (format != "json" && format != "csv") errors.push_back("format must be json or csv");
  if (balance.omega < 1 || balance.omega % 2 == 0) errors.push_back("omega must be odd >= 1");
  if (balance.nu < 1 || balance.nu % 2 == 0) errors.push_back("nu must be odd >= 1");
  if (!errors.empty()) {
    std::string joined = "config invalid: ";
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i) joined += "; ";
      joined += errors[i];
    }
    throw ValidationError(joined);
  }
}

namespace {

// Resource guards checked before any sampling starts.
void dry_run_guards(const ExperimentConfig& config) {
  const bool exact_counts =
      config.kind == ExperimentKind::limit_check || config.kind == ExperimentKind::cond_ratio;
  if (exact_counts) {
    for (int n : config.n_ladder)
      if (n > kExactCountCap)
        throw GuardRefusal("experiment: n=" + std::to_string(n) +
                           " exceeds the exact-count feasibility cap (" +
                           std::to_string(kExactCountCap) + ")");
  }
  if (config.kind == ExperimentKind::moment_suite) {
    for (int n : config.n_ladder)
      if (compositions(n, config.k) > 5e7)
        throw GuardRefusal("experiment: density lattice for n=" + std::to_string(n) +
                           " exceeds the 5e7 enumeration cap");
  }
  if (config.kind == ExperimentKind::secondmoment_scan) {
    for (int n : config.n_ladder)
      if (compositions(n, config.k * config.k) > 5e7)
        throw GuardRefusal("experiment: overlap lattice for n=" + std::to_string(n) +
                           " exceeds the 5e7 enumeration cap");
  }
}

}  // namespace

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  out << "census_length=" << census_length << '\n';
  out << "dprime=" << format_double(dprime) << '\n';
  out << "format=" << format << '\n';
  out << "k=" << k << '\n';
  out << "kind=" << kind_name(kind) << '\n';
  out << "min_stratum=" << min_stratum << '\n';
  out << "n_ladder=";
  for (std::size_t i = 0; i < n_ladder.size(); ++i) out << (i ? "," : "") << n_ladder[i];
  out << '\n';
  out << "nu=" << balance.nu << '\n';
  out << "omega=" << balance.omega << '\n';
  out << "reference_samples=" << reference_samples << '\n';
  out << "samples=" << samples << '\n';
  out << "seed=" << seed << '\n';
  out << "tolerance=" << format_double(tolerance) << '\n';
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config.canonical_text();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config_file(std::istream& in) {
  ExperimentConfig config;
  std::vector<std::string> errors;
  std::string line;
  int line_no = 0;
  bool kind_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "kind") {
        config.kind = kind_from_name(value);
        kind_seen = true;
      } else if (key == "k") {
        config.k = std::stoi(value);
      } else if (key == "dprime") {
        config.dprime = std::stod(value);
      } else if (key == "n") {
        config.n_ladder = {std::stoi(value)};
      } else if (key == "n_ladder") {
        config.n_ladder.clear();
        std::istringstream vs(value);
        std::string tok;
        while (std::getline(vs, tok, ',')) config.n_ladder.push_back(std::stoi(tok));
      } else if (key == "samples") {
        config.samples = std::stoll(value);
      } else if (key == "seed") {
        config.seed = std::stoull(value);
      } else if (key == "tolerance") {
        config.tolerance = std::stod(value);
      } else if (key == "census_length") {
        config.census_length = std::stoi(value);
      } else if (key == "reference_samples") {
        config.reference_samples = std::stoll(value);
      } else if (key == "min_stratum") {
        config.min_stratum = std::stoi(value);
      } else if (key == "omega") {
        config.balance.omega = std::stoi(value);
      } else if (key == "nu") {
        config.balance.nu = std::stoi(value);
      } else if (key == "threads") {
        config.threads = std::stoi(value);
      } else if (key == "format") {
        config.format = value;
      } else if (key == "out") {
        config.out_dir = value;
      } else {
        errors.push_back("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      }
    } catch (const std::exception&) {
      errors.push_back("line " + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
  }
  if (!kind_seen) errors.push_back("missing required key 'kind'");
  if (!errors.empty()) {
    std::string joined = "config file invalid: ";
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i) joined += "; ";
      joined += errors[i];
    }
    throw ValidationError(joined);
  }
  config.validate();
  return config;
}

namespace {

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["kind"] = kind_name(config.kind);
  j["k"] = config.k;
  j["dprime"] = config.dprime;
  j["n_ladder"] = config.n_ladder;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["tolerance"] = config.tolerance;
  j["census_length"] = config.census_length;
  j["reference_samples"] = config.reference_samples;
  j["min_stratum"] = config.min_stratum;
  j["omega"] = config.balance.omega;
  j["nu"] = config.balance.nu;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.kind = kind_from_name(j.at("kind").get<std::string>());
  config.k = j.at("k").get<int>();
  config.dprime = j.at("dprime").get<double>();
  config.n_ladder = j.at("n_ladder").get<std::vector<int>>();
  config.samples = j.at("samples").get<std::int64_t>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.tolerance = j.at("tolerance").get<double>();
  config.census_length = j.at("census_length").get<int>();
  config.reference_samples = j.at("reference_samples").get<std::int64_t>();
  config.min_stratum = j.at("min_stratum").get<int>();
  config.balance.omega = j.at("omega").get<int>();
  config.balance.nu = j.at("nu").get<int>();
  return config;
}

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Record builders (one json object per sample / ladder point).

std::vector<json> build_limit_check(const ExperimentConfig& config) {
  std::vector<json> records;
  for (int section = 0; section < static_cast<int>(config.n_ladder.size()); ++section) {
    const int n = config.n_ladder[section];
    const ModelParams params{config.k, config.dprime, n};
    std::vector<json> part(static_cast<std::size_t>(config.samples));
    for_indices(config.samples, config.threads, [&](std::int64_t i) {
      const auto g =
          sample_gnm_simple(params, derive_seed(config.seed, sample_stream(section, i)));
      const BigCount z = count_dp(g, config.k);
      json rec;
      rec["i"] = i;
      rec["n"] = n;
      if (z == 0) {
        rec["zero"] = true;
      } else {
        rec["zero"] = false;
        rec["log_count"] = log_of(z);
      }
      part[static_cast<std::size_t>(i)] = std::move(rec);
    });
    for (auto& r : part) records.push_back(std::move(r));
  }
  return records;
}

std::vector<json> build_cond_ratio(const ExperimentConfig& config) {
  const int n = config.n_ladder.front();
  const ModelParams params{config.k, config.dprime, n};
  std::vector<json> records(static_cast<std::size_t>(config.samples));
  for_indices(config.samples, config.threads, [&](std::int64_t i) {
    const auto g = sample_gnm_multigraph(params, derive_seed(config.seed, sample_stream(0, i)));
    const auto census = cycle_census(g, config.census_length);
    const BigCount z = count_dp(g, config.k);
    json rec;
    rec["i"] = i;
    rec["census"] = census.counts;
    rec["count"] = z.str();
    records[static_cast<std::size_t>(i)] = std::move(rec);
  });
  return records;
}

std::vector<json> build_moment_suite(const ExperimentConfig& config) {
  std::vector<json> records;
  for (int n : config.n_ladder) {
    const ModelParams params{config.k, config.dprime, n};
    json rec;
    rec["n"] = n;
    rec["log_exact"] = expected_count(params, Ensemble::multigraph).log();
    rec["log_asymptotic"] = first_moment_asymptotic(params).log();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<json> build_poisson_fit(const ExperimentConfig& config) {
  const int n = config.n_ladder.front();
  const ModelParams params{config.k, config.dprime, n};
  std::vector<json> records(static_cast<std::size_t>(config.samples));
  for_indices(config.samples, config.threads, [&](std::int64_t i) {
    const auto g = sample_gnm_multigraph(params, derive_seed(config.seed, sample_stream(0, i)));
    const auto census = cycle_census(g, config.census_length);
    json rec;
    rec["i"] = i;
    rec["census"] = census.counts;
    records[static_cast<std::size_t>(i)] = std::move(rec);
  });
  return records;
}

std::vector<json> build_secondmoment(const ExperimentConfig& config) {
  std::vector<json> records;
  for (int n : config.n_ladder) {
    const ModelParams params{config.k, config.dprime, n};
    json rec;
    rec["n"] = n;
    rec["log_pair"] = expected_pair_count(params).log();
    rec["log_first"] = expected_count(params, Ensemble::multigraph).log();
    records.push_back(std::move(rec));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Summaries. Derived purely from (config, records) so the report command can
// rebuild them from a JSONL stream; reference batches are redrawn
// deterministically from the config seed.

ExperimentReport summarize_limit_check(const ExperimentConfig& config,
                                       const std::vector<json>& records) {
  ExperimentReport report{config, {}, {}};
  FluctuationLaw law{config.dprime, config.k, 0, config.tolerance};
  law.truncation = law.resolved_truncation();
  const std::uint64_t ref_seed = reference_seed(config.seed);
  auto reference = sample_fluctuation_batch(
      law, ref_seed, static_cast<std::size_t>(config.reference_samples), config.threads);

  // The empirical side is centred by the simple-ensemble expectation, which
  // sits exactly a factor e^{-d^2/(4(k-1))} below the with-replacement one
  // in the limit; the reference batch is shifted by that constant so both
  // sides carry the same centring.
  const double recentre = law.d * law.d / (4.0 * (law.k - 1));
  for (double& v : reference.values) v += recentre;
  report.scalars["reference_shift"] = recentre;

  std::vector<double> baseline_dists;
  for (int b = 0; b < kBaselineBatches; ++b) {
    auto batch =
        sample_fluctuation_batch(law, derive_seed(ref_seed, static_cast<std::uint64_t>(b) + 1),
                                 static_cast<std::size_t>(config.samples), config.threads);
    for (double& v : batch.values) v += recentre;
    baseline_dists.push_back(ecdf_distance(batch.values, reference.values));
  }
  const auto baseline = mean_sd(baseline_dists);
  report.scalars["baseline_mean"] = baseline.mean;
  report.scalars["baseline_sd"] = baseline.sd;
  report.scalars["truncation"] = law.truncation;

  for (int n : config.n_ladder) {
    const ModelParams params{config.k, config.dprime, n};
    const double centre = expected_count(params, Ensemble::simple).log();
    std::vector<double> centred;
    std::int64_t zeros = 0;
    for (const auto& rec : records) {
      if (rec.at("n").get<int>() != n) continue;
      if (rec.at("zero").get<bool>()) {
        ++zeros;
        continue;
      }
      centred.push_back(rec.at("log_count").get<double>() - centre);
    }
    SummaryRow row;
    row.point = "n=" + std::to_string(n);
    row.n = n;
    row.samples = static_cast<std::int64_t>(centred.size());
    row.statistic = centred.empty() ? 1.0 : ecdf_distance(centred, reference.values);
    row.prediction = baseline.mean;
    row.std_error = baseline.sd;
    report.rows.push_back(row);
    report.scalars["zero_count_n" + std::to_string(n)] = static_cast<double>(zeros);
  }
  return report;
}

ExperimentReport summarize_cond_ratio(const ExperimentConfig& config,
                                      const std::vector<json>& records) {
  ExperimentReport report{config, {}, {}};
  const int n = config.n_ladder.front();
  const ModelParams params{config.k, config.dprime, n};
  const double d = params.edge_density();
  const double log_expected = expected_count(params, Ensemble::multigraph).log();
  report.scalars["log_expected"] = log_expected;

  std::map<std::vector<std::int64_t>, std::vector<double>> strata;
  for (const auto& rec : records) {
    const auto census = rec.at("census").get<std::vector<std::int64_t>>();
    const BigCount z(rec.at("count").get<std::string>());
    const double ratio = (z == 0) ? 0.0 : std::exp(log_of(z) - log_expected);
    strata[census].push_back(ratio);
  }
  report.scalars["strata_total"] = static_cast<double>(strata.size());

  std::int64_t reported = 0;
  for (const auto& [census_counts, ratios] : strata) {
    if (static_cast<int>(ratios.size()) < config.min_stratum) continue;
    ++reported;
    CycleCensus census{config.census_length, census_counts};
    const auto stats = mean_sd(ratios);
    SummaryRow row;
    std::string point;
    for (int l = 2; l <= config.census_length; ++l) {
      if (l > 2) point += ';';
      point += "c" + std::to_string(l) + "=" + std::to_string(census.count(l));
    }
    row.point = point;
    row.n = n;
    row.statistic = stats.mean;
    row.prediction = conditional_cycle_ratio(census, d, config.k);
    row.std_error = stats.sd / std::sqrt(static_cast<double>(ratios.size()));
    row.samples = static_cast<std::int64_t>(ratios.size());
    report.rows.push_back(row);
  }
  report.scalars["strata_reported"] = static_cast<double>(reported);
  return report;
}

ExperimentReport summarize_moment_suite(const ExperimentConfig& config,
                                        const std::vector<json>& records) {
  ExperimentReport report{config, {}, {}};
  for (const auto& rec : records) {
    SummaryRow row;
    row.n = rec.at("n").get<int>();
    row.point = "n=" + std::to_string(row.n);
    row.statistic = std::exp(rec.at("log_exact").get<double>() -
                             rec.at("log_asymptotic").get<double>());
    row.prediction = 1.0;
    report.rows.push_back(row);
  }
  return report;
}

ExperimentReport summarize_poisson_fit(const ExperimentConfig& config,
                                       const std::vector<json>& records) {
  ExperimentReport report{config, {}, {}};
  const int n = config.n_ladder.front();
  const ModelParams params{config.k, config.dprime, n};
  const double d = params.edge_density();
  const int census_len = config.census_length;
  const auto sample_count = static_cast<double>(records.size());

  std::map<std::vector<std::int64_t>, std::int64_t> empirical;
  std::vector<std::vector<double>> per_length(static_cast<std::size_t>(census_len) - 1);
  for (const auto& rec : records) {
    const auto census = rec.at("census").get<std::vector<std::int64_t>>();
    ++empirical[census];
    for (std::size_t idx = 0; idx < census.size(); ++idx)
      per_length[idx].push_back(static_cast<double>(census[idx]));
  }

  std::vector<double> lambdas;
  for (int l = 2; l <= census_len; ++l) lambdas.push_back(cycle_poisson_mean(d, l));

  auto product_log_pmf = [&](const std::vector<std::int64_t>& tuple) {
    double lp = 0.0;
    for (std::size_t idx = 0; idx < tuple.size(); ++idx) {
      const double lambda = lambdas[idx];
      const auto c = static_cast<double>(tuple[idx]);
      lp += -lambda + c * std::log(lambda) - ln_factorial(c);
    }
    return lp;
  };

  auto tv_against_product = [&](const std::map<std::vector<std::int64_t>, std::int64_t>& emp,
                                double total) {
    double tv = 0.0;
    double seen_mass = 0.0;
    for (const auto& [tuple, cnt] : emp) {
      const double pi = std::exp(product_log_pmf(tuple));
      seen_mass += pi;
      tv += std::abs(static_cast<double>(cnt) / total - pi);
    }
    return 0.5 * tv + 0.5 * (1.0 - seen_mass);
  };

  const double tv = tv_against_product(empirical, sample_count);

  // Plug-in TV of a same-size draw from the product law itself: the noise
  // floor the statistic cannot go below.
  std::vector<double> null_tvs;
  const std::uint64_t ref_seed = reference_seed(config.seed);
  for (int b = 0; b < kBaselineBatches; ++b) {
    std::map<std::vector<std::int64_t>, std::int64_t> null_emp;
    Rng rng = Rng::substream(ref_seed, static_cast<std::uint64_t>(b));
    std::vector<std::int64_t> tuple(static_cast<std::size_t>(census_len) - 1);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(sample_count); ++i) {
      for (std::size_t idx = 0; idx < tuple.size(); ++idx)
        tuple[idx] = static_cast<std::int64_t>(rng.poisson(lambdas[idx]));
      ++null_emp[tuple];
    }
    null_tvs.push_back(tv_against_product(null_emp, sample_count));
  }
  const auto null_tv = mean_sd(null_tvs);

  SummaryRow tv_row;
  tv_row.point = "tv_joint";
  tv_row.n = n;
  tv_row.statistic = tv;
  tv_row.prediction = null_tv.mean;
  tv_row.std_error = null_tv.sd;
  tv_row.samples = static_cast<std::int64_t>(sample_count);
  report.rows.push_back(tv_row);
  report.scalars["null_tv_mean"] = null_tv.mean;
  report.scalars["null_tv_sd"] = null_tv.sd;

  for (int l = 2; l <= census_len; ++l) {
    const auto stats = mean_sd(per_length[static_cast<std::size_t>(l) - 2]);
    SummaryRow row;
    row.point = "C" + std::to_string(l);
    row.n = n;
    row.statistic = stats.mean;
    row.prediction = lambdas[static_cast<std::size_t>(l) - 2];
    row.std_error = stats.sd / std::sqrt(sample_count);
    row.samples = static_cast<std::int64_t>(sample_count);
    report.rows.push_back(row);
  }
  return report;
}

ExperimentReport summarize_secondmoment(const ExperimentConfig& config,
                                        const std::vector<json>& records) {
  ExperimentReport report{config, {}, {}};
  for (const auto& rec : records) {
    SummaryRow row;
    row.n = rec.at("n").get<int>();
    row.point = "n=" + std::to_string(row.n);
    row.statistic =
        std::exp(rec.at("log_pair").get<double>() - 2.0 * rec.at("log_first").get<double>());
    row.prediction = second_moment_ratio_limit(ladder_density(config, row.n), config.k);
    report.rows.push_back(row);
  }
  return report;
}

std::vector<json> build_records(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::limit_check: return build_limit_check(config);
    case ExperimentKind::cond_ratio: return build_cond_ratio(config);
    case ExperimentKind::moment_suite: return build_moment_suite(config);
    case ExperimentKind::poisson_fit: return build_poisson_fit(config);
    case ExperimentKind::secondmoment_scan: return build_secondmoment(config);
  }
  throw ValidationError("unknown experiment kind");
}

ExperimentReport summarize(const ExperimentConfig& config, const std::vector<json>& records) {
  switch (config.kind) {
    case ExperimentKind::limit_check: return summarize_limit_check(config, records);
    case ExperimentKind::cond_ratio: return summarize_cond_ratio(config, records);
    case ExperimentKind::moment_suite: return summarize_moment_suite(config, records);
    case ExperimentKind::poisson_fit: return summarize_poisson_fit(config, records);
    case ExperimentKind::secondmoment_scan: return summarize_secondmoment(config, records);
  }
  throw ValidationError("unknown experiment kind");
}

std::string iso_timestamp(std::chrono::system_clock::time_point tp) {
  const auto t = std::chrono::system_clock::to_time_t(tp);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  dry_run_guards(config);
  const auto started = std::chrono::system_clock::now();

  const auto records = build_records(config);
  auto report = summarize(config, records);

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const auto base = fs::path(config.out_dir) / kind_name(config.kind);

    std::ofstream jsonl(base.string() + ".jsonl");
    json header;
    header["schema_version"] = kSchemaVersion;
    header["config"] = config_to_json(config);
    header["config_hash"] = config_hash(config);
    header["generator"] = std::string(kGeneratorVersion);
    jsonl << header.dump() << '\n';
    for (const auto& rec : records) jsonl << rec.dump() << '\n';

    std::ofstream csv(base.string() + ".summary.csv");
    write_summary_csv(csv, report);

    // Timestamps are deliberately kept out of the deterministic files.
    std::ofstream meta(base.string() + ".meta.json");
    const auto finished = std::chrono::system_clock::now();
    json m;
    m["started_at"] = iso_timestamp(started);
    m["finished_at"] = iso_timestamp(finished);
    m["elapsed_seconds"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(finished - started).count() /
        1000.0;
    m["config_hash"] = config_hash(config);
    meta << m.dump(2) << '\n';
  }
  return report;
}

ExperimentReport summarize_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("jsonl: missing header line");
  const auto header = json::parse(line);
  const auto version = header.at("schema_version").get<std::string>();
  const auto dot = version.find('.');
  if (version.substr(0, dot) != "1")
    throw ValidationError("jsonl: unknown schema major version " + version);
  auto config = config_from_json(header.at("config"));
  config.validate();
  std::vector<json> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(json::parse(line));
  }
  return summarize(config, records);
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report) {
  out << "point,n,statistic,prediction,stderr,samples\n";
  for (const auto& row : report.rows) {
    out << row.point << ',' << row.n << ',' << format_double(row.statistic) << ','
        << format_double(row.prediction) << ',' << format_double(row.std_error) << ','
        << row.samples << '\n';
  }
}

void write_summary_json(std::ostream& out, const ExperimentReport& report) {
  json j;
  j["kind"] = kind_name(report.config.kind);
  j["config_hash"] = config_hash(report.config);
  j["generator"] = std::string(kGeneratorVersion);
  auto& rows = j["rows"] = json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"point", row.point},
                    {"n", row.n},
                    {"statistic", row.statistic},
                    {"prediction", row.prediction},
                    {"stderr", row.std_error},
                    {"samples", row.samples}});
  j["scalars"] = report.scalars;
  out << j.dump(2) << '\n';
}

}  // namespace colorlab

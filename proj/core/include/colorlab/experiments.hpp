#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "colorlab/observables.hpp"

namespace colorlab {

enum class ExperimentKind {
  limit_check,       // centred log-counts vs the limiting fluctuation law
  cond_ratio,        // census-conditioned first-moment ratios
  moment_suite,      // exact vs asymptotic first-moment ladder
  poisson_fit,       // census joint law vs product Poisson
  secondmoment_scan  // exact second-moment ratio ladder
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::moment_suite;
  int k = 3;
  double dprime = 2.0;
  std::vector<int> n_ladder = {};
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;                   // fluctuation truncation tolerance
  int census_length = 3;                     // L for census experiments
  std::int64_t reference_samples = 1000000;  // fluctuation reference batch size
  int min_stratum = 100;                     // smallest stratum reported
  BalanceSpec balance{};
  int threads = 1;
  std::string format = "json";               // json | csv summary on stdout
  std::string out_dir;                       // empty: no files written

  /// Collects every violation and throws ValidationError listing all of
  /// them; also dry-runs the resource guards the experiment will rely on.
  void validate() const;

  /// Canonical key=value rendering (sorted keys); basis of the config hash.
  std::string canonical_text() const;
};

/// Flat key=value config file, '#' comments; unknown keys are errors.
ExperimentConfig parse_config_file(std::istream& in);

/// FNV-1a over the canonical text, as fixed-width hex.
std::string config_hash(const ExperimentConfig& config);

struct SummaryRow {
  std::string point;
  int n = 0;
  double statistic = 0.0;
  double prediction = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SummaryRow> rows;
  std::map<std::string, double> scalars;
};

/// Runs the configured experiment. When out_dir is set, writes
/// <kind>.jsonl (schema-versioned, byte-identical for identical config and
/// seed, independent of thread count), <kind>.summary.csv, and
/// <kind>.meta.json (timestamps live only here).
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Rebuilds the summary from a previously written JSONL stream. Rejects
/// records whose schema major version is unknown.
ExperimentReport summarize_jsonl(std::istream& in);

void write_summary_csv(std::ostream& out, const ExperimentReport& report);
void write_summary_json(std::ostream& out, const ExperimentReport& report);

}  // namespace colorlab

// Command-line surface for the colouring-count laboratory: graph sampling,
// exact counting, cycle censuses, closed-form moments, and the seeded
// experiment pipelines. Exit codes: 0 success, 2 validation failure,
// 3 guard refusal.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "colorlab/asymptotics.hpp"
#include "colorlab/errors.hpp"
#include "colorlab/exact_count.hpp"
#include "colorlab/expectations.hpp"
#include "colorlab/experiments.hpp"
#include "colorlab/graph.hpp"
#include "colorlab/limit_law.hpp"
#include "colorlab/optimize.hpp"
#include "colorlab/sampling.hpp"

namespace {

using colorlab::ExperimentConfig;
using colorlab::ExperimentKind;
using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::string format = "json";
};

colorlab::GraphFile load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw colorlab::ValidationError("cannot open graph file '" + path + "'");
  return colorlab::read_graph(in);
}

int resolve_k(const colorlab::GraphFile& file, int flag_k) {
  if (flag_k > 0) return flag_k;
  if (file.k) return *file.k;
  throw colorlab::ValidationError("no colour count: pass --k or use a 'n m k' header");
}

void emit(const json& j, const std::string& format) {
  if (format == "csv") {
    // flat key,value rows
    std::cout << "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it)
      std::cout << it.key() << ',' << it.value().dump() << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

struct ExperimentFlags {
  int k = 0;
  double dprime = 0.0;
  std::vector<int> n_ladder;
  std::int64_t samples = 0;
  double tolerance = 0.0;
  int census_length = 0;
  std::int64_t reference_samples = 0;
  int min_stratum = 0;
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& flags) {
  sub->add_option("--k", flags.k, "colour count");
  sub->add_option("--dprime", flags.dprime, "target density d'");
  sub->add_option("--n", flags.n_ladder, "vertex counts (repeatable ladder)");
  sub->add_option("--samples", flags.samples, "samples per ladder point");
  sub->add_option("--tolerance", flags.tolerance, "series truncation tolerance");
  sub->add_option("--census-length", flags.census_length, "largest cycle length L");
  sub->add_option("--reference-samples", flags.reference_samples,
                  "reference batch size for the limit law");
  sub->add_option("--min-stratum", flags.min_stratum, "smallest census stratum reported");
}

ExperimentConfig make_config(ExperimentKind kind, const GlobalOpts& globals,
                             const ExperimentFlags& flags) {
  ExperimentConfig config;
  if (!globals.config_path.empty()) {
    std::ifstream in(globals.config_path);
    if (!in)
      throw colorlab::ValidationError("cannot open config file '" + globals.config_path + "'");
    config = colorlab::parse_config_file(in);
  }
  config.kind = kind;
  config.seed = globals.seed;
  config.threads = globals.threads;
  config.format = globals.format;
  config.out_dir = globals.out_dir;
  if (flags.k > 0) config.k = flags.k;
  if (flags.dprime > 0.0) config.dprime = flags.dprime;
  if (!flags.n_ladder.empty()) config.n_ladder = flags.n_ladder;
  if (flags.samples > 0) config.samples = flags.samples;
  if (flags.tolerance > 0.0) config.tolerance = flags.tolerance;
  if (flags.census_length > 0) config.census_length = flags.census_length;
  if (flags.reference_samples > 0) config.reference_samples = flags.reference_samples;
  if (flags.min_stratum > 0) config.min_stratum = flags.min_stratum;
  config.validate();
  return config;
}

void run_and_emit(const ExperimentConfig& config) {
  const auto report = colorlab::run_experiment(config);
  if (config.format == "csv")
    colorlab::write_summary_csv(std::cout, report);
  else
    colorlab::write_summary_json(std::cout, report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"colorlab: counting k-colourings of sparse random graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts globals;
  app.add_option("--seed", globals.seed, "master seed");
  app.add_option("--config", globals.config_path, "experiment config file (key = value)");
  app.add_option("--out", globals.out_dir, "output directory for run records");
  app.add_option("--threads", globals.threads, "worker threads");
  app.add_option("--format", globals.format, "summary format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  int exit_code = 0;
  auto guarded = [&exit_code](auto&& fn) {
    return [&exit_code, fn]() {
      try {
        fn();
      } catch (const colorlab::GuardRefusal& e) {
        std::cerr << "guard refusal: " << e.what() << '\n';
        exit_code = 3;
      } catch (const colorlab::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        exit_code = 2;
      } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        exit_code = 2;
      }
    };
  };

  // ---- sample -------------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "draw graphs from an ensemble");
  struct {
    std::string ensemble = "multi";
    int n = 0;
    double dprime = 2.0;
    int k = 3;
    int count = 1;
  } sample_opts;
  sample->add_option("--ensemble", sample_opts.ensemble, "multi|simple|planted")
      ->check(CLI::IsMember({"multi", "simple", "planted"}));
  sample->add_option("--n", sample_opts.n, "vertex count")->required();
  sample->add_option("--dprime", sample_opts.dprime, "target density d'");
  sample->add_option("--k", sample_opts.k, "colour count (planted)");
  sample->add_option("--count", sample_opts.count, "number of graphs");
  sample->callback(guarded([&] {
    const colorlab::ModelParams params{sample_opts.k, sample_opts.dprime, sample_opts.n};
    for (int i = 0; i < sample_opts.count; ++i) {
      const auto seed =
          colorlab::splitmix64(colorlab::splitmix64(globals.seed) ^ (0xD1B54A32D192ED03ull *
                                                                     (std::uint64_t(i) + 1)));
      colorlab::Multigraph g;
      std::optional<int> k_header;
      if (sample_opts.ensemble == "multi") {
        g = colorlab::sample_gnm_multigraph(params, seed);
      } else if (sample_opts.ensemble == "simple") {
        g = colorlab::sample_gnm_simple(params, seed);
      } else {
        const double p = colorlab::planted_edge_probability(
            sample_opts.n, sample_opts.k, params.edge_density());
        g = colorlab::sample_planted(sample_opts.n, sample_opts.k, p, seed).graph;
        k_header = sample_opts.k;
      }
      if (globals.out_dir.empty()) {
        colorlab::write_graph(std::cout, g, k_header);
      } else {
        std::filesystem::create_directories(globals.out_dir);
        char name[64];
        std::snprintf(name, sizeof name, "sample_%04d.txt", i);
        std::ofstream out(std::filesystem::path(globals.out_dir) / name);
        colorlab::write_graph(out, g, k_header);
      }
    }
  }));

  // ---- count --------------------------------------------------------------
  auto* count = app.add_subcommand("count", "exact number of proper colourings");
  struct {
    std::string graph;
    int k = 0;
    std::string method = "dp";
    bool by_density = false;
    bool balanced = false;
    int omega = 1;
    int nu = 1;
  } count_opts;
  count->add_option("--graph", count_opts.graph, "graph file")->required();
  count->add_option("--k", count_opts.k, "colour count");
  count->add_option("--method", count_opts.method, "dp|brute")
      ->check(CLI::IsMember({"dp", "brute"}));
  count->add_flag("--by-density", count_opts.by_density, "CSV table split by colour density");
  count->add_flag("--balanced", count_opts.balanced, "count only balanced colourings");
  count->add_option("--omega", count_opts.omega, "balance width (odd)");
  count->add_option("--nu", count_opts.nu, "bucket resolution (odd)");
  count->callback(guarded([&] {
    const auto file = load_graph(count_opts.graph);
    const int k = resolve_k(file, count_opts.k);
    if (count_opts.by_density) {
      colorlab::write_density_csv(std::cout, colorlab::count_by_density(file.graph, k));
      return;
    }
    if (count_opts.balanced) {
      const colorlab::BalanceSpec spec{count_opts.omega, count_opts.nu};
      std::cout << colorlab::count_balanced(file.graph, k, spec).str() << '\n';
      return;
    }
    const auto z = count_opts.method == "brute" ? colorlab::count_bruteforce(file.graph, k)
                                                : colorlab::count_dp(file.graph, k);
    std::cout << z.str() << '\n';
  }));

  // ---- census -------------------------------------------------------------
  auto* census_cmd = app.add_subcommand("census", "short cycle counts");
  struct {
    std::string graph;
    int max_length = 5;
  } census_opts;
  census_cmd->add_option("--graph", census_opts.graph, "graph file")->required();
  census_cmd->add_option("--max-length", census_opts.max_length, "largest cycle length");
  census_cmd->callback(guarded([&] {
    const auto file = load_graph(census_opts.graph);
    const auto census = colorlab::cycle_census(file.graph, census_opts.max_length);
    json j;
    for (int l = 2; l <= census.max_length; ++l)
      j["C" + std::to_string(l)] = census.count(l);
    emit(j, globals.format);
  }));

  // ---- moments ------------------------------------------------------------
  auto* moments = app.add_subcommand(
      "moments", "exact vs asymptotic first moment (one n: report; several: ladder run)");
  struct {
    int k = 3;
    double dprime = 2.0;
    std::vector<int> n;
    std::string ensemble = "multi";
  } moment_opts;
  moments->add_option("--k", moment_opts.k, "colour count")->required();
  moments->add_option("--dprime", moment_opts.dprime, "target density d'")->required();
  moments->add_option("--n", moment_opts.n, "vertex count(s)")->required();
  moments->add_option("--ensemble", moment_opts.ensemble, "multi|simple")
      ->check(CLI::IsMember({"multi", "simple"}));
  moments->callback(guarded([&] {
    if (moment_opts.n.size() > 1) {
      ExperimentFlags flags;
      flags.k = moment_opts.k;
      flags.dprime = moment_opts.dprime;
      flags.n_ladder = moment_opts.n;
      run_and_emit(make_config(ExperimentKind::moment_suite, globals, flags));
      return;
    }
    const colorlab::ModelParams params{moment_opts.k, moment_opts.dprime, moment_opts.n.front()};
    const auto ensemble = moment_opts.ensemble == "simple" ? colorlab::Ensemble::simple
                                                           : colorlab::Ensemble::multigraph;
    const double log_exact = colorlab::expected_count(params, ensemble).log();
    const double log_asympt = colorlab::first_moment_asymptotic(params).log();
    json j;
    j["k"] = params.k;
    j["dprime"] = params.dprime;
    j["n"] = params.n;
    j["m"] = params.edge_target();
    j["d"] = params.edge_density();
    j["ensemble"] = moment_opts.ensemble;
    j["log_expected_exact"] = log_exact;
    j["log_expected_asymptotic"] = log_asympt;
    j["log_difference"] = log_exact - log_asympt;
    j["ratio"] = std::exp(log_exact - log_asympt);
    emit(j, globals.format);
  }));

  // ---- experiments ----------------------------------------------------------
  ExperimentFlags limit_flags, cond_flags, poisson_flags, second_flags;
  auto* limit = app.add_subcommand("limit-check", "centred log-counts vs the limit law");
  add_experiment_flags(limit, limit_flags);
  limit->callback(guarded(
      [&] { run_and_emit(make_config(ExperimentKind::limit_check, globals, limit_flags)); }));

  auto* cond = app.add_subcommand("cond-ratio", "census-conditioned moment ratios");
  add_experiment_flags(cond, cond_flags);
  cond->callback(guarded(
      [&] { run_and_emit(make_config(ExperimentKind::cond_ratio, globals, cond_flags)); }));

  auto* poisson = app.add_subcommand("poisson-fit", "census joint law vs product Poisson");
  add_experiment_flags(poisson, poisson_flags);
  poisson->callback(guarded(
      [&] { run_and_emit(make_config(ExperimentKind::poisson_fit, globals, poisson_flags)); }));

  auto* second = app.add_subcommand("secondmoment", "exact second-moment ratio ladder");
  add_experiment_flags(second, second_flags);
  second->callback(guarded([&] {
    run_and_emit(make_config(ExperimentKind::secondmoment_scan, globals, second_flags));
  }));

  // ---- optimize -------------------------------------------------------------
  auto* optimize = app.add_subcommand("optimize", "maximize the uniform-margin pair exponent");
  struct {
    int k = 3;
    double d = 2.0;
    int starts = 64;
  } opt_opts;
  optimize->add_option("--k", opt_opts.k, "colour count")->required();
  optimize->add_option("--d", opt_opts.d, "density d")->required();
  optimize->add_option("--starts", opt_opts.starts, "random starts");
  optimize->callback(guarded([&] {
    const auto report = colorlab::maximize_uniform_pair_exponent(opt_opts.d, opt_opts.k,
                                                                 opt_opts.starts, globals.seed);
    std::cout << colorlab::to_json(report) << '\n';
  }));

  // ---- threshold proxy ------------------------------------------------------
  auto* proxy = app.add_subcommand(
      "threshold-proxy", "second-moment diagnostic: largest d keeping the barycentre maximal");
  struct {
    int k = 3;
    double tol = 0.01;
  } proxy_opts;
  proxy->add_option("--k", proxy_opts.k, "colour count")->required();
  proxy->add_option("--tol", proxy_opts.tol, "bisection tolerance");
  proxy->callback(guarded([&] {
    const double value =
        colorlab::second_moment_threshold_proxy(proxy_opts.k, proxy_opts.tol, globals.seed);
    json j;
    j["k"] = proxy_opts.k;
    j["tol"] = proxy_opts.tol;
    j["second_moment_proxy"] = value;
    j["note"] = "second-moment diagnostic of the uniform-margin exponent, "
                "not a colourability threshold";
    emit(j, globals.format);
  }));

  // ---- report ---------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "summarize a JSONL run record as CSV");
  struct {
    std::string in_path;
    std::string out_path;
  } report_opts;
  report_cmd->add_option("--in", report_opts.in_path, "JSONL run record")->required();
  report_cmd->add_option("--out-file", report_opts.out_path, "CSV destination (default stdout)");
  report_cmd->callback(guarded([&] {
    std::ifstream in(report_opts.in_path);
    if (!in)
      throw colorlab::ValidationError("cannot open record '" + report_opts.in_path + "'");
    const auto report = colorlab::summarize_jsonl(in);
    if (report_opts.out_path.empty()) {
      colorlab::write_summary_csv(std::cout, report);
    } else {
      std::ofstream out(report_opts.out_path);
      colorlab::write_summary_csv(out, report);
    }
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return exit_code;
}

// Command-line front end: `run` executes a seeded active-learning experiment
// on a CSV dataset, `summarize` aggregates results files, `bench` times
// projected batch construction across pool sizes.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acs/dataset.hpp"
#include "acs/error.hpp"
#include "acs/harness.hpp"

namespace {

// Accepts "a..b" (half-open range) or a comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const std::size_t dots = spec.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = std::stoull(spec.substr(0, dots));
    const std::uint64_t hi = std::stoull(spec.substr(dots + 2));
    if (hi <= lo) throw CLI::ValidationError("--seeds", "empty range: " + spec);
    for (std::uint64_t s = lo; s < hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string tok =
        spec.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds in: " + spec);
  return seeds;
}

std::string file_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian batch active learning via sparse subset approximation (ACS-FW)"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a seeded active-learning experiment");
  std::string data_path, target_column, task_name = "regression";
  std::string strategy_name = "acs-fw-projected", seeds_spec = "0..20";
  std::string out_path = "results.csv", format = "csv", timing = "wall";
  acs::ALConfig config;
  bool serial = false;
  run->add_option("--data", data_path, "CSV dataset path")->required();
  run->add_option("--target", target_column, "target column name")->required();
  run->add_option("--task", task_name, "regression | probit")
      ->check(CLI::IsMember({"regression", "probit"}));
  run->add_option("--strategy", strategy_name, "batch selection strategy")
      ->check(CLI::IsMember({"acs-fw", "acs-fw-projected", "random", "maxent", "bald",
                             "maxent-sg", "maxent-i"}));
  run->add_option("--init-labeled", config.init_labeled, "initial labeled set size");
  run->add_option("--batch-size", config.batch_size, "query batch size b");
  run->add_option("--budget", config.budget, "total label budget");
  run->add_option("--projections", config.projections, "projection dimension J");
  run->add_option("--noise-var", config.noise_variance, "observation noise variance");
  run->add_option("--prior-var", config.prior_variance, "prior weight variance");
  run->add_option("--seeds", seeds_spec, "seed range a..b (half-open) or list a,b,c");
  run->add_option("--test-fraction", config.test_fraction, "held-out fraction");
  run->add_flag("--standardize,!--no-standardize", config.standardize,
                "standardize features (and regression targets) using training statistics");
  run->add_option("--bald-samples", config.bald_samples, "posterior samples for probit BALD");
  run->add_option("--impute-threshold", config.impute_threshold,
                  "probit imputation cutoff for maxent-i");
  run->add_option("--out", out_path, "results file path");
  run->add_option("--format", format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--timing", timing, "wall | off (off writes 0 to the time columns)")
      ->check(CLI::IsMember({"wall", "off"}));
  run->add_flag("--serial", serial, "disable OpenMP parallel kernels");

  // summarize
  auto* summ = app.add_subcommand("summarize", "Aggregate results files");
  std::vector<std::string> in_paths;
  std::string summary_out;
  summ->add_option("--in", in_paths, "results file(s), csv or jsonl")->required();
  summ->add_option("--out", summary_out, "summary CSV path");

  // bench
  auto* bench = app.add_subcommand("bench", "Time batch construction across pool sizes");
  std::vector<int> pool_sizes = {10000, 40000};
  int bench_projections = 10, bench_batch = 10, bench_reps = 3;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  bench->add_option("--pool-sizes", pool_sizes, "pool sizes M to time");
  bench->add_option("--projections", bench_projections, "projection dimension J");
  bench->add_option("--batch-size", bench_batch, "query batch size b");
  bench->add_option("--seed", bench_seed, "pool generator seed");
  bench->add_option("--reps", bench_reps, "repetitions (best is kept)");
  bench->add_option("--out", bench_out, "write the table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(run)) {
      config.task = acs::parse_task(task_name);
      config.strategy = acs::parse_strategy(strategy_name);
      config.seeds = parse_seeds(seeds_spec);
      config.record_timing = (timing == "wall");
      config.exec = serial ? acs::Exec::serial : acs::Exec::parallel;
      config.validate();

      const acs::Dataset data = acs::load_csv(data_path, target_column);
      const std::vector<acs::ALRecord> records = acs::run_al(config, data);
      if (format == "jsonl") {
        acs::write_results_jsonl(records, out_path);
      } else {
        acs::write_results_csv(records, out_path);
      }
      const acs::RunSummary s = acs::summarize(records, strategy_name);
      acs::print_summary_table({s}, std::cout);
      std::cout << "wrote " << records.size() << " records to " << out_path << "\n";
    } else if (app.got_subcommand(summ)) {
      std::vector<acs::RunSummary> rows;
      for (const std::string& path : in_paths) {
        rows.push_back(acs::summarize(acs::read_results(path), file_stem(path)));
      }
      acs::print_summary_table(rows, std::cout);
      if (!summary_out.empty()) acs::write_summary_csv(rows, summary_out);
    } else if (app.got_subcommand(bench)) {
      const std::vector<acs::BenchRow> rows =
          acs::bench_scaling(pool_sizes, bench_projections, bench_batch, bench_seed, bench_reps);
      acs::print_bench_table(rows, std::cout);
      if (!bench_out.empty()) {
        std::ofstream out(bench_out);
        if (!out) throw acs::DataError("cannot write file: " + bench_out);
        out << "pool_size,project_serial_s,project_parallel_s,fw_serial_s,fw_parallel_s,"
               "batch_construction_s\n";
        for (const acs::BenchRow& r : rows) {
          out << r.pool_size << ',' << r.project_serial_s << ',' << r.project_parallel_s
              << ',' << r.fw_serial_s << ',' << r.fw_parallel_s << ','
              << r.batch_construction_s << "\n";
        }
      }
    }
  } catch (const acs::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

#pragma once

// Experiment orchestration: the outer active-learning loop over seeds,
// metric and runtime accounting, results persistence and summaries.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "acs/dataset.hpp"
#include "acs/exec.hpp"

namespace acs {

enum class Task { regression, probit };

enum class Strategy {
  acs_fw,            // closed-form Fisher kernel + Frank-Wolfe
  acs_fw_projected,  // random projections + Frank-Wolfe
  random,
  maxent,            // naive top-b predictive entropy
  bald,              // naive top-b information gain
  maxent_sg,         // sequential greedy, true label after each pick
  maxent_i,          // sequential greedy, imputed label after each pick
};

Task parse_task(const std::string& name);
Strategy parse_strategy(const std::string& name);
std::string to_string(Task task);
std::string to_string(Strategy strategy);

struct ALConfig {
  Task task = Task::regression;
  Strategy strategy = Strategy::acs_fw_projected;
  int init_labeled = 20;
  int batch_size = 10;        // b
  int budget = 100;           // total number of label queries
  int projections = 10;       // J
  double noise_variance = 1.0;
  double prior_variance = 1.0;
  std::vector<std::uint64_t> seeds = {0};
  double test_fraction = 0.2;
  bool standardize = true;
  int bald_samples = 1000;           // posterior samples for probit BALD
  double impute_threshold = 0.5;     // probit label imputation cutoff
  bool record_timing = true;         // false writes 0.0 to both time columns
  Exec exec = Exec::parallel;

  void validate() const;
};

struct ALRecord {
  std::uint64_t seed = 0;
  int iteration = 0;
  int labeled_count = 0;   // |D_0| the model was fitted on this iteration
  int queried_count = 0;   // points acquired this iteration (0 on the final row)
  double metric = 0.0;     // test RMSE (regression) or accuracy (probit)
  double batch_time_s = 0.0;
  double total_time_s = 0.0;
};

// Per seed: split train/test, fit standardization on the training split only,
// draw the initial labeled set, then alternate fit / evaluate / acquire until
// the budget is exhausted or the pool is empty. A fit or selection failure
// aborts that seed with a NaN-metric failure row. Records are ordered by
// (seed, iteration).
std::vector<ALRecord> run_al(const ALConfig& config, const Dataset& data);

// CSV with the exact header
//   seed,iteration,labeled_count,queried_count,metric,batch_time_s,total_time_s
// Doubles are written with 17 significant digits and round-trip losslessly.
void write_results_csv(const std::vector<ALRecord>& records, const std::string& path);
void write_results_jsonl(const std::vector<ALRecord>& records, const std::string& path);
std::vector<ALRecord> read_results(const std::string& path);  // .csv or .jsonl

struct RunSummary {
  std::string label;
  int seed_count = 0;
  double final_metric_mean = 0.0;
  double final_metric_stderr = 0.0;
  double mean_batch_time_s = 0.0;   // BT/it.
  double mean_total_time_s = 0.0;   // TT/it.
  double cumulative_time_s = 0.0;
};

// Final-iteration metric mean +- standard error across seeds plus mean
// per-iteration times. Requires at least one completed seed.
RunSummary summarize(const std::vector<ALRecord>& records, const std::string& label);

void print_summary_table(const std::vector<RunSummary>& rows, std::ostream& out);
void write_summary_csv(const std::vector<RunSummary>& rows, const std::string& path);

struct BenchRow {
  int pool_size = 0;
  double project_serial_s = 0.0;
  double project_parallel_s = 0.0;
  double fw_serial_s = 0.0;
  double fw_parallel_s = 0.0;
  double batch_construction_s = 0.0;  // project + Frank-Wolfe, parallel path
};

// Times projected batch construction on synthetic pools of the given sizes,
// serial against OpenMP paths, taking the best of `reps` repetitions.
std::vector<BenchRow> bench_scaling(const std::vector<int>& pool_sizes, int projections,
                                    int batch_size, std::uint64_t seed, int reps = 3);

void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace acs

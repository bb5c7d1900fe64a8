#include "acs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "acs/acquisition.hpp"
#include "acs/coreset_fw.hpp"
#include "acs/error.hpp"
#include "acs/models.hpp"
#include "acs/rng.hpp"

namespace acs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Fixed offset between the split seed and the initial-labeled-set seed, so
// the two random streams are decorrelated but reproducible.
constexpr std::uint64_t kInitSeedOffset = 1000003;

// Stream tags for per-iteration seed derivation.
constexpr std::uint64_t kProjectionStream = 0x50000000;
constexpr std::uint64_t kBaldStream = 0x42000000;
constexpr std::uint64_t kRandomStream = 0x52000000;

const char kResultsHeader[] =
    "seed,iteration,labeled_count,queried_count,metric,batch_time_s,total_time_s";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = X.row(rows[i]);
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& y, const std::vector<int>& rows) {
  Eigen::VectorXd out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = y[rows[i]];
  return out;
}

// Per-seed state: the standardized splits the loop works on.
struct SeedContext {
  const ALConfig& config;
  std::uint64_t seed;
  Eigen::MatrixXd train_X;   // standardized
  Eigen::VectorXd train_y;   // standardized targets (regression) or 0/1 labels
  Eigen::MatrixXd test_X;    // standardized
  Eigen::VectorXd test_y;    // raw targets (metrics are computed on raw scale)
  Standardizer scaler;
};

template <class Model>
std::vector<int> construct_acs_batch(const SeedContext& ctx, const Model& model,
                                     const Eigen::MatrixXd& pool_X, int b_eff,
                                     int iteration) {
  FWState state;
  if (ctx.config.strategy == Strategy::acs_fw_projected) {
    const std::uint64_t proj_seed = mix_seed(ctx.seed, kProjectionStream + iteration);
    const ProjectionMatrix proj =
        project(model, pool_X, ctx.config.projections, proj_seed, ctx.config.exec);
    state = fw_construct_projected(proj, b_eff, ctx.config.exec);
  } else {
    std::unique_ptr<DenseKernel> kernel;
    if constexpr (std::is_same_v<Model, LinRegModel>) {
      kernel = linreg_fisher_kernel(model, pool_X, ctx.config.exec);
    } else {
      kernel = probit_fisher_kernel(model, pool_X, ctx.config.exec);
    }
    state = fw_construct(*kernel, b_eff, ctx.config.exec);
  }
  std::vector<int> picked = binarize(state).indices;
  if (picked.empty()) {
    // Residual was already ~0; query the highest-norm point to keep moving.
    int best = 0;
    for (int n = 1; n < state.sigma.size(); ++n) {
      if (state.sigma[n] > state.sigma[best]) best = n;
    }
    picked.push_back(best);
  }
  return picked;
}

std::vector<ALRecord> run_seed(const SeedContext& ctx) {
  const ALConfig& cfg = ctx.config;
  const int train_n = static_cast<int>(ctx.train_X.rows());

  std::vector<int> labeled =
      sample_without_replacement(train_n, cfg.init_labeled, ctx.seed + kInitSeedOffset);
  std::sort(labeled.begin(), labeled.end());
  std::vector<bool> is_labeled(train_n, false);
  for (int i : labeled) is_labeled[i] = true;
  std::vector<int> pool;
  for (int i = 0; i < train_n; ++i) {
    if (!is_labeled[i]) pool.push_back(i);
  }

  std::vector<ALRecord> records;
  int queried_total = 0;
  int iteration = 0;
  while (true) {
    const auto iter_start = Clock::now();
    const Eigen::MatrixXd lab_X = gather_rows(ctx.train_X, labeled);
    const Eigen::VectorXd lab_y = gather(ctx.train_y, labeled);

    LinRegModel reg_model;
    ProbitModel probit_model;
    double metric = 0.0;
    if (cfg.task == Task::regression) {
      reg_model = linreg_fit(lab_X, lab_y, cfg.noise_variance, cfg.prior_variance);
      double sq_sum = 0.0;
      for (int i = 0; i < ctx.test_X.rows(); ++i) {
        const double pred =
            ctx.scaler.untransform_prediction(reg_model.posterior.mean.dot(ctx.test_X.row(i)));
        const double err = pred - ctx.test_y[i];
        sq_sum += err * err;
      }
      metric = std::sqrt(sq_sum / ctx.test_X.rows());
    } else {
      probit_model = probit_fit(lab_X, lab_y, cfg.prior_variance);
      int correct = 0;
      for (int i = 0; i < ctx.test_X.rows(); ++i) {
        const double p = probit_predict(probit_model, ctx.test_X.row(i).transpose()).prob;
        if ((p >= 0.5 ? 1.0 : 0.0) == ctx.test_y[i]) ++correct;
      }
      metric = static_cast<double>(correct) / ctx.test_X.rows();
    }

    ALRecord rec;
    rec.seed = ctx.seed;
    rec.iteration = iteration;
    rec.labeled_count = static_cast<int>(labeled.size());
    rec.metric = metric;

    if (queried_total >= cfg.budget || pool.empty()) {
      rec.queried_count = 0;
      rec.total_time_s = cfg.record_timing ? seconds_since(iter_start) : 0.0;
      records.push_back(rec);
      break;
    }

    const int b_eff = std::min({cfg.batch_size, cfg.budget - queried_total,
                                static_cast<int>(pool.size())});
    const Eigen::MatrixXd pool_X = gather_rows(ctx.train_X, pool);
    const Eigen::VectorXd pool_y = gather(ctx.train_y, pool);

    const auto batch_start = Clock::now();
    std::vector<int> picked;  // indices into pool
    switch (cfg.strategy) {
      case Strategy::random:
        picked = select_random(static_cast<int>(pool.size()), b_eff,
                               mix_seed(ctx.seed, kRandomStream + iteration));
        break;
      case Strategy::maxent: {
        const Eigen::VectorXd scores =
            (cfg.task == Task::regression)
                ? maxent_scores(reg_model, pool_X, cfg.exec)
                : maxent_scores(probit_model, pool_X, cfg.exec);
        picked = select_top_b(scores, b_eff);
        break;
      }
      case Strategy::bald: {
        const Eigen::VectorXd scores =
            (cfg.task == Task::regression)
                ? bald_scores(reg_model, pool_X, cfg.exec)
                : bald_scores(probit_model, pool_X, cfg.bald_samples,
                              mix_seed(ctx.seed, kBaldStream + iteration), cfg.exec);
        picked = select_top_b(scores, b_eff);
        break;
      }
      case Strategy::maxent_sg:
      case Strategy::maxent_i: {
        const GreedyMode mode =
            (cfg.strategy == Strategy::maxent_sg) ? GreedyMode::retrain : GreedyMode::impute;
        picked = (cfg.task == Task::regression)
                     ? select_sequential_greedy(lab_X, lab_y, pool_X, pool_y, b_eff, mode,
                                                cfg.noise_variance, cfg.prior_variance)
                     : select_sequential_greedy_probit(lab_X, lab_y, pool_X, pool_y, b_eff,
                                                       mode, cfg.prior_variance,
                                                       cfg.impute_threshold);
        break;
      }
      case Strategy::acs_fw:
      case Strategy::acs_fw_projected:
        picked = (cfg.task == Task::regression)
                     ? construct_acs_batch(ctx, reg_model, pool_X, b_eff, iteration)
                     : construct_acs_batch(ctx, probit_model, pool_X, b_eff, iteration);
        break;
    }
    const double batch_time = cfg.record_timing ? seconds_since(batch_start) : 0.0;

    rec.queried_count = static_cast<int>(picked.size());
    rec.batch_time_s = batch_time;
    rec.total_time_s = cfg.record_timing ? seconds_since(iter_start) : 0.0;
    records.push_back(rec);

    // Reveal the true labels: move the picked points from pool to labeled.
    std::vector<int> picked_global(picked.size());
    for (std::size_t i = 0; i < picked.size(); ++i) picked_global[i] = pool[picked[i]];
    std::sort(picked_global.begin(), picked_global.end());
    for (int g : picked_global) {
      labeled.push_back(g);
      is_labeled[g] = true;
    }
    std::sort(labeled.begin(), labeled.end());
    std::vector<int> next_pool;
    next_pool.reserve(pool.size() - picked.size());
    for (int g : pool) {
      if (!is_labeled[g]) next_pool.push_back(g);
    }
    pool.swap(next_pool);

    queried_total += rec.queried_count;
    ++iteration;
  }
  return records;
}

}  // namespace

void ALConfig::validate() const {
  if (init_labeled < 1) throw std::invalid_argument("init_labeled must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (budget < batch_size) throw std::invalid_argument("budget must be >= batch_size");
  if (projections < 1) throw std::invalid_argument("projections must be >= 1");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("noise_variance must be > 0");
  if (!(prior_variance > 0.0)) throw std::invalid_argument("prior_variance must be > 0");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must be in (0,1)");
  }
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (bald_samples < 1) throw std::invalid_argument("bald_samples must be >= 1");
}

std::vector<ALRecord> run_al(const ALConfig& config, const Dataset& data) {
  config.validate();
  std::vector<ALRecord> all;
  for (const std::uint64_t seed : config.seeds) {
    SeedContext ctx{config, seed, {}, {}, {}, {}, {}};
    auto [train, test] = split(data, config.test_fraction, seed);
    if (config.init_labeled + config.budget > train.size()) {
      throw DataError("init_labeled + budget exceeds the training split size (" +
                      std::to_string(train.size()) + ")");
    }
    if (config.standardize) {
      ctx.scaler = Standardizer::fit(train, config.task == Task::regression);
      ctx.train_X = ctx.scaler.transform_inputs(train.inputs);
      ctx.train_y = ctx.scaler.transform_targets(train.targets);
      ctx.test_X = ctx.scaler.transform_inputs(test.inputs);
    } else {
      ctx.train_X = train.inputs;
      ctx.train_y = train.targets;
      ctx.test_X = test.inputs;
    }
    ctx.test_y = test.targets;

    try {
      std::vector<ALRecord> seed_records = run_seed(ctx);
      all.insert(all.end(), seed_records.begin(), seed_records.end());
    } catch (const NumericError& e) {
      ALRecord failure;
      failure.seed = seed;
      failure.iteration = -1;
      failure.metric = std::numeric_limits<double>::quiet_NaN();
      all.push_back(failure);
      std::cerr << "seed " << seed << " aborted: " << e.what() << "\n";
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const ALRecord& a, const ALRecord& b) {
    return a.seed != b.seed ? a.seed < b.seed : a.iteration < b.iteration;
  });
  return all;
}

void write_results_csv(const std::vector<ALRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << kResultsHeader << "\n";
  for (const ALRecord& r : records) {
    out << r.seed << ',' << r.iteration << ',' << r.labeled_count << ',' << r.queried_count
        << ',' << format_double(r.metric) << ',' << format_double(r.batch_time_s) << ','
        << format_double(r.total_time_s) << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_results_jsonl(const std::vector<ALRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (const ALRecord& r : records) {
    out << "{\"seed\":" << r.seed << ",\"iteration\":" << r.iteration
        << ",\"labeled_count\":" << r.labeled_count
        << ",\"queried_count\":" << r.queried_count << ",\"metric\":"
        << (std::isnan(r.metric) ? "null" : format_double(r.metric))
        << ",\"batch_time_s\":" << format_double(r.batch_time_s)
        << ",\"total_time_s\":" << format_double(r.total_time_s) << "}\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

std::vector<ALRecord> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<ALRecord> records;
  std::string line;
  const bool jsonl = path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl";
  if (jsonl) {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json j = nlohmann::json::parse(line);
      ALRecord r;
      r.seed = j.at("seed").get<std::uint64_t>();
      r.iteration = j.at("iteration").get<int>();
      r.labeled_count = j.at("labeled_count").get<int>();
      r.queried_count = j.at("queried_count").get<int>();
      r.metric = j.at("metric").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                          : j.at("metric").get<double>();
      r.batch_time_s = j.at("batch_time_s").get<double>();
      r.total_time_s = j.at("total_time_s").get<double>();
      records.push_back(r);
    }
    return records;
  }
  if (!std::getline(in, line)) throw DataError("empty results file: " + path);
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  if (line != kResultsHeader) throw DataError("unexpected results header in " + path);
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) {
      throw DataError("malformed results row " + std::to_string(row) + " in " + path);
    }
    ALRecord r;
    r.seed = std::stoull(cells[0]);
    r.iteration = std::stoi(cells[1]);
    r.labeled_count = std::stoi(cells[2]);
    r.queried_count = std::stoi(cells[3]);
    r.metric = std::strtod(cells[4].c_str(), nullptr);
    r.batch_time_s = std::strtod(cells[5].c_str(), nullptr);
    r.total_time_s = std::strtod(cells[6].c_str(), nullptr);
    records.push_back(r);
  }
  return records;
}

RunSummary summarize(const std::vector<ALRecord>& records, const std::string& label) {
  if (records.empty()) throw DataError("summarize: no records");
  // Final record per seed, skipping aborted seeds.
  std::vector<double> finals;
  std::vector<double> batch_times, total_times;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ALRecord& r = records[i];
    const bool last_of_seed = (i + 1 == records.size()) || (records[i + 1].seed != r.seed);
    if (last_of_seed && !std::isnan(r.metric)) finals.push_back(r.metric);
    if (r.queried_count > 0) {  // per-iteration means cover the batch-constructing rows
      batch_times.push_back(r.batch_time_s);
      total_times.push_back(r.total_time_s);
    }
    if (!std::isnan(r.metric)) cumulative += r.total_time_s;
  }
  if (finals.empty()) throw NumericError("summarize: no completed seeds");

  RunSummary s;
  s.label = label;
  s.seed_count = static_cast<int>(finals.size());
  double mean = 0.0;
  for (double v : finals) mean += v;
  mean /= finals.size();
  s.final_metric_mean = mean;
  if (finals.size() > 1) {
    double ss = 0.0;
    for (double v : finals) ss += (v - mean) * (v - mean);
    s.final_metric_stderr = std::sqrt(ss / (finals.size() - 1)) / std::sqrt(finals.size());
  }
  auto mean_of = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    return m / v.size();
  };
  s.mean_batch_time_s = mean_of(batch_times);
  s.mean_total_time_s = mean_of(total_times);
  s.cumulative_time_s = cumulative;
  return s;
}

void print_summary_table(const std::vector<RunSummary>& rows, std::ostream& out) {
  out << std::left << std::setw(24) << "run" << std::right << std::setw(7) << "seeds"
      << std::setw(14) << "metric" << std::setw(12) << "stderr" << std::setw(12) << "BT/it."
      << std::setw(12) << "TT/it." << std::setw(12) << "total" << "\n";
  for (const RunSummary& s : rows) {
    out << std::left << std::setw(24) << s.label << std::right << std::setw(7) << s.seed_count
        << std::setw(14) << std::setprecision(6) << s.final_metric_mean << std::setw(12)
        << std::setprecision(4) << s.final_metric_stderr << std::setw(12)
        << std::setprecision(4) << s.mean_batch_time_s << std::setw(12)
        << std::setprecision(4) << s.mean_total_time_s << std::setw(12)
        << std::setprecision(4) << s.cumulative_time_s << "\n";
  }
}

void write_summary_csv(const std::vector<RunSummary>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "run,seeds,final_metric_mean,final_metric_stderr,mean_batch_time_s,"
         "mean_total_time_s,cumulative_time_s\n";
  for (const RunSummary& s : rows) {
    out << s.label << ',' << s.seed_count << ',' << format_double(s.final_metric_mean) << ','
        << format_double(s.final_metric_stderr) << ',' << format_double(s.mean_batch_time_s)
        << ',' << format_double(s.mean_total_time_s) << ','
        << format_double(s.cumulative_time_s) << "\n";
  }
}

std::vector<BenchRow> bench_scaling(const std::vector<int>& pool_sizes, int projections,
                                    int batch_size, std::uint64_t seed, int reps) {
  constexpr int kDim = 10;
  // A fixed model fitted on a small synthetic labeled set; the pools reuse
  // the same generator so larger sizes are supersets in distribution.
  Rng rng(mix_seed(seed, 7));
  Eigen::MatrixXd lab_X(50, kDim);
  Eigen::VectorXd lab_y(50);
  Eigen::VectorXd theta(kDim);
  for (int c = 0; c < kDim; ++c) theta[c] = rng.normal();
  for (int i = 0; i < 50; ++i) {
    for (int c = 0; c < kDim; ++c) lab_X(i, c) = rng.normal();
    lab_y[i] = theta.dot(lab_X.row(i)) + 0.5 * rng.normal();
  }
  const LinRegModel model = linreg_fit(lab_X, lab_y, 0.25, 1.0);

  std::vector<BenchRow> rows;
  for (const int m_total : pool_sizes) {
    Rng pool_rng(mix_seed(seed, 100 + m_total));
    Eigen::MatrixXd pool(m_total, kDim);
    for (int i = 0; i < m_total; ++i) {
      const double scale = std::exp(0.5 * pool_rng.normal());
      for (int c = 0; c < kDim; ++c) pool(i, c) = scale * pool_rng.normal();
    }

    BenchRow row;
    row.pool_size = m_total;
    auto time_best = [&](auto&& fn) {
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        best = std::min(best, seconds_since(t0));
      }
      return best;
    };

    ProjectionMatrix proj;
    row.project_serial_s =
        time_best([&] { proj = project(model, pool, projections, seed, Exec::serial); });
    row.project_parallel_s =
        time_best([&] { proj = project(model, pool, projections, seed, Exec::parallel); });
    row.fw_serial_s =
        time_best([&] { fw_construct_projected(proj, batch_size, Exec::serial); });
    row.fw_parallel_s =
        time_best([&] { fw_construct_projected(proj, batch_size, Exec::parallel); });
    row.batch_construction_s = time_best([&] {
      const ProjectionMatrix p = project(model, pool, projections, seed, Exec::parallel);
      fw_construct_projected(p, batch_size, Exec::parallel);
    });
    rows.push_back(row);
  }
  return rows;
}

void print_bench_table(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << std::right << std::setw(10) << "M" << std::setw(14) << "proj serial" << std::setw(14)
      << "proj omp" << std::setw(14) << "fw serial" << std::setw(14) << "fw omp"
      << std::setw(14) << "batch total" << "\n";
  for (const BenchRow& r : rows) {
    out << std::right << std::setw(10) << r.pool_size << std::setprecision(4) << std::setw(14)
        << r.project_serial_s << std::setw(14) << r.project_parallel_s << std::setw(14)
        << r.fw_serial_s << std::setw(14) << r.fw_parallel_s << std::setw(14)
        << r.batch_construction_s << "\n";
  }
}

Task parse_task(const std::string& name) {
  if (name == "regression") return Task::regression;
  if (name == "probit") return Task::probit;
  throw std::invalid_argument("unknown task: " + name);
}

Strategy parse_strategy(const std::string& name) {
  if (name == "acs-fw") return Strategy::acs_fw;
  if (name == "acs-fw-projected") return Strategy::acs_fw_projected;
  if (name == "random") return Strategy::random;
  if (name == "maxent") return Strategy::maxent;
  if (name == "bald") return Strategy::bald;
  if (name == "maxent-sg") return Strategy::maxent_sg;
  if (name == "maxent-i") return Strategy::maxent_i;
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string to_string(Task task) {
  return task == Task::regression ? "regression" : "probit";
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::acs_fw: return "acs-fw";
    case Strategy::acs_fw_projected: return "acs-fw-projected";
    case Strategy::random: return "random";
    case Strategy::maxent: return "maxent";
    case Strategy::bald: return "bald";
    case Strategy::maxent_sg: return "maxent-sg";
    case Strategy::maxent_i: return "maxent-i";
  }
  return "unknown";
}

}  // namespace acs

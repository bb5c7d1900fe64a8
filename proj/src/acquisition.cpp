#include "acs/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "acs/rng.hpp"

namespace acs {

namespace {

Eigen::MatrixXd append_row(const Eigen::MatrixXd& X, const Eigen::VectorXd& row) {
  Eigen::MatrixXd out(X.rows() + 1, row.size());
  out.topRows(X.rows()) = X;
  out.bottomRows(1) = row.transpose();
  return out;
}

Eigen::VectorXd append_value(const Eigen::VectorXd& y, double v) {
  Eigen::VectorXd out(y.size() + 1);
  out.head(y.size()) = y;
  out[y.size()] = v;
  return out;
}

}  // namespace

double score_maxent(const LinRegModel& model, const Eigen::VectorXd& x) {
  return gaussian_entropy(linreg_predict(model, x).variance);
}

double score_maxent(const ProbitModel& model, const Eigen::VectorXd& x) {
  return bernoulli_entropy(probit_predict(model, x).prob);
}

double score_bald(const LinRegModel& model, const Eigen::VectorXd& x) {
  const double s = x.dot(model.posterior.cov * x);
  return 0.5 * std::log1p(s / model.noise_variance);
}

double score_bald(const ProbitModel& model, const Eigen::VectorXd& x,
                  int num_samples, std::uint64_t seed) {
  Eigen::MatrixXd pool(1, x.size());
  pool.row(0) = x.transpose();
  return bald_scores(model, pool, num_samples, seed, Exec::serial)[0];
}

Eigen::VectorXd maxent_scores(const LinRegModel& model, const Eigen::MatrixXd& pool,
                              Exec policy) {
  Eigen::VectorXd scores(pool.rows());
  for_each_index(static_cast<int>(pool.rows()), policy, [&](int n) {
    scores[n] = score_maxent(model, Eigen::VectorXd(pool.row(n)));
  });
  return scores;
}

Eigen::VectorXd maxent_scores(const ProbitModel& model, const Eigen::MatrixXd& pool,
                              Exec policy) {
  Eigen::VectorXd scores(pool.rows());
  for_each_index(static_cast<int>(pool.rows()), policy, [&](int n) {
    scores[n] = score_maxent(model, Eigen::VectorXd(pool.row(n)));
  });
  return scores;
}

Eigen::VectorXd bald_scores(const LinRegModel& model, const Eigen::MatrixXd& pool,
                            Exec policy) {
  Eigen::VectorXd scores(pool.rows());
  for_each_index(static_cast<int>(pool.rows()), policy, [&](int n) {
    scores[n] = score_bald(model, Eigen::VectorXd(pool.row(n)));
  });
  return scores;
}

Eigen::VectorXd bald_scores(const ProbitModel& model, const Eigen::MatrixXd& pool,
                            int num_samples, std::uint64_t seed, Exec policy) {
  if (num_samples < 1) throw std::invalid_argument("bald_scores: num_samples must be >= 1");
  const Eigen::MatrixXd thetas = sample_posterior(model, num_samples, seed);  // S x d
  Eigen::VectorXd scores(pool.rows());
  for_each_index(static_cast<int>(pool.rows()), policy, [&](int n) {
    const Eigen::VectorXd logits = thetas * pool.row(n).transpose();
    double mean_p = 0.0, mean_h = 0.0;
    for (int s = 0; s < num_samples; ++s) {
      const double p = std_normal_cdf(logits[s]);
      mean_p += p;
      mean_h += bernoulli_entropy(p);
    }
    mean_p /= num_samples;
    mean_h /= num_samples;
    scores[n] = bernoulli_entropy(mean_p) - mean_h;
  });
  return scores;
}

std::vector<int> select_top_b(const Eigen::VectorXd& scores, int b) {
  const int m_total = static_cast<int>(scores.size());
  if (b < 0 || b > m_total) throw std::invalid_argument("select_top_b: b out of range");
  std::vector<int> order(m_total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int c) { return scores[a] > scores[c]; });
  order.resize(b);
  return order;
}

std::vector<int> select_random(int pool_size, int b, std::uint64_t seed) {
  if (b < 0 || b > pool_size) throw std::invalid_argument("select_random: b out of range");
  return sample_without_replacement(pool_size, b, seed);
}

std::vector<int> select_sequential_greedy(
    const Eigen::MatrixXd& labeled_X, const Eigen::VectorXd& labeled_y,
    const Eigen::MatrixXd& pool_X, const Eigen::VectorXd& pool_y, int b,
    GreedyMode mode, double noise_variance, double prior_variance) {
  if (b < 1 || b > pool_X.rows()) {
    throw std::invalid_argument("select_sequential_greedy: b out of range");
  }
  Eigen::MatrixXd X = labeled_X;
  Eigen::VectorXd y = labeled_y;
  std::vector<bool> taken(pool_X.rows(), false);
  std::vector<int> picked;
  for (int round = 0; round < b; ++round) {
    const LinRegModel model = linreg_fit(X, y, noise_variance, prior_variance);
    Eigen::VectorXd scores = maxent_scores(model, pool_X);
    for (int n = 0; n < scores.size(); ++n) {
      if (taken[n]) scores[n] = -std::numeric_limits<double>::infinity();
    }
    const int f = select_top_b(scores, 1)[0];
    picked.push_back(f);
    taken[f] = true;
    const Eigen::VectorXd x_f = pool_X.row(f);
    const double label = (mode == GreedyMode::retrain) ? pool_y[f]
                                                       : linreg_predict(model, x_f).mean;
    X = append_row(X, x_f);
    y = append_value(y, label);
  }
  return picked;
}

std::vector<int> select_sequential_greedy_probit(
    const Eigen::MatrixXd& labeled_X, const Eigen::VectorXd& labeled_y,
    const Eigen::MatrixXd& pool_X, const Eigen::VectorXd& pool_y, int b,
    GreedyMode mode, double prior_variance, double impute_threshold) {
  if (b < 1 || b > pool_X.rows()) {
    throw std::invalid_argument("select_sequential_greedy_probit: b out of range");
  }
  Eigen::MatrixXd X = labeled_X;
  Eigen::VectorXd y = labeled_y;
  std::vector<bool> taken(pool_X.rows(), false);
  std::vector<int> picked;
  for (int round = 0; round < b; ++round) {
    const ProbitModel model = probit_fit(X, y, prior_variance);
    Eigen::VectorXd scores = maxent_scores(model, pool_X);
    for (int n = 0; n < scores.size(); ++n) {
      if (taken[n]) scores[n] = -std::numeric_limits<double>::infinity();
    }
    const int f = select_top_b(scores, 1)[0];
    picked.push_back(f);
    taken[f] = true;
    const Eigen::VectorXd x_f = pool_X.row(f);
    double label;
    if (mode == GreedyMode::retrain) {
      label = pool_y[f];
    } else {
      label = (probit_predict(model, x_f).prob >= impute_threshold) ? 1.0 : 0.0;
    }
    X = append_row(X, x_f);
    y = append_value(y, label);
  }
  return picked;
}

}  // namespace acs

#pragma once

// Baseline batch-selection strategies: random, naive top-b MaxEnt and BALD,
// and sequential-greedy MaxEnt with either oracle retraining or label
// imputation between picks.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "acs/exec.hpp"
#include "acs/models.hpp"

namespace acs {

// Predictive entropy. Regression: entropy of the Gaussian predictive;
// probit: Bernoulli entropy of the predictive probability.
double score_maxent(const LinRegModel& model, const Eigen::VectorXd& x);
double score_maxent(const ProbitModel& model, const Eigen::VectorXd& x);

// Expected information gain. Closed form for linear regression,
//   0.5 * log(1 + x^T Sigma x / sigma0^2);
// Monte Carlo H[y_hat] - E_theta[H[y|x,theta]] for probit.
double score_bald(const LinRegModel& model, const Eigen::VectorXd& x);
double score_bald(const ProbitModel& model, const Eigen::VectorXd& x,
                  int num_samples = 1000, std::uint64_t seed = 0);

// Pool-wide scoring; one posterior sample set is shared across the pool for
// the probit BALD estimator. Parallelizable over rows, schedule-independent.
Eigen::VectorXd maxent_scores(const LinRegModel& model, const Eigen::MatrixXd& pool,
                              Exec policy = Exec::parallel);
Eigen::VectorXd maxent_scores(const ProbitModel& model, const Eigen::MatrixXd& pool,
                              Exec policy = Exec::parallel);
Eigen::VectorXd bald_scores(const LinRegModel& model, const Eigen::MatrixXd& pool,
                            Exec policy = Exec::parallel);
Eigen::VectorXd bald_scores(const ProbitModel& model, const Eigen::MatrixXd& pool,
                            int num_samples, std::uint64_t seed,
                            Exec policy = Exec::parallel);

// Indices of the b largest scores, ties broken toward the lowest index,
// returned in descending score order.
std::vector<int> select_top_b(const Eigen::VectorXd& scores, int b);

// b distinct indices drawn uniformly from [0, pool_size), in draw order.
std::vector<int> select_random(int pool_size, int b, std::uint64_t seed);

enum class GreedyMode {
  retrain,  // reveal the true label after each pick and refit
  impute,   // refit on the model's own predicted label, discarded afterward
};

// Sequential-greedy MaxEnt: b rounds of single-point top-1 selection with a
// model refit in between. pool_y is consulted only in retrain mode. Already
// selected indices are masked out. Deterministic given inputs.
std::vector<int> select_sequential_greedy(
    const Eigen::MatrixXd& labeled_X, const Eigen::VectorXd& labeled_y,
    const Eigen::MatrixXd& pool_X, const Eigen::VectorXd& pool_y, int b,
    GreedyMode mode, double noise_variance, double prior_variance);

std::vector<int> select_sequential_greedy_probit(
    const Eigen::MatrixXd& labeled_X, const Eigen::VectorXd& labeled_y,
    const Eigen::MatrixXd& pool_X, const Eigen::VectorXd& pool_y, int b,
    GreedyMode mode, double prior_variance, double impute_threshold = 0.5);

}  // namespace acs

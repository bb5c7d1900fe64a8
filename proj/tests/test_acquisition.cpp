#include "acs/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "acs/rng.hpp"
#include "oracles.hpp"

using namespace acs;

namespace {

LinRegModel random_linreg(int d, int n, acs::Rng& rng, double noise_var = 1.0) {
  const Eigen::MatrixXd x = oracle::random_matrix(n, d, rng);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = rng.normal();
  return linreg_fit(x, y, noise_var, 1.0);
}

}  // namespace

TEST_CASE("score_maxent closed values") {
  const LinRegModel prior = linreg_fit(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 1.0, 1.0);
  CHECK(score_maxent(prior, Eigen::Vector2d::Zero()) ==
        doctest::Approx(0.5 * std::log(2.0 * M_PI * M_E)).epsilon(1e-15));

  const ProbitModel pm = probit_fit(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 1.0);
  CHECK(score_maxent(pm, Eigen::Vector2d(2, -1)) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("regression maxent argmax equals the argmax of x^T Sigma x") {
  acs::Rng rng(301);
  const LinRegModel model = random_linreg(3, 10, rng);
  const Eigen::MatrixXd pool = oracle::random_matrix(25, 3, rng);
  int best_var = 0, best_ent = 0;
  double v_var = -1e300, v_ent = -1e300;
  for (int n = 0; n < 25; ++n) {
    const Eigen::VectorXd x = pool.row(n);
    const double q = x.dot(model.posterior.cov * x);
    const double e = score_maxent(model, x);
    if (q > v_var) {
      v_var = q;
      best_var = n;
    }
    if (e > v_ent) {
      v_ent = e;
      best_ent = n;
    }
  }
  CHECK(best_var == best_ent);
}

TEST_CASE("score_bald closed values for linreg") {
  const LinRegModel prior = linreg_fit(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), 1.0, 1.0);
  CHECK(score_bald(prior, Eigen::Vector2d(1, 0)) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(score_bald(prior, Eigen::Vector2d::Zero()) == 0.0);
}

TEST_CASE("top-b maxent and top-b bald pick the same set for linreg") {
  acs::Rng rng(307);
  for (int rep = 0; rep < 20; ++rep) {
    const LinRegModel model = random_linreg(4, 12, rng, 0.4 + rng.uniform());
    const Eigen::MatrixXd pool = oracle::random_matrix(30, 4, rng);
    const std::vector<int> ent = select_top_b(maxent_scores(model, pool), 7);
    const std::vector<int> bald = select_top_b(bald_scores(model, pool), 7);
    CHECK(ent == bald);
  }
}

TEST_CASE("probit bald MC estimator") {
  acs::Rng rng(311);
  const Eigen::MatrixXd x = oracle::random_matrix(30, 2, rng);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) y[i] = x(i, 0) > 0 ? 1.0 : 0.0;
  const ProbitModel model = probit_fit(x, y, 1.0);

  // x = 0: the conditional is Ber(1/2) for every theta, so the gain is 0
  // up to accumulation roundoff.
  CHECK(std::abs(score_bald(model, Eigen::Vector2d::Zero(), 500, 5)) <= 1e-12);
  // Information gain is nonnegative up to MC noise and deterministic by seed.
  const double s1 = score_bald(model, Eigen::Vector2d(1.5, -0.5), 2000, 9);
  const double s2 = score_bald(model, Eigen::Vector2d(1.5, -0.5), 2000, 9);
  CHECK(s1 == s2);
  CHECK(s1 >= -1e-6);
}

TEST_CASE("select_top_b examples") {
  Eigen::VectorXd scores(3);
  scores << 3.0, 1.0, 2.0;
  CHECK(select_top_b(scores, 2) == std::vector<int>{0, 2});
  CHECK(select_top_b(Eigen::VectorXd::Ones(4), 2) == std::vector<int>{0, 1});
  CHECK(select_top_b(scores, 3) == std::vector<int>{0, 2, 1});
  CHECK_THROWS_AS(select_top_b(scores, 4), std::invalid_argument);
}

TEST_CASE("select_random: permutation, determinism, uniformity") {
  std::vector<int> all = select_random(6, 6, 77);
  std::vector<int> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});

  CHECK(select_random(50, 10, 3) == select_random(50, 10, 3));

  // Each index appears with frequency b/M over repeated draws.
  const int draws = 100000, m = 5, b = 2;
  std::vector<int> counts(m, 0);
  for (int rep = 0; rep < draws; ++rep) {
    for (int idx : select_random(m, b, 1000000 + rep)) counts[idx]++;
  }
  const double p = static_cast<double>(b) / m;
  const double se = std::sqrt(p * (1.0 - p) / draws);
  for (int idx = 0; idx < m; ++idx) {
    CHECK(std::abs(static_cast<double>(counts[idx]) / draws - p) <= 4.0 * se);
  }
}

TEST_CASE("sequential greedy with b = 1 equals top-1 maxent in both modes") {
  acs::Rng rng(313);
  const Eigen::MatrixXd lab_X = oracle::random_matrix(8, 2, rng);
  Eigen::VectorXd lab_y(8);
  for (int i = 0; i < 8; ++i) lab_y[i] = rng.normal();
  const Eigen::MatrixXd pool = oracle::random_matrix(15, 2, rng);
  const Eigen::VectorXd pool_y = Eigen::VectorXd::Zero(15);

  const LinRegModel model = linreg_fit(lab_X, lab_y, 1.0, 1.0);
  const std::vector<int> top1 = select_top_b(maxent_scores(model, pool), 1);
  CHECK(select_sequential_greedy(lab_X, lab_y, pool, pool_y, 1, GreedyMode::retrain, 1.0,
                                 1.0) == top1);
  CHECK(select_sequential_greedy(lab_X, lab_y, pool, pool_y, 1, GreedyMode::impute, 1.0,
                                 1.0) == top1);
}

TEST_CASE("imputation collapses the variance of a duplicated pool point") {
  // Pool holds two copies of one far-out point plus a modest distinct one;
  // after the first pick refits, the duplicate's variance has collapsed and
  // the second pick must be the distinct point.
  Eigen::MatrixXd lab_X(2, 2);
  lab_X << 0.1, 0.0, 0.0, 0.1;
  Eigen::VectorXd lab_y(2);
  lab_y << 0.0, 0.1;
  Eigen::MatrixXd pool(3, 2);
  pool << 3.0, 0.0, 3.0, 0.0, 0.0, 1.5;
  const Eigen::VectorXd pool_y = Eigen::VectorXd::Zero(3);

  const std::vector<int> picks =
      select_sequential_greedy(lab_X, lab_y, pool, pool_y, 2, GreedyMode::impute, 1.0, 1.0);
  CHECK(picks[0] == 0);
  CHECK(picks[1] == 2);

  // Naive top-b spends both picks on the duplicates.
  const LinRegModel model = linreg_fit(lab_X, lab_y, 1.0, 1.0);
  const std::vector<int> naive = select_top_b(maxent_scores(model, pool), 2);
  CHECK(naive == std::vector<int>{0, 1});
}

TEST_CASE("sequential greedy is deterministic") {
  acs::Rng rng(317);
  const Eigen::MatrixXd lab_X = oracle::random_matrix(10, 3, rng);
  Eigen::VectorXd lab_y(10);
  for (int i = 0; i < 10; ++i) lab_y[i] = rng.normal();
  const Eigen::MatrixXd pool = oracle::random_matrix(20, 3, rng);
  Eigen::VectorXd pool_y(20);
  for (int i = 0; i < 20; ++i) pool_y[i] = rng.normal();

  const auto a = select_sequential_greedy(lab_X, lab_y, pool, pool_y, 5, GreedyMode::retrain,
                                          0.5, 1.0);
  const auto b = select_sequential_greedy(lab_X, lab_y, pool, pool_y, 5, GreedyMode::retrain,
                                          0.5, 1.0);
  CHECK(a == b);
}

TEST_CASE("probit sequential greedy returns distinct in-range indices") {
  acs::Rng rng(331);
  const Eigen::MatrixXd lab_X = oracle::random_matrix(12, 2, rng);
  Eigen::VectorXd lab_y(12);
  for (int i = 0; i < 12; ++i) lab_y[i] = lab_X(i, 0) > 0 ? 1.0 : 0.0;
  const Eigen::MatrixXd pool = oracle::random_matrix(18, 2, rng);
  Eigen::VectorXd pool_y(18);
  for (int i = 0; i < 18; ++i) pool_y[i] = pool(i, 0) > 0 ? 1.0 : 0.0;

  for (const GreedyMode mode : {GreedyMode::retrain, GreedyMode::impute}) {
    const auto picks =
        select_sequential_greedy_probit(lab_X, lab_y, pool, pool_y, 6, mode, 1.0, 0.5);
    CHECK(picks.size() == 6);
    std::vector<int> sorted = picks;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (int idx : picks) {
      CHECK(idx >= 0);
      CHECK(idx < 18);
    }
  }
}

TEST_CASE("all strategies return distinct in-range index lists of length min(b, M)") {
  acs::Rng rng(337);
  const LinRegModel model = random_linreg(3, 10, rng);
  const Eigen::MatrixXd pool = oracle::random_matrix(9, 3, rng);
  for (const int b : {1, 4, 9}) {
    for (const auto& picks : {select_top_b(maxent_scores(model, pool), b),
                              select_top_b(bald_scores(model, pool), b),
                              select_random(9, b, 11)}) {
      CHECK(static_cast<int>(picks.size()) == std::min(b, 9));
      std::vector<int> sorted = picks;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      for (int idx : picks) {
        CHECK(idx >= 0);
        CHECK(idx < 9);
      }
    }
  }
}

#pragma once

// Probabilistic models with Gaussian parameter posteriors: conjugate Bayesian
// linear regression and probit regression with a Laplace-approximated
// posterior. Models are immutable after fitting; prediction, sampling and
// log-likelihood evaluation are read-only and safe to call concurrently.

#include <cstdint>

#include <Eigen/Dense>

#include "acs/special_fn.hpp"

namespace acs {

struct GaussianPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

struct PredictiveGaussian {
  double mean = 0.0;
  double variance = 0.0;
};

struct PredictiveBernoulli {
  Probability prob;
};

struct LinRegModel {
  GaussianPosterior posterior;
  double noise_variance = 1.0;   // sigma_0^2, fixed and known
  double prior_variance = 1.0;

  int dim() const { return posterior.dim(); }
};

struct ProbitModel {
  GaussianPosterior posterior;
  double prior_variance = 1.0;

  int dim() const { return posterior.dim(); }
};

// Conjugate fit. With unit prior variance the posterior is
//   mean = (X^T X + sigma0^2 I)^-1 X^T y,  cov = sigma0^2 (X^T X + sigma0^2 I)^-1;
// a non-unit prior variance s^2 replaces the ridge term by (sigma0^2/s^2) I.
// An empty X (0 x d) recovers the prior. Deterministic given inputs.
LinRegModel linreg_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double noise_variance, double prior_variance);

PredictiveGaussian linreg_predict(const LinRegModel& model, const Eigen::VectorXd& x);

// Laplace approximation: damped Newton to the MAP of the probit log joint,
// covariance from the inverse Hessian at the MAP. Labels must be in {0,1}.
// Throws NumericError if the gradient norm has not reached grad_tol after
// max_iter iterations.
ProbitModel probit_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double prior_variance, int max_iter = 100,
                       double grad_tol = 1e-8);

// Ber(Phi(mu^T x / sqrt(1 + x^T Sigma x))).
PredictiveBernoulli probit_predict(const ProbitModel& model, const Eigen::VectorXd& x);

// The per-point expected log-likelihood term: expectation of log p(y|x,theta)
// under the current predictive, plus the predictive entropy.
double expected_loglik_term(const LinRegModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta);
double expected_loglik_term(const ProbitModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta);

// count i.i.d. draws from N(mean, cov), one per row. Cholesky when the
// covariance is positive definite, eigendecomposition (with small negative
// eigenvalues clamped to zero) otherwise; eigenvalues below -1e-10 * trace are
// rejected. Deterministic given seed.
Eigen::MatrixXd sample_posterior(const GaussianPosterior& posterior, int count,
                                 std::uint64_t seed);

template <class Model>
Eigen::MatrixXd sample_posterior(const Model& model, int count, std::uint64_t seed) {
  return sample_posterior(model.posterior, count, seed);
}

// log Phi(z) clamped at the IEEE double underflow boundary, used inside the
// probit expected log-likelihood so 0 * -inf never occurs.
inline double clamped_log_cdf(double z) {
  const double v = std_normal_log_cdf(z);
  return v < -745.0 ? -745.0 : v;
}

double bernoulli_entropy(double p);
double gaussian_entropy(double variance);

// The expected log-likelihood term with the predictive already in hand; the
// projection fill reuses these so the per-point predictive is computed once
// per pool row instead of once per (row, sample) pair.
double loglik_term_linreg(const PredictiveGaussian& pred, double noise_variance,
                          double theta_dot_x);
double loglik_term_probit(double predictive_prob, double theta_dot_x);

}  // namespace acs

#include "acs/models.hpp"

#include <cmath>
#include <string>

#include "acs/error.hpp"
#include "acs/rng.hpp"

namespace acs {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728;

void check_dim(const Eigen::VectorXd& x, int d, const char* where) {
  if (x.size() != d) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (got " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(d) + ")");
  }
}

// Inverse Mills ratio phi(u)/Phi(u), stable for u far in the lower tail.
double inv_mills(double u) {
  return std::exp(-0.5 * u * u - 0.5 * kLog2Pi - std_normal_log_cdf(u));
}

double probit_log_joint(const Eigen::MatrixXd& X, const Eigen::VectorXd& t,
                        const Eigen::VectorXd& theta, double prior_variance) {
  const Eigen::VectorXd u = (X * theta).cwiseProduct(t);
  double ll = 0.0;
  for (Eigen::Index n = 0; n < u.size(); ++n) ll += std_normal_log_cdf(u[n]);
  return ll - 0.5 * theta.squaredNorm() / prior_variance;
}

}  // namespace

LinRegModel linreg_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double noise_variance, double prior_variance) {
  if (!(noise_variance > 0.0)) throw std::invalid_argument("linreg_fit: noise_variance must be > 0");
  if (!(prior_variance > 0.0)) throw std::invalid_argument("linreg_fit: prior_variance must be > 0");
  if (X.rows() != y.size()) throw std::invalid_argument("linreg_fit: X rows != y size");
  const Eigen::Index d = X.cols();
  if (d < 1) throw std::invalid_argument("linreg_fit: d must be >= 1");

  Eigen::MatrixXd A = X.transpose() * X;
  A.diagonal().array() += noise_variance / prior_variance;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw NumericError("linreg_fit: singular normal-equations matrix");
  }

  LinRegModel model;
  model.noise_variance = noise_variance;
  model.prior_variance = prior_variance;
  model.posterior.mean = ldlt.solve(X.transpose() * y);
  model.posterior.cov = noise_variance * ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  // Symmetrize away the solve's rounding asymmetry.
  model.posterior.cov = 0.5 * (model.posterior.cov + model.posterior.cov.transpose()).eval();
  return model;
}

PredictiveGaussian linreg_predict(const LinRegModel& model, const Eigen::VectorXd& x) {
  check_dim(x, model.dim(), "linreg_predict");
  PredictiveGaussian out;
  out.mean = model.posterior.mean.dot(x);
  out.variance = model.noise_variance + x.dot(model.posterior.cov * x);
  return out;
}

ProbitModel probit_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double prior_variance, int max_iter, double grad_tol) {
  if (!(prior_variance > 0.0)) throw std::invalid_argument("probit_fit: prior_variance must be > 0");
  if (X.rows() != y.size()) throw std::invalid_argument("probit_fit: X rows != y size");
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (d < 1) throw std::invalid_argument("probit_fit: d must be >= 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) {
      throw std::invalid_argument("probit_fit: labels must be in {0,1} (row " +
                                  std::to_string(i) + ")");
    }
  }

  const Eigen::VectorXd t = 2.0 * y.array() - 1.0;  // {-1, +1}
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  double obj = probit_log_joint(X, t, theta, prior_variance);

  Eigen::VectorXd grad(d);
  Eigen::MatrixXd H(d, d);
  double grad_norm = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd u = (X * theta).cwiseProduct(t);
    Eigen::VectorXd g(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lam = inv_mills(u[i]);
      g[i] = t[i] * lam;
      w[i] = std::max(0.0, lam * (u[i] + lam));
    }
    grad = X.transpose() * g - theta / prior_variance;
    grad_norm = grad.norm();
    if (grad_norm <= grad_tol) break;

    H = X.transpose() * w.asDiagonal() * X;
    H.diagonal().array() += 1.0 / prior_variance;
    Eigen::VectorXd step = H.ldlt().solve(grad);

    // Backtrack only on a measurable decrease: near the optimum the true
    // improvement drops below the objective's floating-point resolution, and
    // gating on strict improvement would stall on rounding noise.
    const double noise_slack = 1e-9 * (1.0 + std::abs(obj));
    double alpha = 1.0;
    double next_obj = probit_log_joint(X, t, theta + alpha * step, prior_variance);
    int halvings = 0;
    while (next_obj < obj - noise_slack && halvings < 60) {
      alpha *= 0.5;
      next_obj = probit_log_joint(X, t, theta + alpha * step, prior_variance);
      ++halvings;
    }
    theta += alpha * step;
    obj = next_obj;
  }
  if (grad_norm > grad_tol) {
    throw NumericError("probit_fit: no convergence after " + std::to_string(max_iter) +
                       " iterations (gradient norm " + std::to_string(grad_norm) + ")");
  }

  // Covariance from the negative Hessian at the MAP.
  const Eigen::VectorXd u = (X * theta).cwiseProduct(t);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = inv_mills(u[i]);
    w[i] = std::max(0.0, lam * (u[i] + lam));
  }
  Eigen::MatrixXd prec = X.transpose() * w.asDiagonal() * X;
  prec.diagonal().array() += 1.0 / prior_variance;

  ProbitModel model;
  model.prior_variance = prior_variance;
  model.posterior.mean = theta;
  model.posterior.cov = prec.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
  model.posterior.cov = 0.5 * (model.posterior.cov + model.posterior.cov.transpose()).eval();
  return model;
}

PredictiveBernoulli probit_predict(const ProbitModel& model, const Eigen::VectorXd& x) {
  check_dim(x, model.dim(), "probit_predict");
  const double zeta = model.posterior.mean.dot(x) /
                      std::sqrt(1.0 + x.dot(model.posterior.cov * x));
  return PredictiveBernoulli{std_normal_cdf(zeta)};
}

double loglik_term_linreg(const PredictiveGaussian& pred, double noise_variance,
                          double theta_dot_x) {
  const double resid = pred.mean - theta_dot_x;
  const double expected_nll = -0.5 * (kLog2Pi + std::log(noise_variance)) -
                              (pred.variance + resid * resid) / (2.0 * noise_variance);
  return expected_nll + gaussian_entropy(pred.variance);
}

double loglik_term_probit(double predictive_prob, double theta_dot_x) {
  const double p = predictive_prob;
  return p * clamped_log_cdf(theta_dot_x) + (1.0 - p) * clamped_log_cdf(-theta_dot_x) +
         bernoulli_entropy(p);
}

double expected_loglik_term(const LinRegModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta) {
  check_dim(theta, model.dim(), "expected_loglik_term");
  return loglik_term_linreg(linreg_predict(model, x), model.noise_variance, theta.dot(x));
}

double expected_loglik_term(const ProbitModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& theta) {
  check_dim(theta, model.dim(), "expected_loglik_term");
  return loglik_term_probit(probit_predict(model, x).prob, theta.dot(x));
}

Eigen::MatrixXd sample_posterior(const GaussianPosterior& posterior, int count,
                                 std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_posterior: count must be >= 1");
  const int d = posterior.dim();

  Eigen::MatrixXd factor;  // samples = mean + factor * z
  Eigen::LLT<Eigen::MatrixXd> llt(posterior.cov);
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(posterior.cov);
    if (eig.info() != Eigen::Success) throw NumericError("sample_posterior: eigendecomposition failed");
    const double floor = -1e-10 * std::max(1e-300, posterior.cov.trace());
    Eigen::VectorXd evals = eig.eigenvalues();
    for (int i = 0; i < d; ++i) {
      if (evals[i] < floor) {
        throw NumericError("sample_posterior: covariance not PSD (eigenvalue " +
                           std::to_string(evals[i]) + ")");
      }
      evals[i] = std::max(0.0, evals[i]);
    }
    factor = eig.eigenvectors() * evals.cwiseSqrt().asDiagonal();
  }

  Rng rng(seed);
  Eigen::MatrixXd samples(count, d);
  Eigen::VectorXd z(d);
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    samples.row(j) = (posterior.mean + factor * z).transpose();
  }
  return samples;
}

double bernoulli_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

double gaussian_entropy(double variance) {
  return 0.5 * (kLog2Pi + 1.0 + std::log(variance));
}

}  // namespace acs

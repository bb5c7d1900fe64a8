#include "acs/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "acs/error.hpp"

namespace acs {

namespace {

void check_pool(const Eigen::MatrixXd& pool, int d, const char* where) {
  if (pool.cols() != d) {
    throw std::invalid_argument(std::string(where) + ": pool dimension mismatch");
  }
  if (pool.rows() < 1) {
    throw std::invalid_argument(std::string(where) + ": empty pool");
  }
}

double clamp_corr(double rho) {
  if (rho > 1.0) return 1.0;
  if (rho < -1.0) return -1.0;
  return rho;
}

}  // namespace

DenseKernel::DenseKernel(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("DenseKernel: matrix must be square");
  }
  if (!matrix_.allFinite()) {
    throw NumericError("DenseKernel: non-finite kernel entries");
  }
}

double DenseKernel::norm(int n) const {
  return std::sqrt(std::max(0.0, matrix_(n, n)));
}

double fisher_linreg_inner(const LinRegModel& model, const Eigen::VectorXd& x_n,
                           const Eigen::VectorXd& x_m) {
  if (x_n.size() != model.dim() || x_m.size() != model.dim()) {
    throw std::invalid_argument("fisher_linreg_inner: dimension mismatch");
  }
  const double s4 = model.noise_variance * model.noise_variance;
  return x_n.dot(x_m) / s4 * x_n.dot(model.posterior.cov * x_m);
}

double fisher_probit_inner(const ProbitModel& model, const Eigen::VectorXd& x_n,
                           const Eigen::VectorXd& x_m) {
  if (x_n.size() != model.dim() || x_m.size() != model.dim()) {
    throw std::invalid_argument("fisher_probit_inner: dimension mismatch");
  }
  const Eigen::MatrixXd& cov = model.posterior.cov;
  const double sn = x_n.dot(cov * x_n);
  const double sm = x_m.dot(cov * x_m);
  const double snm = x_n.dot(cov * x_m);
  const double dn = std::sqrt(1.0 + sn);
  const double dm = std::sqrt(1.0 + sm);
  const double zeta_n = model.posterior.mean.dot(x_n) / dn;
  const double zeta_m = model.posterior.mean.dot(x_m) / dm;
  const double rho = clamp_corr(snm / (dn * dm));
  const double cov_phi = bvn_cdf(zeta_n, zeta_m, rho) -
                         std_normal_cdf(zeta_n) * std_normal_cdf(zeta_m);
  return x_n.dot(x_m) * cov_phi;
}

double fisher_probit_norm_sq(const ProbitModel& model, const Eigen::VectorXd& x_n) {
  if (x_n.size() != model.dim()) {
    throw std::invalid_argument("fisher_probit_norm_sq: dimension mismatch");
  }
  const double s = x_n.dot(model.posterior.cov * x_n);
  const double zeta = model.posterior.mean.dot(x_n) / std::sqrt(1.0 + s);
  const double phi = std_normal_cdf(zeta);
  const double v = x_n.squaredNorm() *
                   (phi * (1.0 - phi) - 2.0 * owens_t(zeta, 1.0 / std::sqrt(1.0 + 2.0 * s)));
  return std::max(0.0, v);
}

double acquisition_score_acs(const LinRegModel& model, const Eigen::VectorXd& x) {
  return fisher_linreg_inner(model, x, x);
}

double acquisition_score_acs(const ProbitModel& model, const Eigen::VectorXd& x) {
  return fisher_probit_norm_sq(model, x);
}

std::unique_ptr<DenseKernel> linreg_fisher_kernel(const LinRegModel& model,
                                                  const Eigen::MatrixXd& pool,
                                                  Exec policy) {
  check_pool(pool, model.dim(), "linreg_fisher_kernel");
  const int m_total = static_cast<int>(pool.rows());
  const double s4 = model.noise_variance * model.noise_variance;
  const Eigen::MatrixXd scaled = pool * model.posterior.cov;  // M x d
  Eigen::MatrixXd k(m_total, m_total);
  for_each_index(m_total, policy, [&](int n) {
    for (int m = 0; m <= n; ++m) {
      const double v = pool.row(n).dot(pool.row(m)) / s4 * scaled.row(n).dot(pool.row(m));
      k(n, m) = v;
      k(m, n) = v;
    }
  });
  return std::make_unique<DenseKernel>(std::move(k));
}

std::unique_ptr<DenseKernel> probit_fisher_kernel(const ProbitModel& model,
                                                  const Eigen::MatrixXd& pool,
                                                  Exec policy) {
  check_pool(pool, model.dim(), "probit_fisher_kernel");
  const int m_total = static_cast<int>(pool.rows());
  const Eigen::MatrixXd scaled = pool * model.posterior.cov;  // M x d
  Eigen::VectorXd self(m_total), denom(m_total), zeta(m_total), phi(m_total);
  for (int n = 0; n < m_total; ++n) {
    self[n] = scaled.row(n).dot(pool.row(n));
    denom[n] = std::sqrt(1.0 + self[n]);
    zeta[n] = model.posterior.mean.dot(pool.row(n)) / denom[n];
    phi[n] = std_normal_cdf(zeta[n]);
  }
  Eigen::MatrixXd k(m_total, m_total);
  for_each_index(m_total, policy, [&](int n) {
    for (int m = 0; m < n; ++m) {
      const double rho = clamp_corr(scaled.row(n).dot(pool.row(m)) / (denom[n] * denom[m]));
      const double v = pool.row(n).dot(pool.row(m)) *
                       (bvn_cdf(zeta[n], zeta[m], rho) - phi[n] * phi[m]);
      k(n, m) = v;
      k(m, n) = v;
    }
    const double diag =
        pool.row(n).squaredNorm() *
        (phi[n] * (1.0 - phi[n]) -
         2.0 * owens_t(zeta[n], 1.0 / std::sqrt(1.0 + 2.0 * self[n])));
    k(n, n) = std::max(0.0, diag);
  });
  return std::make_unique<DenseKernel>(std::move(k));
}

template <class Model>
ProjectionMatrix project(const Model& model, const Eigen::MatrixXd& pool, int count,
                         std::uint64_t seed, Exec policy) {
  check_pool(pool, model.dim(), "project");
  if (count < 1) throw std::invalid_argument("project: count must be >= 1");
  const int m_total = static_cast<int>(pool.rows());
  const Eigen::MatrixXd thetas = sample_posterior(model, count, seed);  // J x d
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));

  ProjectionMatrix proj;
  proj.values.resize(m_total, count);
  for_each_index(m_total, policy, [&](int n) {
    const Eigen::VectorXd x = pool.row(n).transpose();
    if constexpr (std::is_same_v<Model, LinRegModel>) {
      const PredictiveGaussian pred = linreg_predict(model, x);
      for (int j = 0; j < count; ++j) {
        proj.values(n, j) =
            scale * loglik_term_linreg(pred, model.noise_variance, thetas.row(j).dot(x));
      }
    } else {
      const double p = probit_predict(model, x).prob;
      for (int j = 0; j < count; ++j) {
        proj.values(n, j) = scale * loglik_term_probit(p, thetas.row(j).dot(x));
      }
    }
  });
  if (!proj.values.allFinite()) {
    throw NumericError("project: non-finite projection entries");
  }
  return proj;
}

template ProjectionMatrix project<LinRegModel>(const LinRegModel&, const Eigen::MatrixXd&,
                                               int, std::uint64_t, Exec);
template ProjectionMatrix project<ProbitModel>(const ProbitModel&, const Eigen::MatrixXd&,
                                               int, std::uint64_t, Exec);

double euclidean_inner(const ProjectionMatrix& proj, int n, int m) {
  if (n < 0 || m < 0 || n >= proj.pool_size() || m >= proj.pool_size()) {
    throw std::out_of_range("euclidean_inner: index out of range");
  }
  return proj.values.row(n).dot(proj.values.row(m));
}

double ProjectionKernel::inner(int n, int m) const {
  return proj_.values.row(n).dot(proj_.values.row(m));
}

}  // namespace acs

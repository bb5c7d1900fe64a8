#pragma once

// Inner-product providers over the expected log-likelihood vectors of the
// pool: closed-form posterior-weighted Fisher kernels for the linear and
// probit models, and the random-projection estimator of the posterior-weighted
// Euclidean inner product for arbitrary models.

#include <cstdint>
#include <memory>

#include <Eigen/Dense>

#include "acs/exec.hpp"
#include "acs/models.hpp"

namespace acs {

// Pairwise inner products <L_n, L_m> and norms sigma_n over a pool of M
// points. inner is symmetric, norm(n) = sqrt(inner(n,n)) >= 0, and the full
// matrix is PSD up to numerical slack. Providers are immutable once built;
// evaluations are pure and safe to call concurrently.
class KernelProvider {
 public:
  virtual ~KernelProvider() = default;
  virtual int pool_size() const = 0;
  virtual double inner(int n, int m) const = 0;
  virtual double norm(int n) const = 0;
};

// Provider over an explicit M x M matrix.
class DenseKernel final : public KernelProvider {
 public:
  explicit DenseKernel(Eigen::MatrixXd matrix);
  int pool_size() const override { return static_cast<int>(matrix_.rows()); }
  double inner(int n, int m) const override { return matrix_(n, m); }
  double norm(int n) const override;
  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXd matrix_;
};

// <L_n, L_m> = (x_n.x_m / sigma0^4) * x_n^T Sigma x_m
double fisher_linreg_inner(const LinRegModel& model, const Eigen::VectorXd& x_n,
                           const Eigen::VectorXd& x_m);

// <L_n, L_m> = x_n.x_m * (BvN(zeta_n, zeta_m, rho_nm) - Phi(zeta_n) Phi(zeta_m))
double fisher_probit_inner(const ProbitModel& model, const Eigen::VectorXd& x_n,
                           const Eigen::VectorXd& x_m);

// ||L_n||^2 = x_n.x_n * (Phi(zeta)(1 - Phi(zeta)) - 2 T(zeta, 1/sqrt(1 + 2 x^T Sigma x))),
// the Owen's T form of the diagonal; clamped to 0 if within 1e-12 below zero.
double fisher_probit_norm_sq(const ProbitModel& model, const Eigen::VectorXd& x_n);

// Squared Fisher norm of x under the model, usable as a greedy acquisition
// score for diagnostics and visualization.
double acquisition_score_acs(const LinRegModel& model, const Eigen::VectorXd& x);
double acquisition_score_acs(const ProbitModel& model, const Eigen::VectorXd& x);

// Materialized closed-form Fisher kernels. Construction is O(M^2) and may be
// parallelized over rows; the result is independent of the schedule.
std::unique_ptr<DenseKernel> linreg_fisher_kernel(const LinRegModel& model,
                                                  const Eigen::MatrixXd& pool,
                                                  Exec policy = Exec::parallel);

// Off-diagonals through the BvN form, the diagonal through the Owen's T form
// (numerically more stable at n = m).
std::unique_ptr<DenseKernel> probit_fisher_kernel(const ProbitModel& model,
                                                  const Eigen::MatrixXd& pool,
                                                  Exec policy = Exec::parallel);

// Rows are the J-dimensional Monte Carlo embeddings
//   Lhat_n = (1/sqrt(J)) [L_n(theta_1), ..., L_n(theta_J)]
// over one shared set of posterior samples, so row dot products are unbiased
// estimates of the posterior-weighted Euclidean inner product.
struct ProjectionMatrix {
  Eigen::MatrixXd values;  // M x J

  int pool_size() const { return static_cast<int>(values.rows()); }
  Eigen::MatrixXd gram() const { return values * values.transpose(); }
};

// Samples theta_1..theta_J once via sample_posterior(model, J, seed), then
// fills row n with (1/sqrt(J)) L_n(theta_j). Deterministic given seed.
template <class Model>
ProjectionMatrix project(const Model& model, const Eigen::MatrixXd& pool, int count,
                         std::uint64_t seed, Exec policy = Exec::parallel);

double euclidean_inner(const ProjectionMatrix& proj, int n, int m);

// Provider view over a projection (row dot products on demand).
class ProjectionKernel final : public KernelProvider {
 public:
  explicit ProjectionKernel(ProjectionMatrix proj) : proj_(std::move(proj)) {}
  int pool_size() const override { return proj_.pool_size(); }
  double inner(int n, int m) const override;
  double norm(int n) const override { return proj_.values.row(n).norm(); }
  const ProjectionMatrix& projection() const { return proj_; }

 private:
  ProjectionMatrix proj_;
};

}  // namespace acs

#include "acs/coreset_fw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acs/error.hpp"

namespace acs {

namespace {

constexpr double kResidualTol = 1e-12;  // early-out threshold, relative to ||L||^2

// Lowest-index argmax of t_n / sigma_n over candidates with sigma_n > 0.
int select_vertex(const Eigen::VectorXd& t, const Eigen::VectorXd& sigma) {
  int best = -1;
  double best_score = 0.0;
  for (int n = 0; n < t.size(); ++n) {
    if (sigma[n] <= 0.0) continue;
    const double score = t[n] / sigma[n];
    if (best < 0 || score > best_score) {
      best = n;
      best_score = score;
    }
  }
  return best;
}

Eigen::VectorXd read_norms(const KernelProvider& kernel) {
  const int m_total = kernel.pool_size();
  Eigen::VectorXd sigma(m_total);
  for (int n = 0; n < m_total; ++n) {
    sigma[n] = kernel.norm(n);
    if (!std::isfinite(sigma[n]) || sigma[n] < 0.0) {
      throw NumericError("fw_construct: invalid norm at index " + std::to_string(n));
    }
  }
  if (sigma.maxCoeff() <= 0.0) {
    throw NumericError("fw_construct: all norms zero (empty pool)");
  }
  return sigma;
}

}  // namespace

FWState fw_construct(const KernelProvider& kernel, int budget, Exec policy) {
  if (budget < 1) throw std::invalid_argument("fw_construct: budget must be >= 1");
  const int m_total = kernel.pool_size();
  if (m_total < 1) throw std::invalid_argument("fw_construct: empty kernel");

  FWState state;
  state.sigma = read_norms(kernel);
  state.sigma_total = state.sigma.sum();
  state.weights = Eigen::VectorXd::Zero(m_total);

  Eigen::VectorXd t(m_total);  // t_n = sum_m (1 - w_m) K_mn
  std::vector<int> support;
  for (int it = 0; it < budget; ++it) {
    for_each_index(m_total, policy, [&](int n) {
      double acc = 0.0;
      for (int m = 0; m < m_total; ++m) {
        acc += (1.0 - state.weights[m]) * kernel.inner(m, n);
      }
      t[n] = acc;
    });
    if (!t.allFinite()) throw NumericError("fw_construct: non-finite kernel entries");

    double objective = 0.0;
    for (int n = 0; n < m_total; ++n) objective += (1.0 - state.weights[n]) * t[n];
    if (it == 0) state.initial_objective = std::max(0.0, objective);
    if (objective <= kResidualTol * state.initial_objective) break;

    const int f = select_vertex(t, state.sigma);
    const double alpha = state.sigma_total / state.sigma[f];

    double w_dot_t = 0.0;
    for (int n : support) w_dot_t += state.weights[n] * t[n];
    double kw_f = 0.0;
    for (int m : support) kw_f += state.weights[m] * kernel.inner(f, m);
    double wkw = 0.0;
    for (int n : support) {
      for (int m : support) wkw += state.weights[n] * state.weights[m] * kernel.inner(n, m);
    }
    const double num = alpha * t[f] - w_dot_t;
    const double den = alpha * alpha * kernel.inner(f, f) - 2.0 * alpha * kw_f + wkw;
    if (den <= 0.0) break;  // vertex coincides with L(w): residual is exhausted
    const double gamma = std::clamp(num / den, 0.0, 1.0);

    state.weights *= 1.0 - gamma;
    state.weights[f] += gamma * alpha;
    support.clear();
    for (int n = 0; n < m_total; ++n) {
      if (state.weights[n] > 0.0) support.push_back(n);
    }

    state.selected.push_back(f);
    state.objective.push_back(std::max(0.0, objective - 2.0 * gamma * num + gamma * gamma * den));
    ++state.iterations;
  }
  return state;
}

double fw_step_gamma(const KernelProvider& kernel, const FWState& state, int f) {
  const int m_total = kernel.pool_size();
  if (f < 0 || f >= m_total) throw std::out_of_range("fw_step_gamma: index out of range");
  if (!(state.sigma[f] > 0.0)) {
    throw std::invalid_argument("fw_step_gamma: sigma_f must be > 0");
  }
  const double alpha = state.sigma_total / state.sigma[f];

  auto residual_inner = [&](int n) {  // <L - L(w), L_n>
    double acc = 0.0;
    for (int m = 0; m < m_total; ++m) acc += (1.0 - state.weights[m]) * kernel.inner(m, n);
    return acc;
  };

  double w_dot_t = 0.0, kw_f = 0.0, wkw = 0.0;
  for (int n = 0; n < m_total; ++n) {
    if (state.weights[n] == 0.0) continue;
    w_dot_t += state.weights[n] * residual_inner(n);
    kw_f += state.weights[n] * kernel.inner(f, n);
    for (int m = 0; m < m_total; ++m) {
      if (state.weights[m] != 0.0) {
        wkw += state.weights[n] * state.weights[m] * kernel.inner(n, m);
      }
    }
  }
  const double num = alpha * residual_inner(f) - w_dot_t;
  const double den = alpha * alpha * kernel.inner(f, f) - 2.0 * alpha * kw_f + wkw;
  if (den <= 0.0) {
    throw NumericError("fw_step_gamma: zero denominator (residual already zero)");
  }
  return std::clamp(num / den, 0.0, 1.0);
}

Batch binarize(const FWState& state) {
  Batch batch;
  batch.weights = state.weights;
  for (int n = 0; n < state.weights.size(); ++n) {
    if (state.weights[n] > 0.0) batch.indices.push_back(n);
  }
  return batch;
}

FWState fw_construct_projected(const ProjectionMatrix& proj, int budget, Exec policy) {
  if (budget < 1) throw std::invalid_argument("fw_construct_projected: budget must be >= 1");
  const int m_total = proj.pool_size();
  if (m_total < 1) throw std::invalid_argument("fw_construct_projected: empty projection");
  const Eigen::MatrixXd& rows = proj.values;

  FWState state;
  state.sigma.resize(m_total);
  for (int n = 0; n < m_total; ++n) state.sigma[n] = rows.row(n).norm();
  state.sigma_total = state.sigma.sum();
  state.weights = Eigen::VectorXd::Zero(m_total);

  const Eigen::VectorXd total = rows.colwise().sum().transpose();  // embedding of L
  Eigen::VectorXd residual = total;                                // embedding of L - L(w)
  Eigen::VectorXd scores(m_total);
  for (int it = 0; it < budget; ++it) {
    const double objective = residual.squaredNorm();
    if (it == 0) state.initial_objective = objective;
    if (objective <= kResidualTol * state.initial_objective) break;

    for_each_index(m_total, policy, [&](int n) { scores[n] = rows.row(n).dot(residual); });
    const int f = select_vertex(scores, state.sigma);
    if (f < 0) break;  // no candidate with positive norm
    const double alpha = state.sigma_total / state.sigma[f];

    const Eigen::VectorXd direction = alpha * rows.row(f).transpose() - (total - residual);
    const double num = direction.dot(residual);
    const double den = direction.squaredNorm();
    if (den <= 0.0) break;
    const double gamma = std::clamp(num / den, 0.0, 1.0);

    state.weights *= 1.0 - gamma;
    state.weights[f] += gamma * alpha;
    residual = (1.0 - gamma) * residual + gamma * total - gamma * alpha * rows.row(f).transpose();

    state.selected.push_back(f);
    state.objective.push_back(std::max(0.0, objective - 2.0 * gamma * num + gamma * gamma * den));
    ++state.iterations;
  }
  return state;
}

}  // namespace acs

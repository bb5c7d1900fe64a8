#pragma once

// Frank-Wolfe batch construction: sparse nonnegative weights over the pool
// whose weighted log-likelihood sum approximates the full pool's, followed by
// binarization of the support into the query batch.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "acs/exec.hpp"
#include "acs/kernels.hpp"

namespace acs {

struct FWState {
  Eigen::VectorXd weights;          // w >= 0, at most `iterations` nonzero
  Eigen::VectorXd sigma;            // per-point norms, sigma_n = ||L_n||
  double sigma_total = 0.0;         // sum of sigma_n
  int iterations = 0;               // iterations actually performed
  std::vector<int> selected;        // vertex chosen at each iteration
  std::vector<double> objective;    // residual ||L - L(w)||^2 after each iteration
  double initial_objective = 0.0;   // ||L||^2 (residual at w = 0)
};

struct Batch {
  std::vector<int> indices;    // ascending; the support of w
  Eigen::VectorXd weights;     // the continuous w, kept for diagnostics
};

// Runs `budget` Frank-Wolfe iterations on the relaxed polytope problem: each
// iteration picks the point most aligned with the residual,
//   f = argmax_n (1/sigma_n) sum_m (1 - w_m) K_mn      (ties: lowest index),
// line-searches the step size in closed form and moves toward the vertex
// (sigma/sigma_f) e_f. Points with sigma_n = 0 are never candidates. Stops
// early once the residual falls below 1e-12 * ||L||^2. The candidate scan may
// run in parallel; the result is schedule-independent.
FWState fw_construct(const KernelProvider& kernel, int budget,
                     Exec policy = Exec::parallel);

// Closed-form line-search step toward vertex f from state.weights, clamped to
// [0,1]. A non-positive denominator means the residual is already zero and
// raises NumericError.
double fw_step_gamma(const KernelProvider& kernel, const FWState& state, int f);

// Projects the continuous weights back to the feasible set: every point with
// w_m > 0 enters the batch with weight 1.
Batch binarize(const FWState& state);

// Frank-Wolfe over the projected vectors in R^J without materializing the
// M x M kernel: the residual is maintained as a J-vector, so each iteration
// costs O(M J). Identical selection to fw_construct over the corresponding
// ProjectionKernel up to floating-point roundoff.
FWState fw_construct_projected(const ProjectionMatrix& proj, int budget,
                               Exec policy = Exec::parallel);

// Samples one shared posterior sample set, projects every pool point, runs
// Frank-Wolfe on the projections and binarizes. Deterministic given seed.
template <class Model>
Batch acs_fw_projected(const Model& model, const Eigen::MatrixXd& pool, int budget,
                       int projections, std::uint64_t seed,
                       Exec policy = Exec::parallel) {
  const ProjectionMatrix proj = project(model, pool, projections, seed, policy);
  return binarize(fw_construct_projected(proj, budget, policy));
}

}  // namespace acs

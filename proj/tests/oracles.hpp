#pragma once

// Independent reference computations for the test suites: adaptive
// quadrature, brute-force searches and Monte Carlo estimators. Nothing here
// calls the closed forms or quadrature rules under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acs/rng.hpp"

namespace oracle {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb, double whole,
                                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-14, int depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

constexpr double kTwoPi = 6.2831853071795864769252867666;

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
}

// Phi by quadrature of the density from 0 (no erf involved).
inline double normal_cdf(double z) {
  const double zc = std::min(std::abs(z), 40.0);
  const double half = adaptive_simpson([](double t) { return normal_pdf(t); }, 0.0, zc, 1e-16);
  return z >= 0.0 ? 0.5 + half : 0.5 - half;
}

// erfc-based Phi for Monte Carlo estimators, where quadrature per sample
// would dominate the runtime. Phi itself is validated against normal_cdf.
inline double fast_normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// log Phi(-z) for z > 0 through the Mills ratio
//   Phi(-z) = pdf(z) * R(z),  R(z) = int_0^inf exp(-z t - t^2/2) dt,
// valid far beyond the double underflow range of Phi itself.
inline double normal_log_cdf_lower_tail(double z) {
  const double upper = std::min(50.0, 50.0 / z + 8.0);
  const double mills = adaptive_simpson(
      [z](double t) { return std::exp(-z * t - 0.5 * t * t); }, 0.0, upper, 1e-16);
  return -0.5 * z * z - 0.5 * std::log(kTwoPi) + std::log(mills);
}

inline double owens_t(double h, double a) {
  const double sign = a < 0.0 ? -1.0 : 1.0;
  const double aa = std::abs(a);
  const double hh = std::abs(h);
  const double v = adaptive_simpson(
      [hh](double x) { return std::exp(-0.5 * hh * hh * (1.0 + x * x)) / (1.0 + x * x); },
      0.0, aa, 1e-16, 48);
  return sign * v / kTwoPi;
}

// Fixed-order Gauss-Legendre nodes on [-1,1] for the bvn oracle, computed by
// Newton iteration on the Legendre recurrence (independent of the library's
// quadrature rules, which are built in src/).
struct Gl12 {
  double node[12];
  double weight[12];
  Gl12() {
    for (int i = 0; i < 6; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / 12.5);
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < 12; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = 12.0 * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      node[i] = -x;
      node[11 - i] = x;
      weight[i] = weight[11 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
  }
};

// P(X <= h, Y <= k) for standard bivariate normal with correlation rho, as an
// iterated 2-D quadrature in whitened coordinates: with y = rho x + r z,
//   bvn = int_{-inf}^{h} pdf(x) [ int_{-inf}^{(k - rho x)/r} pdf(z) dz ] dx,
// both integrals by composite Gauss-Legendre over the truncated range. The
// inner cumulative is tabulated at fixed panel boundaries, so only the
// partial final panel is re-evaluated per outer node.
inline double bvn_cdf(double h, double k, double rho) {
  static const Gl12 gl;
  constexpr double kLo = -8.5;
  constexpr double kWidth = 0.25;
  constexpr int kPanels = 68;  // covers [-8.5, 8.5]
  const double hx = std::min(h, 8.5);
  if (hx <= kLo || k <= kLo) return 0.0;
  const double r = std::sqrt(std::max(1e-300, (1.0 - rho) * (1.0 + rho)));

  double cum[kPanels + 1];
  cum[0] = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = kLo + (p + 0.5) * kWidth;
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += gl.weight[i] * normal_pdf(mid + 0.5 * kWidth * gl.node[i]);
    cum[p + 1] = cum[p] + 0.5 * kWidth * s;
  }
  auto lower_cdf = [&](double u) {  // int_{-8.5}^{min(u, 8.5)} pdf
    if (u <= kLo) return 0.0;
    if (u >= 8.5) return cum[kPanels];
    const int full = static_cast<int>((u - kLo) / kWidth);
    const double a = kLo + full * kWidth;
    const double mid = 0.5 * (a + u), half = 0.5 * (u - a);
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += gl.weight[i] * normal_pdf(mid + half * gl.node[i]);
    return cum[full] + half * s;
  };

  double total = 0.0;
  const int outer_panels = static_cast<int>(std::ceil((hx - kLo) / kWidth));
  for (int p = 0; p < outer_panels; ++p) {
    const double a = kLo + p * kWidth;
    const double b = std::min(hx, a + kWidth);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double x = mid + half * gl.node[i];
      s += gl.weight[i] * normal_pdf(x) * lower_cdf((k - rho * x) / r);
    }
    total += half * s;
  }
  return total;
}

// Scalar minimizer of a quadratic-ish function on [0,1]: coarse grid to
// bracket, then golden-section refinement.
inline double grid_line_search(const std::function<double(double)>& f, int grid = 2000) {
  int best = 0;
  double best_val = f(0.0);
  for (int i = 1; i <= grid; ++i) {
    const double g = static_cast<double>(i) / grid;
    const double v = f(g);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = std::max(0.0, (best - 1.0) / grid);
  double hi = std::min(1.0, (best + 1.0) / grid);
  const double invphi = 0.6180339887498949;
  double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mc_mean(const std::vector<double>& values) {
  MeanStderr out;
  const std::size_t n = values.size();
  for (double v : values) out.mean += v;
  out.mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

// Draws from N(mean, cov) using our own Cholesky-with-jitter, independent of
// acs::sample_posterior.
inline Eigen::MatrixXd gaussian_draws(const Eigen::VectorXd& mean,
                                      const Eigen::MatrixXd& cov, int count,
                                      std::uint64_t seed) {
  const int d = static_cast<int>(mean.size());
  Eigen::MatrixXd c = cov;
  c.diagonal().array() += 1e-12 * (1.0 + cov.trace());
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(c).matrixL();
  acs::Rng rng(seed);
  Eigen::MatrixXd out(count, d);
  Eigen::VectorXd z(d);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < d; ++j) z[j] = rng.normal();
    out.row(i) = (mean + L * z).transpose();
  }
  return out;
}

// Random symmetric PSD matrix A^T A with controllable rank.
inline Eigen::MatrixXd random_psd(int dim, int rank, acs::Rng& rng, double scale = 1.0) {
  Eigen::MatrixXd a(rank, dim);
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = scale * rng.normal();
  }
  return a.transpose() * a;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, acs::Rng& rng, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.normal();
  }
  return m;
}

}  // namespace oracle

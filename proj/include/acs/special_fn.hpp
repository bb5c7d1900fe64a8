#pragma once

// Scalar special functions used by the probit closed forms: standard normal
// pdf/cdf/log-cdf, Owen's T function and the bivariate normal cdf.
// All functions are pure and thread-safe.

#include <stdexcept>

namespace acs {

// A probability in [0,1]. Construction clamps floating-point slack of up to
// 1e-9 outside the interval and rejects anything worse.
class Probability {
 public:
  Probability(double v);  // NOLINT: implicit by design
  operator double() const { return v_; }
  double value() const { return v_; }

 private:
  double v_;
};

double std_normal_pdf(double z);

// Phi(z) = P(Z <= z) for Z ~ N(0,1). Rejects non-finite input.
Probability std_normal_cdf(double z);

// log Phi(z), accurate in the deep lower tail (asymptotic expansion for
// z below the erfc underflow threshold).
double std_normal_log_cdf(double z);

// Owen's T function, T(h,a) = 1/(2*pi) * int_0^a exp(-h^2(1+x^2)/2)/(1+x^2) dx.
// Satisfies T(-h,a) = T(h,a) and T(h,-a) = -T(h,a). Evaluated by a small-|ah|
// series and composite Gauss-Legendre quadrature after reduction to
// 0 <= a <= 1. Absolute error is well below 1e-12. Rejects non-finite input.
double owens_t(double h, double a);

// Standard bivariate normal cdf P(X <= h, Y <= k) with correlation rho,
// computed from Owen's T. Rejects |rho| > 1 and non-finite h, k.
Probability bvn_cdf(double h, double k, double rho);

}  // namespace acs

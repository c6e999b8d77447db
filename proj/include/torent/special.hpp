#pragma once

#include "torent/random.hpp"

namespace torent {

/// Parameters of a Beta(alpha, beta) distribution, both strictly positive.
class BetaParams {
 public:
  BetaParams(double alpha, double beta);
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

 private:
  double alpha_;
  double beta_;
};

/// Digamma psi(x) for x > 0, with psi(1) = -gamma (Euler-Mascheroni).
/// Absolute error <= 1e-12 for x >= 1.
double digamma(double x);

/// E[ln Y] for Y ~ Beta(alpha, beta): psi(alpha) - psi(alpha + beta).
double beta_ln_moment(const BetaParams& p);

/// E[Y^2] for Y ~ Beta(k, n+1-k):
/// (k/(n+1))^2 + k(n+1-k) / ((n+1)^2 (n+2)). Requires 1 <= k <= n.
double beta_second_moment(int k, int n);

/// One Beta(alpha, beta) variate in (0,1). Small integer parameters use the
/// k-th order statistic of alpha+beta-1 uniforms (exact); everything else
/// goes through the Marsaglia-Tsang gamma ratio.
double beta_sample(const BetaParams& p, RandomStream& rng);

/// Regularized incomplete beta I_x(alpha, beta) for integer alpha, beta,
/// via the binomial-tail identity I_x(a,b) = P(Bin(a+b-1, x) >= a).
double beta_cdf(const BetaParams& p, double x);

}  // namespace torent

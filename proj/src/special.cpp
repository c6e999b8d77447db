#include "torent/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "torent/errors.hpp"

namespace torent {

BetaParams::BetaParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw DomainError("BetaParams: alpha and beta must be > 0");
}

double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: x must be > 0");
  // Lift into the asymptotic regime with psi(x) = psi(x+1) - 1/x, then use
  // the Stirling series with Bernoulli terms through x^{-12}. The x >= 10
  // threshold keeps the truncation below 1e-15.
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  double series = std::log(x) - 0.5 * inv -
                  inv2 * (1.0 / 12.0 -
                          inv2 * (1.0 / 120.0 -
                                  inv2 * (1.0 / 252.0 -
                                          inv2 * (1.0 / 240.0 -
                                                  inv2 * (1.0 / 132.0 -
                                                          inv2 * (691.0 / 32760.0))))));
  return acc + series;
}

double beta_ln_moment(const BetaParams& p) {
  return digamma(p.alpha()) - digamma(p.alpha() + p.beta());
}

double beta_second_moment(int k, int n) {
  if (k < 1 || n < 1 || k > n)
    throw DomainError("beta_second_moment: requires 1 <= k <= n");
  double np1 = static_cast<double>(n) + 1.0;
  double mean = static_cast<double>(k) / np1;
  return mean * mean +
         static_cast<double>(k) * (np1 - static_cast<double>(k)) / (np1 * np1 * (np1 + 1.0));
}

namespace {

bool near_integer(double v, long long& out) {
  double r = std::round(v);
  if (std::fabs(v - r) > 1e-9) return false;
  out = static_cast<long long>(r);
  return true;
}

// Marsaglia-Tsang for shape >= 1; shape < 1 boosted by U^{1/shape}.
double gamma_sample(double shape, RandomStream& rng) {
  if (shape < 1.0) {
    double u = rng.next_double_pos();
    return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z = rng.next_gaussian();
    double t = 1.0 + c * z;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.next_double_pos();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double clamp_open_unit(double y) {
  const double lo = 0x1.0p-100;
  return std::min(1.0 - 1e-16, std::max(lo, y));
}

}  // namespace

double beta_sample(const BetaParams& p, RandomStream& rng) {
  long long a = 0, b = 0;
  if (near_integer(p.alpha(), a) && near_integer(p.beta(), b) && a + b - 1 <= 64) {
    // Beta(a, b) is the a-th smallest of a+b-1 i.i.d. uniforms.
    long long m = a + b - 1;
    std::vector<double> u(static_cast<std::size_t>(m));
    for (auto& v : u) v = rng.next_double_pos();
    auto kth = u.begin() + static_cast<std::ptrdiff_t>(a - 1);
    std::nth_element(u.begin(), kth, u.end());
    return clamp_open_unit(*kth);
  }
  double ga = gamma_sample(p.alpha(), rng);
  double gb = gamma_sample(p.beta(), rng);
  return clamp_open_unit(ga / (ga + gb));
}

double beta_cdf(const BetaParams& p, double x) {
  long long a = 0, b = 0;
  if (!near_integer(p.alpha(), a) || !near_integer(p.beta(), b))
    throw Unsupported("beta_cdf: implemented for integer parameters only");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  long long n = a + b - 1;
  double lx = std::log(x);
  double l1mx = std::log1p(-x);
  double sum = 0.0;
  for (long long j = a; j <= n; ++j) {
    double lc = std::lgamma(static_cast<double>(n) + 1.0) -
                std::lgamma(static_cast<double>(j) + 1.0) -
                std::lgamma(static_cast<double>(n - j) + 1.0);
    sum += std::exp(lc + static_cast<double>(j) * lx + static_cast<double>(n - j) * l1mx);
  }
  return std::min(1.0, sum);
}

}  // namespace torent

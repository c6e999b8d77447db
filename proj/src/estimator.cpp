#include "torent/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "torent/errors.hpp"
#include "torent/knn.hpp"
#include "torent/parallel.hpp"
#include "torent/special.hpp"

namespace torent {

EntropyEstimate kl_entropy(const SampleSet& s, int k, KlOptions opts) {
  std::size_t n = s.size();
  if (k < 1) throw DomainError("kl_entropy: k must be >= 1");
  if (n < static_cast<std::size_t>(k) + 1)
    throw InsufficientPoints("kl_entropy: needs n >= k+1 points");

  int d = s.dim();
  KnnIndex idx = build_index(s);
  double log_vd = log_ball_volume(d);
  double log_n_over_k = std::log(static_cast<double>(n)) - std::log(static_cast<double>(k));

  std::vector<double> terms(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    auto nb = knn_query(idx, s.row(i), k, i);
    double r = nb.back().distance;
    // r == 0 marks a tie; flagged after the parallel section.
    terms[i] = r > 0.0 ? log_n_over_k + log_vd + d * std::log(r)
                       : -std::numeric_limits<double>::infinity();
  });

  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(terms[i]))
      throw DuplicatePoints("kl_entropy: duplicate points give a zero k-NN distance (point " +
                            std::to_string(i) + "); consider --dedup-jitter");

  // Summing in sorted order makes the value exactly independent of the
  // sample ordering (the term multiset is permutation invariant).
  std::vector<double> ordered(terms);
  std::sort(ordered.begin(), ordered.end());
  double sum = 0.0;
  for (double t : ordered) sum += t;

  EntropyEstimate est;
  est.n = n;
  est.k = k;
  est.d = d;
  est.value = std::log(static_cast<double>(k)) - digamma(k) + sum / static_cast<double>(n);
  if (opts.keep_terms) est.per_point_log_terms = std::move(terms);
  return est;
}

double knn_density_estimate(const SampleSet& s, const TorusPoint& x, int k) {
  std::size_t n = s.size();
  if (k < 1) throw DomainError("knn_density_estimate: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw InsufficientPoints("knn_density_estimate: needs n >= k points");
  double r = brute_force_knn(s, x.coords(), k).back().distance;
  if (r == 0.0)
    throw DegenerateQuery("knn_density_estimate: query point coincides with a sample");
  return k / (static_cast<double>(n) * ball_volume(s.dim(), r));
}

double ball_masses(const SampleSet& s, const TorusPoint& extra, int k,
                   const DensitySpec& density) {
  std::size_t n = s.size();
  if (k < 1) throw DomainError("ball_masses: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw InsufficientPoints("ball_masses: needs n >= k points");
  if (density.dim() != s.dim() || extra.dim() != s.dim())
    throw DimensionMismatch("ball_masses: dimensions disagree");
  double r = brute_force_knn(s, extra.coords(), k).back().distance;
  return ball_mass(density, extra, r);
}

}  // namespace torent

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "torent/densities.hpp"
#include "torent/torus.hpp"

namespace torent {

struct EntropyEstimate {
  double value = 0.0;  // nats
  std::size_t n = 0;
  int k = 0;
  int d = 0;
  /// ln((n/k) V_d R_{i,k}^d) per point, retained only on request.
  std::optional<std::vector<double>> per_point_log_terms;
};

struct KlOptions {
  bool keep_terms = false;
  int threads = 1;
};

/// Kozachenko-Leonenko fixed-k entropy estimate
///   h = ln k - psi(k) + (1/n) sum_i ln((n/k) V_d R_{i,k}^d)
/// with R_{i,k} the leave-one-out k-th nearest neighbor distance under the
/// torus metric. Requires n >= k+1; ties at distance zero are an error
/// (DuplicatePoints) because the log term is undefined there. Per-point
/// queries may run on several threads; terms land in a preallocated vector
/// and are summed in index order, so the value is schedule-independent.
EntropyEstimate kl_entropy(const SampleSet& s, int k, KlOptions opts = {});

/// k-NN density estimate k / (n V_d R_k(x)^d) from the distance of x to
/// its k-th nearest sample point (no exclusion).
double knn_density_estimate(const SampleSet& s, const TorusPoint& x, int k);

/// mu(B(extra, R_k(extra))): the density's mass of the ball reaching the
/// k-th nearest sample point. Distributed Beta(k, n+1-k) when the samples
/// and the extra point are i.i.d. from the density.
double ball_masses(const SampleSet& s, const TorusPoint& extra, int k,
                   const DensitySpec& density);

}  // namespace torent

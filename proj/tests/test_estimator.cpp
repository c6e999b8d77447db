#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "torent/densities.hpp"
#include "torent/errors.hpp"
#include "torent/estimator.hpp"
#include "torent/knn.hpp"
#include "torent/random.hpp"
#include "torent/special.hpp"
#include "torent/torus.hpp"

using namespace torent;

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

SampleSet d1_points(std::initializer_list<double> xs) {
  SampleSet s(1);
  for (double x : xs) s.push_back(TorusPoint{x});
  return s;
}

// Oracle: evaluate the estimator definition directly from pairwise
// torus distances, with no index and no shared code path.
double kl_oracle(const SampleSet& s, int k) {
  std::size_t n = s.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> dists;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dists.push_back(torus_distance(s.row(i), s.row(j)));
    std::sort(dists.begin(), dists.end());
    double r = dists[static_cast<std::size_t>(k - 1)];
    sum += std::log(static_cast<double>(n) / k * ball_volume(s.dim(), r));
  }
  return std::log(static_cast<double>(k)) - digamma(k) + sum / static_cast<double>(n);
}

// Test-side composite Simpson.
double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("hand-evaluated estimates") {
  SampleSet s = d1_points({0.0, 0.25, 0.5});
  EntropyEstimate e = kl_entropy(s, 1);
  CHECK(std::fabs(e.value - (kEulerGamma + std::log(1.5))) < 1e-12);
  CHECK(std::fabs(e.value - kl_oracle(s, 1)) < 1e-13);

  SampleSet s2 = d1_points({0.0, 0.5});
  EntropyEstimate e2 = kl_entropy(s2, 1);
  CHECK(std::fabs(e2.value - (kEulerGamma + std::log(2.0))) < 1e-12);
}

TEST_CASE("estimate agrees with the definition oracle on random samples") {
  RandomStream rng(71);
  auto trig = DensitySpec::trig_product({TrigAxis{1.0, 1, 0.0}, TrigAxis{0.5, 2, 1.0}});
  for (int rep = 0; rep < 5; ++rep) {
    SampleSet s = sample(trig, 60, rng);
    for (int k : {1, 3}) CHECK(std::fabs(kl_entropy(s, k).value - kl_oracle(s, k)) < 1e-12);
  }
}

TEST_CASE("duplicate points are a hard error") {
  SampleSet s = d1_points({0.3, 0.3, 0.7});
  CHECK_THROWS_AS(kl_entropy(s, 1), DuplicatePoints);
}

TEST_CASE("too few points") {
  SampleSet s = d1_points({0.3, 0.7});
  CHECK_THROWS_AS(kl_entropy(s, 2), InsufficientPoints);
  CHECK_NOTHROW(kl_entropy(s, 1));
}

TEST_CASE("per-point log terms satisfy the internal identity") {
  RandomStream rng(72);
  SampleSet s = sample(DensitySpec::uniform(2), 80, rng);
  EntropyEstimate e = kl_entropy(s, 3, {.keep_terms = true, .threads = 1});
  REQUIRE(e.per_point_log_terms.has_value());
  REQUIRE(e.per_point_log_terms->size() == 80);
  double mean = 0.0;
  for (double t : *e.per_point_log_terms) mean += t;
  mean /= 80.0;
  CHECK(std::fabs(e.value - (std::log(3.0) - digamma(3.0) + mean)) < 1e-12);
}

TEST_CASE("different k give different estimates, each internally consistent") {
  RandomStream rng(76);
  SampleSet s = sample(DensitySpec::uniform(1), 100, rng);
  std::vector<double> values;
  for (int k : {1, 2, 5}) {
    EntropyEstimate e = kl_entropy(s, k, {.keep_terms = true, .threads = 1});
    double mean = 0.0;
    for (double t : *e.per_point_log_terms) mean += t;
    mean /= static_cast<double>(e.per_point_log_terms->size());
    CHECK(std::fabs(e.value - (std::log(static_cast<double>(k)) - digamma(k) + mean)) < 1e-12);
    values.push_back(e.value);
  }
  CHECK(values[0] != values[1]);
  CHECK(values[1] != values[2]);
}

TEST_CASE("estimate is schedule independent") {
  RandomStream rng(73);
  SampleSet s = sample(DensitySpec::triangle_product(2), 300, rng);
  double v1 = kl_entropy(s, 2, {.keep_terms = false, .threads = 1}).value;
  double v4 = kl_entropy(s, 2, {.keep_terms = false, .threads = 4}).value;
  CHECK(v1 == v4);
}

TEST_CASE("translation and permutation invariance") {
  RandomStream rng(74);
  SampleSet s = sample(DensitySpec::trig_product({TrigAxis{0.8, 1, 0.3}}), 120, rng);
  double base = kl_entropy(s, 1).value;

  for (double shift : {0.137, 0.5, -2.3}) {
    SampleSet shifted(s.dim());
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::vector<double> c(s.row(i).begin(), s.row(i).end());
      for (auto& v : c) v += shift;
      shifted.push_back(wrap_point(c));
    }
    CHECK(std::fabs(kl_entropy(shifted, 1).value - base) < 1e-12);
  }

  std::vector<std::size_t> perm(s.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.next_u64() % i]);
  SampleSet permuted(s.dim());
  for (std::size_t i : perm) permuted.push_back(s.point(i));
  CHECK(kl_entropy(permuted, 1).value == base);  // exact
}

TEST_CASE("knn density estimate hand example") {
  SampleSet s = d1_points({0.0, 0.5});
  CHECK(knn_density_estimate(s, TorusPoint{0.25}, 1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(knn_density_estimate(s, TorusPoint{0.5}, 1), DegenerateQuery);
  CHECK_THROWS_AS(knn_density_estimate(s, TorusPoint{0.25}, 3), InsufficientPoints);
}

TEST_CASE("knn density estimate with k = n is at least 1 on the circle") {
  RandomStream rng(75);
  SampleSet s = sample(DensitySpec::uniform(1), 25, rng);
  double est = knn_density_estimate(s, TorusPoint{0.123}, 25);
  CHECK(est >= 1.0);  // R_n <= 1/2 so k/(n 2 R) >= 1
}

TEST_CASE("knn density estimate coverage matches the Beta ball-mass law") {
  // Oracle (numerically integrated Beta(k, n+1-k) CDF): the k-NN density
  // estimate at an interior point lands in [0.7, 1.3] with probability
  // ~0.6577 at n = 10^4, k = 10 -- not 0.95; the window is ~1 sigma of the
  // multiplicative 1/sqrt(k) noise.
  int n = 10000, k = 10;
  double lognorm = std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k)) -
                   std::lgamma(n + 1.0 - k);
  auto beta_pdf = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return std::exp(lognorm + (k - 1.0) * std::log(u) + (n - k) * std::log1p(-u));
  };
  double lo = k / (1.3 * n), hi = k / (0.7 * n);
  double expected = simpson(beta_pdf, lo, hi, 40000);
  CHECK(expected == doctest::Approx(0.6576665279453651).epsilon(1e-6));

  int reps = 200, inside = 0;
  TorusPoint x{0.37};
  auto uniform = DensitySpec::uniform(1);
  for (int rep = 0; rep < reps; ++rep) {
    auto rs = RandomStream::derive(8675309, static_cast<std::uint64_t>(rep), 0);
    SampleSet s = sample(uniform, static_cast<std::size_t>(n), rs);
    double est = knn_density_estimate(s, x, k);
    if (est >= 0.7 && est <= 1.3) ++inside;
  }
  double phat = static_cast<double>(inside) / reps;
  double se = std::sqrt(expected * (1.0 - expected) / reps);
  CHECK(std::fabs(phat - expected) < 3.0 * se);
}

TEST_CASE("ball mass at the k-NN radius, closed-form cases") {
  // uniform: R_1 = 0.1 from extra = 0.5 to {0.4, 0.6} -> mass 2R = 0.2
  SampleSet s = d1_points({0.4, 0.6});
  auto uniform = DensitySpec::uniform(1);
  CHECK(ball_masses(s, TorusPoint{0.5}, 1, uniform) == doctest::Approx(0.2).epsilon(1e-10));

  // trig a=1: extra = 0, nearest of {0.25, 0.75} at R = 0.25
  // mass = 0.5 + 1/pi
  SampleSet s2 = d1_points({0.25, 0.75});
  auto trig = DensitySpec::trig_product({TrigAxis{1.0, 1, 0.0}});
  CHECK(ball_masses(s2, TorusPoint{0.0}, 1, trig) ==
        doctest::Approx(0.5 + 1.0 / M_PI).epsilon(1e-9));

  CHECK_THROWS_AS(ball_masses(s, TorusPoint{0.5, 0.5}, 1, uniform), DimensionMismatch);
}

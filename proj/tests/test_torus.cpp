#include <doctest.h>

#include <cmath>
#include <vector>

#include "torent/errors.hpp"
#include "torent/random.hpp"
#include "torent/torus.hpp"

using namespace torent;

namespace {

// Oracle: minimize ||m + x - y|| over integer shifts m in {-1,0,1}^d.
double shift_distance(const TorusPoint& x, const TorusPoint& y) {
  int d = x.dim();
  std::vector<int> m(static_cast<std::size_t>(d), -1);
  double best = 1e300;
  for (;;) {
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      double v = m[static_cast<std::size_t>(j)] + x[static_cast<std::size_t>(j)] -
                 y[static_cast<std::size_t>(j)];
      sum += v * v;
    }
    best = std::min(best, std::sqrt(sum));
    int j = 0;
    while (j < d && m[static_cast<std::size_t>(j)] == 1) m[static_cast<std::size_t>(j++)] = -1;
    if (j == d) break;
    ++m[static_cast<std::size_t>(j)];
  }
  return best;
}

TorusPoint random_point(int d, RandomStream& rng) {
  std::vector<double> c(static_cast<std::size_t>(d));
  for (auto& v : c) v = rng.next_double();
  return TorusPoint(std::move(c));
}

}  // namespace

TEST_CASE("torus distance wraps across 0") {
  CHECK(torus_distance(TorusPoint{0.1}, TorusPoint{0.9}) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(torus_distance(TorusPoint{0.4, 0.7}, TorusPoint{0.4, 0.7}) == 0.0);
}

TEST_CASE("torus distance matches the shift-enumeration oracle") {
  TorusPoint x{0.9, 0.1}, y{0.1, 0.9};
  double d = torus_distance(x, y);
  CHECK(d == doctest::Approx(shift_distance(x, y)).epsilon(1e-14));
  CHECK(d == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-14));

  RandomStream rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    int dim = 1 + static_cast<int>(rng.next_u64() % 3);
    TorusPoint a = random_point(dim, rng), b = random_point(dim, rng);
    CHECK(std::fabs(torus_distance(a, b) - shift_distance(a, b)) < 1e-12);
  }
}

TEST_CASE("torus distance dimension mismatch") {
  CHECK_THROWS_AS(torus_distance(TorusPoint{0.1}, TorusPoint{0.1, 0.2}), DimensionMismatch);
}

TEST_CASE("metric axioms on random triples") {
  RandomStream rng(202);
  for (int rep = 0; rep < 200; ++rep) {
    int dim = 1 + static_cast<int>(rng.next_u64() % 3);
    TorusPoint a = random_point(dim, rng), b = random_point(dim, rng), c = random_point(dim, rng);
    CHECK(torus_distance(a, b) == torus_distance(b, a));
    CHECK(torus_distance(a, c) <= torus_distance(a, b) + torus_distance(b, c) + 1e-12);
    CHECK(torus_distance(a, a) == 0.0);
    if (!(a == b)) CHECK(torus_distance(a, b) > 0.0);
    CHECK(torus_distance(a, b) <= std::sqrt(static_cast<double>(dim)) / 2.0 + 1e-12);
  }
}

TEST_CASE("translation invariance") {
  RandomStream rng(303);
  for (int rep = 0; rep < 100; ++rep) {
    int dim = 1 + static_cast<int>(rng.next_u64() % 3);
    TorusPoint a = random_point(dim, rng), b = random_point(dim, rng);
    std::vector<double> sa(a.coords().begin(), a.coords().end());
    std::vector<double> sb(b.coords().begin(), b.coords().end());
    double shift = 20.0 * rng.next_double() - 10.0;
    for (int j = 0; j < dim; ++j) {
      sa[static_cast<std::size_t>(j)] += shift;
      sb[static_cast<std::size_t>(j)] += shift;
    }
    CHECK(std::fabs(torus_distance(wrap_point(sa), wrap_point(sb)) - torus_distance(a, b)) <
          1e-12);
  }
}

TEST_CASE("ball volume closed forms") {
  CHECK(ball_volume(1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));
  CHECK(ball_volume(3, 0.0) == 0.0);
}

TEST_CASE("ball volume grows with r and handles large d") {
  for (int d : {1, 2, 3, 10, 50}) {
    double prev = 0.0;
    for (double r = 0.1; r < 2.0; r += 0.1) {
      double v = ball_volume(d, r);
      CHECK(v > prev);
      prev = v;
    }
  }
  CHECK(std::isfinite(ball_volume(200, 0.9)));
  CHECK(ball_volume(200, 0.9) > 0.0);
}

TEST_CASE("wrap_point folds into [0,1)") {
  TorusPoint p = wrap_point({1.25, -0.5});
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(wrap_point({0.3})[0] == 0.3);

  TorusPoint q = wrap_point({-1e-16});
  CHECK(q[0] >= 0.0);
  CHECK(q[0] < 1.0);
  TorusPoint q2 = wrap_point({-1e-17});
  CHECK(q2[0] < 1.0);

  // Cross-check against an fmod-based reference (equal as torus points).
  RandomStream rng(404);
  for (int rep = 0; rep < 300; ++rep) {
    double c = 20.0 * rng.next_double() - 10.0;
    double ref = std::fmod(c, 1.0);
    if (ref < 0.0) ref += 1.0;
    if (ref >= 1.0) ref = 0.0;
    CHECK(torus_distance(wrap_point({c}), TorusPoint{ref}) < 1e-12);
  }

  CHECK_THROWS_AS(wrap_point({std::nan("")}), InvalidCoordinate);
  CHECK_THROWS_AS(wrap_point({1.0 / 0.0}), InvalidCoordinate);
}

TEST_CASE("wrap_point is idempotent") {
  RandomStream rng(505);
  for (int rep = 0; rep < 100; ++rep) {
    double c = 20.0 * rng.next_double() - 10.0;
    TorusPoint once = wrap_point({c});
    TorusPoint twice = wrap_point(once.coords());
    CHECK(once == twice);
  }
}

TEST_CASE("TorusPoint constructor rejects out-of-range input") {
  CHECK_THROWS_AS(TorusPoint{1.0}, InvalidCoordinate);
  CHECK_THROWS_AS(TorusPoint{-0.1}, InvalidCoordinate);
  CHECK_THROWS_AS((TorusPoint{0.2, 1.5}), InvalidCoordinate);
  CHECK_NOTHROW(TorusPoint{0.0});
}

TEST_CASE("SampleSet enforces shared dimension") {
  SampleSet s(2);
  s.push_back(TorusPoint{0.1, 0.2});
  CHECK_THROWS_AS(s.push_back(TorusPoint{0.1}), DimensionMismatch);
  CHECK(s.size() == 1);
  CHECK(s.point(0) == (TorusPoint{0.1, 0.2}));
}

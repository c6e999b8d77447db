#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "torent/errors.hpp"
#include "torent/knn.hpp"
#include "torent/random.hpp"

using namespace torent;

namespace {

SampleSet d1_points(std::initializer_list<double> xs) {
  SampleSet s(1);
  for (double x : xs) s.push_back(TorusPoint{x});
  return s;
}

SampleSet random_points(int d, std::size_t n, RandomStream& rng, bool snap_to_grid) {
  SampleSet s(d);
  std::vector<double> row(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : row) {
      v = rng.next_double();
      if (snap_to_grid) v = std::floor(v * 8.0) / 8.0;  // forces ties and duplicates
    }
    s.push_back_row(row);
  }
  return s;
}

}  // namespace

TEST_CASE("build_index cell counts") {
  RandomStream rng(11);
  CHECK(build_index(random_points(1, 1, rng, false)).cells_per_axis() == 1);
  CHECK(build_index(random_points(2, 1000, rng, false)).cells_per_axis() == 31);
  CHECK(build_index(random_points(3, 8, rng, false)).cells_per_axis() == 2);
  CHECK_THROWS_AS(build_index(SampleSet(1)), EmptyInput);
}

TEST_CASE("build_index caps total cells at 8n") {
  RandomStream rng(12);
  SampleSet s = random_points(2, 50, rng, false);
  KnnIndex idx = build_index(s, 1000);
  double total = std::pow(static_cast<double>(idx.cells_per_axis()), 2);
  CHECK(total <= 8.0 * 50.0);
}

TEST_CASE("knn worked example with wraparound") {
  SampleSet s = d1_points({0.0, 0.1, 0.45, 0.8});
  KnnIndex idx = build_index(s);
  for (auto result : {knn_query(idx, TorusPoint{0.0}, 2, 0),
                      brute_force_knn(s, TorusPoint{0.0}, 2, 0)}) {
    REQUIRE(result.size() == 2);
    CHECK(result[0].index == 1);
    CHECK(result[0].distance == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(result[1].index == 3);
    CHECK(result[1].distance == doctest::Approx(0.2).epsilon(1e-14));
  }
}

TEST_CASE("self query without exclusion returns distance zero") {
  RandomStream rng(21);
  SampleSet s = random_points(2, 40, rng, false);
  KnnIndex idx = build_index(s);
  auto r = knn_query(idx, s.point(17), 1);
  CHECK(r[0].distance == 0.0);
  CHECK(r[0].index == 17);
}

TEST_CASE("equidistant pair is ordered by computed distance then index") {
  // Both points sit 0.3 away from q in exact arithmetic, but the doubles
  // differ by one ulp (0.9-0.6 rounds up, 1-(0.9-0.2) rounds down), so the
  // (distance, index) order puts index 0 first.
  SampleSet s = d1_points({0.2, 0.6});
  auto r = brute_force_knn(s, TorusPoint{0.9}, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].distance <= r[1].distance);
  CHECK(r[0].distance == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(r[1].distance == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(((r[0].index == 0 && r[1].index == 1) || (r[0].index == 1 && r[1].index == 0)));
  KnnIndex idx = build_index(s);
  CHECK(knn_query(idx, TorusPoint{0.9}, 2) == r);
}

TEST_CASE("ties break toward the smaller index") {
  // exactly representable tie: both distances are 0.25
  SampleSet s = d1_points({0.25, 0.75});
  auto r = brute_force_knn(s, TorusPoint{0.0}, 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].distance == 0.25);
  CHECK(r[1].distance == 0.25);
  CHECK(r[0].index == 0);
  CHECK(r[1].index == 1);
  KnnIndex idx = build_index(s);
  CHECK(knn_query(idx, TorusPoint{0.0}, 2) == r);
}

TEST_CASE("k exceeding the candidate count is an error") {
  SampleSet s = d1_points({0.4});
  KnnIndex idx = build_index(s);
  CHECK_THROWS_AS(knn_query(idx, TorusPoint{0.4}, 1, 0), InsufficientPoints);
  CHECK_THROWS_AS(brute_force_knn(s, TorusPoint{0.4}, 1, 0), InsufficientPoints);
  CHECK_THROWS_AS(knn_query(idx, TorusPoint{0.4}, 2), InsufficientPoints);
}

TEST_CASE("accelerated query equals brute force on random configurations") {
  RandomStream rng(31);
  for (int cfg = 0; cfg < 60; ++cfg) {
    int d = 1 + static_cast<int>(rng.next_u64() % 3);
    std::size_t n = 2 + rng.next_u64() % 499;
    bool snap = cfg % 4 == 0;
    SampleSet s = random_points(d, n, rng, snap);
    KnnIndex idx = build_index(s);
    int k = 1 + static_cast<int>(rng.next_u64() % std::min<std::size_t>(10, n - 1));
    for (int q = 0; q < 5; ++q) {
      std::optional<std::size_t> exclude;
      std::vector<double> qc(static_cast<std::size_t>(d));
      if (q % 2 == 0) {
        std::size_t self = rng.next_u64() % n;
        auto row = s.row(self);
        qc.assign(row.begin(), row.end());
        exclude = self;
      } else {
        for (auto& v : qc) v = rng.next_double();
      }
      auto fast = knn_query(idx, std::span<const double>(qc), k, exclude);
      auto slow = brute_force_knn(s, std::span<const double>(qc), k, exclude);
      REQUIRE(fast.size() == slow.size());
      for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(fast[i].index == slow[i].index);
        CHECK(fast[i].distance == slow[i].distance);
      }
    }
  }
}

TEST_CASE("returned distances are nondecreasing") {
  RandomStream rng(41);
  SampleSet s = random_points(2, 120, rng, false);
  KnnIndex idx = build_index(s);
  for (int q = 0; q < 20; ++q) {
    std::vector<double> qc{rng.next_double(), rng.next_double()};
    auto r = knn_query(idx, std::span<const double>(qc), 9);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].distance <= r[i].distance);
  }
}

TEST_CASE("permutation equivariance: distance multiset is order independent") {
  RandomStream rng(51);
  SampleSet s = random_points(3, 64, rng, false);
  std::vector<std::size_t> perm(s.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.next_u64() % i]);
  SampleSet permuted(3);
  for (std::size_t i = 0; i < perm.size(); ++i) permuted.push_back(s.point(perm[i]));

  KnnIndex a = build_index(s);
  KnnIndex b = build_index(permuted);
  std::vector<double> qc{0.3, 0.8, 0.05};
  auto ra = knn_query(a, std::span<const double>(qc), 7);
  auto rb = knn_query(b, std::span<const double>(qc), 7);
  std::vector<double> da, db;
  for (auto& x : ra) da.push_back(x.distance);
  for (auto& x : rb) db.push_back(x.distance);
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  CHECK(da == db);
  // indices map through the permutation
  for (std::size_t i = 0; i < ra.size(); ++i) CHECK(perm[rb[i].index] == ra[i].index);
}

TEST_CASE("query dimension mismatch") {
  RandomStream rng(61);
  SampleSet s = random_points(2, 10, rng, false);
  KnnIndex idx = build_index(s);
  std::vector<double> q{0.5};
  CHECK_THROWS_AS(knn_query(idx, std::span<const double>(q), 1), DimensionMismatch);
}

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace torent {

/// A point in the unit torus [0,1)^d.
///
/// Coordinates are stored already wrapped; the constructor rejects
/// out-of-range input instead of silently reducing it. Use wrap_point()
/// to fold arbitrary finite reals into [0,1).
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> coords);
  TorusPoint(std::initializer_list<double> coords)
      : TorusPoint(std::vector<double>(coords)) {}

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t j) const noexcept { return coords_[j]; }
  std::span<const double> coords() const noexcept { return coords_; }

  bool operator==(const TorusPoint&) const = default;

 private:
  std::vector<double> coords_;
};

/// Ordered collection of n points sharing one dimension, stored row-major.
class SampleSet {
 public:
  explicit SampleSet(int dim);
  static SampleSet from_points(const std::vector<TorusPoint>& pts);

  void push_back(const TorusPoint& p);
  /// Appends a row that is already known to lie in [0,1)^d (validated).
  void push_back_row(std::span<const double> coords);

  std::size_t size() const noexcept { return data_.size() / static_cast<std::size_t>(dim_); }
  int dim() const noexcept { return dim_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  TorusPoint point(std::size_t i) const;

 private:
  int dim_;
  std::vector<double> data_;
};

/// Distance on the torus: sqrt of the per-axis minimum-image squared offsets,
/// d(x,y) = min over integer shifts m of ||m + x - y||. Always <= sqrt(d)/2.
double torus_distance(std::span<const double> x, std::span<const double> y);
double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// Lebesgue volume of the radius-r Euclidean ball in d dimensions,
/// V_d r^d with V_d = pi^{d/2} / Gamma(1 + d/2). Evaluated through
/// log-gamma so large d neither overflows nor underflows.
double ball_volume(int d, double r);

/// ln V_d, the log unit-ball volume (the estimator works in log space).
double log_ball_volume(int d);

/// Reduces each coordinate modulo 1 into [0,1); idempotent on valid input.
TorusPoint wrap_point(std::span<const double> coords);
TorusPoint wrap_point(std::initializer_list<double> coords);

}  // namespace torent

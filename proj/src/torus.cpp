#include "torent/torus.hpp"

#include <cmath>
#include <string>

#include "torent/errors.hpp"

namespace torent {

namespace {

void validate_coord(double c) {
  if (!std::isfinite(c)) throw InvalidCoordinate("coordinate is not finite");
  if (c < 0.0 || c >= 1.0)
    throw InvalidCoordinate("coordinate " + std::to_string(c) +
                            " outside [0,1); use wrap_point to reduce modulo 1");
}

}  // namespace

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidCoordinate("point must have dimension >= 1");
  for (double c : coords_) validate_coord(c);
}

SampleSet::SampleSet(int dim) : dim_(dim) {
  if (dim < 1) throw DimensionMismatch("SampleSet dimension must be >= 1");
}

SampleSet SampleSet::from_points(const std::vector<TorusPoint>& pts) {
  if (pts.empty()) throw EmptyInput("SampleSet requires at least one point");
  SampleSet s(pts.front().dim());
  for (const auto& p : pts) s.push_back(p);
  return s;
}

void SampleSet::push_back(const TorusPoint& p) {
  if (p.dim() != dim_) throw DimensionMismatch("point dimension does not match SampleSet");
  data_.insert(data_.end(), p.coords().begin(), p.coords().end());
}

void SampleSet::push_back_row(std::span<const double> coords) {
  if (static_cast<int>(coords.size()) != dim_)
    throw DimensionMismatch("row dimension does not match SampleSet");
  for (double c : coords) validate_coord(c);
  data_.insert(data_.end(), coords.begin(), coords.end());
}

TorusPoint SampleSet::point(std::size_t i) const {
  auto r = row(i);
  return TorusPoint(std::vector<double>(r.begin(), r.end()));
}

double torus_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw DimensionMismatch("torus_distance: points have different dimensions");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double delta = std::fabs(x[j] - y[j]);
    double m = delta <= 0.5 ? delta : 1.0 - delta;  // minimum image per axis
    sum += m * m;
  }
  return std::sqrt(sum);
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  return torus_distance(x.coords(), y.coords());
}

double log_ball_volume(int d) {
  if (d < 1) throw DomainError("log_ball_volume: dimension must be >= 1");
  return 0.5 * d * std::log(M_PI) - std::lgamma(1.0 + 0.5 * d);
}

double ball_volume(int d, double r) {
  if (d < 1) throw DomainError("ball_volume: dimension must be >= 1");
  if (!(r >= 0.0)) throw DomainError("ball_volume: radius must be >= 0");
  if (r == 0.0) return 0.0;
  return std::exp(log_ball_volume(d) + d * std::log(r));
}

TorusPoint wrap_point(std::span<const double> coords) {
  std::vector<double> wrapped;
  wrapped.reserve(coords.size());
  for (double c : coords) {
    if (!std::isfinite(c)) throw InvalidCoordinate("wrap_point: coordinate is not finite");
    double w = c - std::floor(c);
    // c - floor(c) can round up to exactly 1.0 for tiny negative c.
    if (w >= 1.0) w = 0.0;
    if (w < 0.0) w = 0.0;
    wrapped.push_back(w);
  }
  return TorusPoint(std::move(wrapped));
}

TorusPoint wrap_point(std::initializer_list<double> coords) {
  return wrap_point(std::span<const double>(coords.begin(), coords.size()));
}

}  // namespace torent

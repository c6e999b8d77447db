#pragma once

#include <functional>
#include <span>
#include <vector>

namespace torent {

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // sample variance, n-1 divisor
};

MeanVar mean_and_variance(std::span<const double> xs);

/// Kolmogorov-Smirnov distance between the empirical distribution of the
/// samples and the given CDF: sup_x |F_n(x) - F(x)|.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Ordinary least squares y = intercept + slope * x; returns {slope, intercept}.
std::pair<double, double> ols_fit(std::span<const double> x, std::span<const double> y);

}  // namespace torent

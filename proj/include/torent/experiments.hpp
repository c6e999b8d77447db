#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torent/densities.hpp"

namespace torent {

/// Declarative Monte Carlo sweep: `trials` estimates per n in n_grid, all
/// seeded from one 64-bit seed. Trial (n, t) draws from the child stream
/// derive(seed, n, t), so enlarging the grid or the trial count never
/// perturbs existing draws.
struct ExperimentConfig {
  DensitySpec density = DensitySpec::uniform(1);
  int k = 1;
  std::vector<int> n_grid;
  int trials = 2;
  std::uint64_t seed = 0;
  std::string results_path;  // optional; CLI --out overrides
};

struct ExperimentRow {
  int n = 0;
  double mean_est = 0.0;
  double true_h = 0.0;
  double bias = 0.0;     // mean_est - true_h
  double std_dev = 0.0;  // sample std over trials
  double rmse = 0.0;     // sqrt(bias^2 + std^2 (T-1)/T)
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // n_grid order
  std::optional<double> fitted_slope;
  std::optional<double> fitted_intercept;  // from ln(rmse) ~ ln(n), when >= 3 rows
};

void validate_config(const ExperimentConfig& cfg);

/// Runs the sweep. Deterministic given (config, seed) for any thread count:
/// trials are the parallelism unit and aggregation order is fixed.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

/// OLS of ln(error) on ln(n); returns {slope, intercept}. Needs >= 3 pairs
/// with distinct n and strictly positive errors.
std::pair<double, double> fit_rate(std::span<const std::pair<double, double>> pairs);

/// reps independent draws of mu(B(X, R_k(X))): each rep samples n points
/// plus an extra X from the density and integrates the ball mass at the
/// k-NN radius. Theory says these are Beta(k, n+1-k).
std::vector<double> draw_ball_masses(const DensitySpec& density, int n, int k, int reps,
                                     std::uint64_t seed);

/// KS distance between the drawn ball masses and the Beta(k, n+1-k) CDF.
double validate_beta_law(const DensitySpec& density, int n, int k, int reps,
                         std::uint64_t seed);

using EstimatorFn = std::function<double(const SampleSet&, int)>;

/// Per-n sample variance of the estimates times n. Var(h_hat) ~ 1/n keeps
/// these of one size; the acceptance bound is max/min <= 3. The estimator
/// can be replaced by a test double. Requires >= 3 n values spanning at
/// least a factor of 8.
std::vector<std::pair<int, double>> validate_variance_scaling(const ExperimentConfig& cfg,
                                                              int threads = 1,
                                                              EstimatorFn estimator = {});

/// results.csv: header `family,d,s,k,n,trials,mean_est,true_h,bias,std,rmse`,
/// one row per n, fitted slope/intercept appended as '#'-prefixed comments.
void write_results_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const ExperimentResult& result);

/// Parses the exp.json schema (field names mirror ExperimentConfig;
/// "outputs": {"results": path} is optional).
ExperimentConfig experiment_config_from_json(const std::string& text);

}  // namespace torent

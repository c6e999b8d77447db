#include "torent/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <ostream>

#include "torent/errors.hpp"
#include "torent/estimator.hpp"
#include "torent/io.hpp"
#include "torent/parallel.hpp"
#include "torent/special.hpp"
#include "torent/stats.hpp"

namespace torent {

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.k < 1) throw ConfigError("experiment config: k must be >= 1");
  if (cfg.n_grid.empty()) throw ConfigError("experiment config: n_grid must be nonempty");
  for (std::size_t i = 0; i + 1 < cfg.n_grid.size(); ++i)
    if (cfg.n_grid[i] >= cfg.n_grid[i + 1])
      throw ConfigError("experiment config: n_grid must be strictly ascending");
  if (cfg.n_grid.front() <= cfg.k)
    throw ConfigError("experiment config: min(n_grid) must exceed k");
  if (cfg.trials < 2) throw ConfigError("experiment config: trials must be >= 2");
}

namespace {

// Estimates laid out trial-major per n; indices fix the aggregation order.
std::vector<double> run_trials(const ExperimentConfig& cfg, int threads,
                               const EstimatorFn& estimator) {
  std::size_t per_n = static_cast<std::size_t>(cfg.trials);
  std::size_t total = cfg.n_grid.size() * per_n;
  std::vector<double> estimates(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    std::size_t ni = idx / per_n;
    std::size_t trial = idx % per_n;
    int n = cfg.n_grid[ni];
    auto rs = RandomStream::derive(cfg.seed, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(trial));
    SampleSet s = sample(cfg.density, static_cast<std::size_t>(n), rs);
    try {
      estimates[idx] = estimator(s, cfg.k);
    } catch (const DuplicatePoints& e) {
      throw DuplicatePoints(std::string(e.what()) + " (n=" + std::to_string(n) +
                            ", trial=" + std::to_string(trial) + ")");
    }
  });
  return estimates;
}

EstimatorFn default_estimator() {
  return [](const SampleSet& s, int k) { return kl_entropy(s, k).value; };
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
  validate_config(cfg);
  double true_h = true_entropy(cfg.density);
  std::vector<double> estimates = run_trials(cfg, threads, default_estimator());

  ExperimentResult result;
  std::size_t per_n = static_cast<std::size_t>(cfg.trials);
  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    std::span<const double> block(estimates.data() + ni * per_n, per_n);
    MeanVar mv = mean_and_variance(block);
    ExperimentRow row;
    row.n = cfg.n_grid[ni];
    row.mean_est = mv.mean;
    row.true_h = true_h;
    row.bias = mv.mean - true_h;
    row.std_dev = std::sqrt(mv.var);
    double pop_var = mv.var * static_cast<double>(per_n - 1) / static_cast<double>(per_n);
    row.rmse = std::sqrt(row.bias * row.bias + pop_var);
    result.rows.push_back(row);
  }

  bool fittable = result.rows.size() >= 3;
  for (const auto& row : result.rows)
    if (!(row.rmse > 0.0)) fittable = false;
  if (fittable) {
    std::vector<std::pair<double, double>> pairs;
    for (const auto& row : result.rows) pairs.emplace_back(row.n, row.rmse);
    auto [slope, intercept] = fit_rate(pairs);
    result.fitted_slope = slope;
    result.fitted_intercept = intercept;
  }
  return result;
}

std::pair<double, double> fit_rate(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw InsufficientData("fit_rate: needs >= 3 (n, error) pairs");
  std::vector<double> lx, ly;
  for (const auto& [n, err] : pairs) {
    if (!(n > 0.0)) throw DomainError("fit_rate: n must be positive");
    if (!(err > 0.0)) throw DomainError("fit_rate: errors must be positive");
    lx.push_back(std::log(n));
    ly.push_back(std::log(err));
  }
  for (std::size_t i = 0; i + 1 < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (pairs[i].first == pairs[j].first)
        throw InsufficientData("fit_rate: n values must be distinct");
  return ols_fit(lx, ly);
}

std::vector<double> draw_ball_masses(const DensitySpec& density, int n, int k, int reps,
                                     std::uint64_t seed) {
  if (n < k || k < 1) throw DomainError("draw_ball_masses: requires 1 <= k <= n");
  if (reps < 1) throw DomainError("draw_ball_masses: reps must be >= 1");
  std::vector<double> masses(static_cast<std::size_t>(reps));
  for (int rep = 0; rep < reps; ++rep) {
    auto rs = RandomStream::derive(seed, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(rep));
    SampleSet s = sample(density, static_cast<std::size_t>(n), rs);
    TorusPoint extra = sample(density, 1, rs).point(0);
    masses[static_cast<std::size_t>(rep)] = ball_masses(s, extra, k, density);
  }
  return masses;
}

double validate_beta_law(const DensitySpec& density, int n, int k, int reps,
                         std::uint64_t seed) {
  if (density.dim() > 2)
    throw Unsupported("validate_beta_law: ball-mass quadrature supports d <= 2");
  std::vector<double> masses = draw_ball_masses(density, n, k, reps, seed);
  BetaParams law(static_cast<double>(k), static_cast<double>(n + 1 - k));
  return ks_statistic(std::move(masses), [&](double x) { return beta_cdf(law, x); });
}

std::vector<std::pair<int, double>> validate_variance_scaling(const ExperimentConfig& cfg,
                                                              int threads,
                                                              EstimatorFn estimator) {
  validate_config(cfg);
  if (cfg.n_grid.size() < 3)
    throw ConfigError("variance scaling: needs >= 3 n values");
  if (cfg.n_grid.back() < 8 * cfg.n_grid.front())
    throw ConfigError("variance scaling: n_grid must span at least a factor of 8");
  if (!estimator) estimator = default_estimator();
  std::vector<double> estimates = run_trials(cfg, threads, estimator);

  std::vector<std::pair<int, double>> out;
  std::size_t per_n = static_cast<std::size_t>(cfg.trials);
  for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
    std::span<const double> block(estimates.data() + ni * per_n, per_n);
    MeanVar mv = mean_and_variance(block);
    out.emplace_back(cfg.n_grid[ni], static_cast<double>(cfg.n_grid[ni]) * mv.var);
  }
  return out;
}

void write_results_csv(std::ostream& out, const ExperimentConfig& cfg,
                       const ExperimentResult& result) {
  out << "family,d,s,k,n,trials,mean_est,true_h,bias,std,rmse\n";
  for (const auto& row : result.rows) {
    out << cfg.density.family_name() << "," << cfg.density.dim() << ","
        << format_double(cfg.density.holder_s()) << "," << cfg.k << "," << row.n << ","
        << cfg.trials << "," << format_double(row.mean_est) << ","
        << format_double(row.true_h) << "," << format_double(row.bias) << ","
        << format_double(row.std_dev) << "," << format_double(row.rmse) << "\n";
  }
  if (result.fitted_slope) out << "# fitted_slope=" << format_double(*result.fitted_slope) << "\n";
  if (result.fitted_intercept)
    out << "# fitted_intercept=" << format_double(*result.fitted_intercept) << "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment JSON parse error: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    if (!j.contains("density")) throw ConfigError("experiment JSON: missing \"density\"");
    cfg.density = density_from_json(j.at("density").dump());
    cfg.k = j.value("k", 1);
    if (!j.contains("n_grid")) throw ConfigError("experiment JSON: missing \"n_grid\"");
    cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    cfg.trials = j.value("trials", 2);
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
    if (j.contains("outputs") && j.at("outputs").contains("results"))
      cfg.results_path = j.at("outputs").at("results").get<std::string>();
    validate_config(cfg);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment JSON: ") + e.what());
  }
}

}  // namespace torent

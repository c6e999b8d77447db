#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "torent/densities.hpp"
#include "torent/errors.hpp"
#include "torent/estimator.hpp"
#include "torent/experiments.hpp"
#include "torent/io.hpp"
#include "torent/random.hpp"
#include "torent/special.hpp"
#include "torent/stats.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw torent::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw torent::IoError("cannot write " + path);
  return out;
}

torent::SampleSet jitter_wrap(const torent::SampleSet& s, double eps, std::uint64_t seed) {
  torent::SampleSet out(s.dim());
  torent::RandomStream rng = torent::RandomStream::derive(seed, s.size(), s.dim());
  std::vector<double> row(static_cast<std::size_t>(s.dim()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto r = s.row(i);
    for (int j = 0; j < s.dim(); ++j)
      row[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j)] + eps * rng.next_double();
    out.push_back(torent::wrap_point(row));
  }
  return out;
}

int run_estimate(const std::string& input, int k, const std::string& terms_out,
                 double dedup_jitter, std::uint64_t jitter_seed, int threads) {
  std::ifstream in(input);
  if (!in) throw torent::IoError("cannot open " + input);
  torent::SampleSet s = torent::read_points_csv(in);
  if (dedup_jitter > 0.0) s = jitter_wrap(s, dedup_jitter, jitter_seed);
  torent::KlOptions opts;
  opts.keep_terms = !terms_out.empty();
  opts.threads = threads;
  torent::EntropyEstimate est = torent::kl_entropy(s, k, opts);
  std::cout << torent::format_double(est.value) << "\n";
  if (!terms_out.empty()) {
    auto out = open_out(terms_out);
    torent::write_terms_csv(out, *est.per_point_log_terms);
  }
  return 0;
}

int run_sample(const std::string& density_path, int n, std::uint64_t seed,
               const std::string& out_path) {
  torent::DensitySpec spec = torent::density_from_json(slurp(density_path));
  torent::RandomStream rng(seed);
  torent::SampleSet s = torent::sample(spec, static_cast<std::size_t>(n), rng);
  auto out = open_out(out_path);
  torent::write_points_csv(out, s);
  return 0;
}

int run_experiment_cmd(const std::string& config_path, std::string out_path, int threads) {
  torent::ExperimentConfig cfg = torent::experiment_config_from_json(slurp(config_path));
  if (out_path.empty()) out_path = cfg.results_path;
  if (out_path.empty())
    throw torent::ConfigError("no output path: pass --out or set outputs.results");
  torent::ExperimentResult result = torent::run_experiment(cfg, threads);
  auto out = open_out(out_path);
  torent::write_results_csv(out, cfg, result);
  for (const auto& row : result.rows)
    std::cout << "n=" << row.n << " rmse=" << torent::format_double(row.rmse) << "\n";
  if (result.fitted_slope)
    std::cout << "fitted_slope=" << torent::format_double(*result.fitted_slope) << "\n";
  return 0;
}

int run_validate(const std::string& suite, const std::string& config_path, int threads) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw torent::ConfigError(std::string("validate config: ") + e.what());
  }
  if (!j.contains("density")) throw torent::ConfigError("validate config: missing density");
  torent::DensitySpec density = torent::density_from_json(j.at("density").dump());
  bool pass = true;

  if (suite == "beta") {
    int n = j.value("n", 200), k = j.value("k", 1), reps = j.value("reps", 500);
    std::uint64_t seed = j.value("seed", 1ull);
    double threshold = j.value("threshold", 0.05);
    double ks = torent::validate_beta_law(density, n, k, reps, seed);
    std::cout << "suite=beta n=" << n << " k=" << k << " reps=" << reps
              << " ks=" << torent::format_double(ks) << " threshold=" << threshold << "\n";
    pass = ks < threshold;
  } else if (suite == "bias") {
    int n = j.value("n", 200), k = j.value("k", 1), reps = j.value("reps", 500);
    std::uint64_t seed = j.value("seed", 1ull);
    auto masses = torent::draw_ball_masses(density, n, k, reps, seed);
    std::vector<double> logs;
    for (double m : masses) logs.push_back(std::log((n + 1.0) * m));
    torent::MeanVar mv = torent::mean_and_variance(logs);
    double expected = torent::digamma(k) - torent::digamma(n + 1.0) + std::log(n + 1.0);
    double se = std::sqrt(mv.var / reps);
    double z = (mv.mean - expected) / se;
    std::cout << "suite=bias n=" << n << " k=" << k << " reps=" << reps
              << " mean=" << torent::format_double(mv.mean)
              << " expected=" << torent::format_double(expected)
              << " z=" << torent::format_double(z) << "\n";
    pass = std::fabs(z) <= 3.0;
  } else if (suite == "variance") {
    torent::ExperimentConfig cfg;
    cfg.density = density;
    cfg.k = j.value("k", 1);
    if (!j.contains("n_grid")) throw torent::ConfigError("variance suite: missing n_grid");
    cfg.n_grid = j.at("n_grid").get<std::vector<int>>();
    cfg.trials = j.value("trials", 300);
    cfg.seed = j.value("seed", 1ull);
    double max_ratio = j.value("max_ratio", 3.0);
    auto rows = torent::validate_variance_scaling(cfg, threads);
    double lo = 1e300, hi = 0.0;
    for (auto [n, nvar] : rows) {
      std::cout << "n=" << n << " n_var=" << torent::format_double(nvar) << "\n";
      lo = std::min(lo, nvar);
      hi = std::max(hi, nvar);
    }
    double ratio = hi / lo;
    std::cout << "suite=variance ratio=" << torent::format_double(ratio)
              << " max_ratio=" << max_ratio << "\n";
    pass = ratio <= max_ratio;
  } else if (suite == "holder") {
    double t_min = j.value("t_min", 0.01), t_max = j.value("t_max", 0.3);
    int t_count = j.value("t_count", 20), x_count = j.value("x_count", 50);
    double tol = j.value("tolerance", 1e-6);
    auto ts = torent::log_spaced_grid(t_min, t_max, t_count);
    auto xs = torent::holder_x_grid(density, x_count);
    double smoothing = torent::check_holder_bound(density, ts, xs);
    double sup = torent::check_density_sup_bound(density, ts, xs);
    std::cout << "suite=holder smoothing_ratio=" << torent::format_double(smoothing)
              << " sup_ratio=" << torent::format_double(sup) << " tolerance=" << tol << "\n";
    pass = smoothing <= 1.0 + tol && sup <= 1.0 + tol;
  } else {
    throw torent::ConfigError("unknown suite: " + suite);
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-k nearest-neighbor differential entropy on the unit torus"};
  app.require_subcommand(1);

  auto* est = app.add_subcommand("estimate", "Estimate entropy from a point CSV");
  std::string est_input, est_terms;
  int est_k = 1, est_threads = 1;
  double est_jitter = 0.0;
  std::uint64_t est_jitter_seed = 0;
  est->add_option("--input", est_input, "points CSV (header x0,...,x{d-1})")->required();
  est->add_option("--k", est_k, "neighbor order")->required();
  est->add_option("--terms-out", est_terms, "write per-point log terms CSV");
  est->add_option("--dedup-jitter", est_jitter,
                  "add uniform jitter in [0,EPS)^d before estimating (for data with ties)");
  est->add_option("--jitter-seed", est_jitter_seed, "seed for --dedup-jitter");
  est->add_option("--threads", est_threads, "worker threads");

  auto* smp = app.add_subcommand("sample", "Draw i.i.d. points from a density spec");
  std::string smp_density, smp_out;
  int smp_n = 1;
  std::uint64_t smp_seed = 0;
  smp->add_option("--density", smp_density, "density spec JSON file")->required();
  smp->add_option("--n", smp_n, "number of points")->required();
  smp->add_option("--seed", smp_seed, "stream seed")->required();
  smp->add_option("--out", smp_out, "output points CSV")->required();

  auto* exp = app.add_subcommand("experiment", "Run a Monte Carlo sweep");
  std::string exp_config, exp_out;
  int exp_threads = 1;
  exp->add_option("--config", exp_config, "experiment config JSON")->required();
  exp->add_option("--out", exp_out, "results CSV (overrides outputs.results)");
  exp->add_option("--threads", exp_threads, "worker threads");

  auto* val = app.add_subcommand("validate", "Distributional and bound validation suites");
  std::string val_suite, val_config;
  int val_threads = 1;
  val->add_option("--suite", val_suite, "beta|bias|variance|holder")->required();
  val->add_option("--config", val_config, "suite config JSON")->required();
  val->add_option("--threads", val_threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed())
      return run_estimate(est_input, est_k, est_terms, est_jitter, est_jitter_seed, est_threads);
    if (smp->parsed()) return run_sample(smp_density, smp_n, smp_seed, smp_out);
    if (exp->parsed()) return run_experiment_cmd(exp_config, exp_out, exp_threads);
    if (val->parsed()) return run_validate(val_suite, val_config, val_threads);
  } catch (const torent::DuplicatePoints& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const torent::InsufficientPoints& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const torent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

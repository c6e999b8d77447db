#pragma once

#include <span>
#include <string>
#include <vector>

#include "torent/random.hpp"
#include "torent/torus.hpp"

namespace torent {

enum class DensityFamily { uniform, trig_product, triangle_product };

/// One factor of a trig product density: 1 + a cos(2 pi m x + phi),
/// a in [0,1], integer frequency m >= 1. a = 1 makes the factor touch zero.
struct TrigAxis {
  double amplitude = 1.0;
  int frequency = 1;
  double phase = 0.0;
};

/// A synthetic product density on [0,1)^d together with its declared
/// Holder smoothness (s, L). Defaults:
///   uniform          s = 2, L = 1 (any L is valid, derivatives vanish)
///   trig_product     s = 2, L = row-sum bound on the Hessian from the
///                    factor bounds |g_j| <= 1+a_j, |g_j'| <= a_j w_j,
///                    |g_j''| <= a_j w_j^2 with w_j = 2 pi m_j
///   triangle_product s = 1, L = 4 * 2^{d-1} * sqrt(d)
/// All instances are 1-periodic per axis, nonnegative, and integrate to 1.
class DensitySpec {
 public:
  static DensitySpec uniform(int d);
  static DensitySpec trig_product(std::vector<TrigAxis> axes);
  static DensitySpec triangle_product(int d);

  /// Same density with an explicit declared (s, L); s in (0,2], L > 0.
  DensitySpec with_smoothness(double s, double L) const;

  DensityFamily family() const noexcept { return family_; }
  int dim() const noexcept { return dim_; }
  double holder_s() const noexcept { return s_; }
  double holder_l() const noexcept { return l_; }
  const std::vector<TrigAxis>& trig_axes() const noexcept { return trig_; }
  std::string family_name() const;

 private:
  DensitySpec(DensityFamily f, int d) : family_(f), dim_(d) {}

  DensityFamily family_;
  int dim_;
  std::vector<TrigAxis> trig_;
  double s_ = 2.0;
  double l_ = 1.0;
};

/// Pointwise closed-form evaluation, f(x) >= 0.
double eval_density(const DensitySpec& spec, const TorusPoint& x);
double eval_density(const DensitySpec& spec, std::span<const double> x);

/// Exact i.i.d. samples: inverse CDF per axis for uniform/triangle,
/// rejection with envelope 1 + a_j for trig factors.
SampleSet sample(const DensitySpec& spec, std::size_t n, RandomStream& rng);

/// Differential entropy -int f ln f in nats. Product densities decompose
/// into per-axis terms: closed form where available, adaptive quadrature
/// (abs error 1e-9, 0 ln 0 = 0) otherwise.
double true_entropy(const DensitySpec& spec);

/// Probability mass of the torus ball B(x, r), clamped to [0,1].
/// d = 1 integrates the arc; d = 2 uses a radial-angular product rule over
/// the disc (64x64 nodes, panel count doubled until two levels agree) for
/// r <= 1/2 and a complement-corner integral for larger r. d >= 3 is
/// Unsupported.
double ball_mass(const DensitySpec& spec, const TorusPoint& x, double r);

/// Smoothed density f_t(x) = mu(B(x,t)) / (V_d t^d), t > 0, d <= 2.
double smoothed_density(const DensitySpec& spec, const TorusPoint& x, double t);

/// Max over the (x, t) grid of |f_t(x) - f(x)| / (d L t^s / (s+d)).
/// A density genuinely inside its declared Holder ball stays <= 1.
double check_holder_bound(const DensitySpec& spec, std::span<const double> t_grid,
                          const std::vector<TorusPoint>& x_grid);

/// Max over the grid of f(x) / (C max{f_t(x), (f_t(x) V_d t^d)^{s/(s+d)}})
/// with C = sup_bound_constant(spec); conforming densities stay <= 1.
double check_density_sup_bound(const DensitySpec& spec, std::span<const double> t_grid,
                               const std::vector<TorusPoint>& x_grid);

/// C = max{2, (V_d ((s+d)/(dL))^{d/s} (2^{-d/s} - 2^{-(s+d)/s}))^{-s/(s+d)}}.
double sup_bound_constant(const DensitySpec& spec);

/// Deterministic evaluation grid for the bound checks: the family's hard
/// points (kinks, zeros) plus a golden-ratio lattice filling up to count.
std::vector<TorusPoint> holder_x_grid(const DensitySpec& spec, int count);

/// count values geometrically spaced over [lo, hi].
std::vector<double> log_spaced_grid(double lo, double hi, int count);

/// The density instances this project ships and sweeps in validation.
std::vector<DensitySpec> shipped_density_instances();

/// JSON round trip: {"family": ..., "d": ..., "params": {...}, "s": ..., "L": ...}.
std::string density_to_json(const DensitySpec& spec);
DensitySpec density_from_json(const std::string& text);

}  // namespace torent

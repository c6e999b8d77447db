#include "torent/densities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <json.hpp>

#include "torent/errors.hpp"
#include "torent/quadrature.hpp"

namespace torent {

namespace {

inline double wrap01(double y) {
  double w = y - std::floor(y);
  return w >= 1.0 ? 0.0 : w;
}

// One factor evaluated at y in [0,1).
inline double axis_eval(const DensitySpec& spec, int axis, double y) {
  switch (spec.family()) {
    case DensityFamily::uniform:
      return 1.0;
    case DensityFamily::trig_product: {
      const TrigAxis& t = spec.trig_axes()[static_cast<std::size_t>(axis)];
      return 1.0 + t.amplitude * std::cos(2.0 * M_PI * t.frequency * y + t.phase);
    }
    case DensityFamily::triangle_product:
      return y < 0.5 ? 4.0 * y : 4.0 * (1.0 - y);
  }
  return 0.0;
}

inline double axis_eval_periodic(const DensitySpec& spec, int axis, double y) {
  return axis_eval(spec, axis, wrap01(y));
}

// Antiderivative of the factor from 0, i.e. the per-axis CDF on [0,1].
double axis_cdf(const DensitySpec& spec, int axis, double y) {
  switch (spec.family()) {
    case DensityFamily::uniform:
      return y;
    case DensityFamily::trig_product: {
      const TrigAxis& t = spec.trig_axes()[static_cast<std::size_t>(axis)];
      double w = 2.0 * M_PI * t.frequency;
      return y + t.amplitude * (std::sin(w * y + t.phase) - std::sin(t.phase)) / w;
    }
    case DensityFamily::triangle_product:
      return y < 0.5 ? 2.0 * y * y : 1.0 - 2.0 * (1.0 - y) * (1.0 - y);
  }
  return 0.0;
}

// CDF of the periodic extension; increases by 1 per period.
inline double axis_cdf_periodic(const DensitySpec& spec, int axis, double y) {
  double fl = std::floor(y);
  return fl + axis_cdf(spec, axis, wrap01(y));
}

// Kinks of the factor within [0,1) (subdivision hints for quadrature).
std::vector<double> axis_kinks(const DensitySpec& spec, int axis) {
  (void)axis;
  if (spec.family() == DensityFamily::triangle_product) return {0.0, 0.5};
  return {};
}

// Zeros of the factor within [0,1), where -g ln g needs refinement.
std::vector<double> axis_zeros(const DensitySpec& spec, int axis) {
  std::vector<double> out;
  switch (spec.family()) {
    case DensityFamily::uniform:
      break;
    case DensityFamily::trig_product: {
      const TrigAxis& t = spec.trig_axes()[static_cast<std::size_t>(axis)];
      if (t.amplitude >= 1.0 - 1e-12) {
        for (int j = 0; j < t.frequency; ++j)
          out.push_back(wrap01((M_PI - t.phase + 2.0 * M_PI * j) / (2.0 * M_PI * t.frequency)));
      }
      break;
    }
    case DensityFamily::triangle_product:
      out.push_back(0.0);
      break;
  }
  return out;
}

// Integer-shifted copies of the per-axis breakpoints that land in [lo, hi].
std::vector<double> shifted_breakpoints(std::span<const double> base, double lo, double hi) {
  std::vector<double> out;
  long long m0 = static_cast<long long>(std::floor(lo)) - 1;
  long long m1 = static_cast<long long>(std::ceil(hi)) + 1;
  for (double b : base)
    for (long long m = m0; m <= m1; ++m) {
      double v = b + static_cast<double>(m);
      if (v > lo && v < hi) out.push_back(v);
    }
  return out;
}

double trig_default_l(const std::vector<TrigAxis>& axes) {
  // Row-sum bound on the Hessian of the product: row i collects the
  // diagonal second-derivative bound plus the mixed first-derivative terms,
  // each multiplied by the sup of the remaining factors.
  int d = static_cast<int>(axes.size());
  auto sup = [&](int j) { return 1.0 + axes[static_cast<std::size_t>(j)].amplitude; };
  auto d1 = [&](int j) {
    const TrigAxis& t = axes[static_cast<std::size_t>(j)];
    return t.amplitude * 2.0 * M_PI * t.frequency;
  };
  auto d2 = [&](int j) {
    const TrigAxis& t = axes[static_cast<std::size_t>(j)];
    double w = 2.0 * M_PI * t.frequency;
    return t.amplitude * w * w;
  };
  double best = 0.0;
  for (int i = 0; i < d; ++i) {
    double others = 1.0;
    for (int l = 0; l < d; ++l)
      if (l != i) others *= sup(l);
    double row = d2(i) * others;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      double rest = 1.0;
      for (int l = 0; l < d; ++l)
        if (l != i && l != j) rest *= sup(l);
      row += d1(i) * d1(j) * rest;
    }
    best = std::max(best, row);
  }
  return best;
}

void require_dim(const DensitySpec& spec, int dim) {
  if (spec.dim() != dim)
    throw DimensionMismatch("density and point dimensions differ");
}

// ---- d = 2 disc quadrature (radial-angular product rule) ----

inline constexpr std::array<double, 4> kGl8X = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 4> kGl8W = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct PanelNodes {
  std::vector<double> x;
  std::vector<double> w;
};

PanelNodes composite_gl8(double a, double b, int panels) {
  PanelNodes out;
  out.x.reserve(static_cast<std::size_t>(panels) * 8);
  out.w.reserve(static_cast<std::size_t>(panels) * 8);
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double c = a + (p + 0.5) * h;
    for (int i = 0; i < 4; ++i) {
      double dx = 0.5 * h * kGl8X[static_cast<std::size_t>(i)];
      double wi = 0.5 * h * kGl8W[static_cast<std::size_t>(i)];
      out.x.push_back(c - dx);
      out.w.push_back(wi);
      out.x.push_back(c + dx);
      out.w.push_back(wi);
    }
  }
  return out;
}

double disc_mass(const DensitySpec& spec, std::span<const double> x, double r) {
  double prev = 0.0;
  bool have_prev = false;
  for (int level = 0; level <= 5; ++level) {
    int panels = 8 << level;
    PanelNodes rad = composite_gl8(0.0, r, panels);
    PanelNodes ang = composite_gl8(0.0, 2.0 * M_PI, panels);
    std::vector<double> ct(ang.x.size()), st(ang.x.size());
    for (std::size_t j = 0; j < ang.x.size(); ++j) {
      ct[j] = std::cos(ang.x[j]);
      st[j] = std::sin(ang.x[j]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
      double rho = rad.x[i];
      double inner = 0.0;
      for (std::size_t j = 0; j < ang.x.size(); ++j)
        inner += ang.w[j] * axis_eval_periodic(spec, 0, x[0] + rho * ct[j]) *
                 axis_eval_periodic(spec, 1, x[1] + rho * st[j]);
      total += rad.w[i] * rho * inner;
    }
    if (have_prev && std::fabs(total - prev) <= std::max(1e-10, 1e-6 * std::fabs(total)))
      return total;
    prev = total;
    have_prev = true;
  }
  throw QuadratureError("disc quadrature did not converge");
}

// For 1/2 < r < sqrt(2)/2 the wrapped disc overlaps itself, so integrate the
// complement instead: four corner regions of the minimum-image square with
// ||v|| > r. The inner axis integrates in closed form through the factor CDF.
double corner_complement_mass(const DensitySpec& spec, std::span<const double> x, double r) {
  double a = std::sqrt(std::max(0.0, r * r - 0.25));
  double total = 0.0;
  auto kinks0 = axis_kinks(spec, 0);
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      auto outer = [&](double v1) {
        double w = std::sqrt(std::max(0.0, r * r - v1 * v1));
        double hi = axis_cdf_periodic(spec, 1, x[1] + s2 * 0.5);
        double lo = axis_cdf_periodic(spec, 1, x[1] + s2 * w);
        double seg = s2 > 0 ? hi - lo : lo - hi;
        return axis_eval_periodic(spec, 0, x[0] + s1 * v1) * seg;
      };
      // map axis-0 kink positions into outer-variable coordinates
      std::vector<double> cuts;
      for (double b : kinks0)
        for (long long m = -2; m <= 2; ++m) {
          double v1 = s1 * (b + static_cast<double>(m) - x[0]);
          if (v1 > a && v1 < 0.5) cuts.push_back(v1);
        }
      total += integrate(outer, a, 0.5, cuts, QuadratureOptions{1e-11, 48});
    }
  }
  return 1.0 - total;
}

}  // namespace

DensitySpec DensitySpec::uniform(int d) {
  if (d < 1) throw DomainError("uniform density: dimension must be >= 1");
  DensitySpec spec(DensityFamily::uniform, d);
  spec.s_ = 2.0;
  spec.l_ = 1.0;
  return spec;
}

DensitySpec DensitySpec::trig_product(std::vector<TrigAxis> axes) {
  if (axes.empty()) throw DomainError("trig density: needs at least one axis");
  for (const TrigAxis& t : axes) {
    if (!(t.amplitude >= 0.0 && t.amplitude <= 1.0))
      throw DomainError("trig density: amplitude must lie in [0,1]");
    if (t.frequency < 1) throw DomainError("trig density: frequency must be >= 1");
    if (!std::isfinite(t.phase)) throw DomainError("trig density: phase must be finite");
  }
  DensitySpec spec(DensityFamily::trig_product, static_cast<int>(axes.size()));
  spec.s_ = 2.0;
  spec.l_ = trig_default_l(axes);
  spec.trig_ = std::move(axes);
  return spec;
}

DensitySpec DensitySpec::triangle_product(int d) {
  if (d < 1) throw DomainError("triangle density: dimension must be >= 1");
  DensitySpec spec(DensityFamily::triangle_product, d);
  spec.s_ = 1.0;
  spec.l_ = 4.0 * std::pow(2.0, d - 1) * std::sqrt(static_cast<double>(d));
  return spec;
}

DensitySpec DensitySpec::with_smoothness(double s, double L) const {
  if (!(s > 0.0 && s <= 2.0)) throw DomainError("smoothness s must lie in (0,2]");
  if (!(L > 0.0)) throw DomainError("smoothness constant L must be > 0");
  DensitySpec spec = *this;
  spec.s_ = s;
  spec.l_ = L;
  return spec;
}

std::string DensitySpec::family_name() const {
  switch (family_) {
    case DensityFamily::uniform: return "uniform";
    case DensityFamily::trig_product: return "trig_product";
    case DensityFamily::triangle_product: return "triangle_product";
  }
  return "?";
}

double eval_density(const DensitySpec& spec, std::span<const double> x) {
  require_dim(spec, static_cast<int>(x.size()));
  double f = 1.0;
  for (int j = 0; j < spec.dim(); ++j) f *= axis_eval(spec, j, x[static_cast<std::size_t>(j)]);
  return f;
}

double eval_density(const DensitySpec& spec, const TorusPoint& x) {
  return eval_density(spec, x.coords());
}

SampleSet sample(const DensitySpec& spec, std::size_t n, RandomStream& rng) {
  if (n < 1) throw DomainError("sample: n must be >= 1");
  SampleSet out(spec.dim());
  std::vector<double> row(static_cast<std::size_t>(spec.dim()));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < spec.dim(); ++j) {
      double v = 0.0;
      switch (spec.family()) {
        case DensityFamily::uniform:
          v = rng.next_double();
          break;
        case DensityFamily::triangle_product: {
          double p = rng.next_double();
          v = p < 0.5 ? std::sqrt(0.5 * p) : 1.0 - std::sqrt(0.5 * (1.0 - p));
          break;
        }
        case DensityFamily::trig_product: {
          const TrigAxis& t = spec.trig_axes()[static_cast<std::size_t>(j)];
          for (;;) {
            double y = rng.next_double();
            double u = rng.next_double();
            if (u * (1.0 + t.amplitude) < axis_eval(spec, j, y)) {
              v = y;
              break;
            }
          }
          break;
        }
      }
      row[static_cast<std::size_t>(j)] = v;
    }
    out.push_back_row(row);
  }
  return out;
}

double true_entropy(const DensitySpec& spec) {
  double h = 0.0;
  for (int j = 0; j < spec.dim(); ++j) {
    switch (spec.family()) {
      case DensityFamily::uniform:
        break;
      case DensityFamily::triangle_product:
        h += 0.5 - std::log(2.0);
        break;
      case DensityFamily::trig_product: {
        auto integrand = [&](double y) {
          double g = axis_eval(spec, j, y);
          return g > 0.0 ? -g * std::log(g) : 0.0;
        };
        auto zeros = axis_zeros(spec, j);
        h += integrate(integrand, 0.0, 1.0, zeros, QuadratureOptions{1e-10, 48});
        break;
      }
    }
  }
  return h;
}

double ball_mass(const DensitySpec& spec, const TorusPoint& x, double r) {
  require_dim(spec, x.dim());
  if (!(r >= 0.0)) throw DomainError("ball_mass: radius must be >= 0");
  if (r == 0.0) return 0.0;
  int d = spec.dim();
  if (r * r >= 0.25 * d) return 1.0;  // ball covers the whole torus
  double mass = 0.0;
  if (d == 1) {
    double c = x[0];
    if (r >= 0.5) return 1.0;
    auto f = [&](double y) { return axis_eval_periodic(spec, 0, y); };
    auto base = axis_kinks(spec, 0);
    auto cuts = shifted_breakpoints(base, c - r, c + r);
    mass = integrate(f, c - r, c + r, cuts, QuadratureOptions{1e-12, 48});
  } else if (d == 2) {
    mass = r <= 0.5 ? disc_mass(spec, x.coords(), r)
                    : corner_complement_mass(spec, x.coords(), r);
  } else {
    throw Unsupported("ball_mass: quadrature implemented for d <= 2 only");
  }
  return std::clamp(mass, 0.0, 1.0);
}

double smoothed_density(const DensitySpec& spec, const TorusPoint& x, double t) {
  if (!(t > 0.0)) throw DomainError("smoothed_density: t must be > 0");
  if (spec.dim() > 2)
    throw Unsupported("smoothed_density: quadrature implemented for d <= 2 only");
  return ball_mass(spec, x, t) / ball_volume(spec.dim(), t);
}

double sup_bound_constant(const DensitySpec& spec) {
  double s = spec.holder_s();
  double L = spec.holder_l();
  double d = static_cast<double>(spec.dim());
  double vd = ball_volume(spec.dim(), 1.0);
  double inner = vd * std::pow((s + d) / (d * L), d / s) *
                 (std::pow(2.0, -d / s) - std::pow(2.0, -(s + d) / s));
  return std::max(2.0, std::pow(inner, -s / (s + d)));
}

double check_holder_bound(const DensitySpec& spec, std::span<const double> t_grid,
                          const std::vector<TorusPoint>& x_grid) {
  if (t_grid.empty() || x_grid.empty())
    throw DomainError("check_holder_bound: grids must be nonempty");
  double s = spec.holder_s();
  double L = spec.holder_l();
  double d = static_cast<double>(spec.dim());
  double worst = 0.0;
  for (const TorusPoint& x : x_grid) {
    double f = eval_density(spec, x);
    for (double t : t_grid) {
      double envelope = d * L * std::pow(t, s) / (s + d);
      double ft = smoothed_density(spec, x, t);
      worst = std::max(worst, std::fabs(ft - f) / envelope);
    }
  }
  return worst;
}

double check_density_sup_bound(const DensitySpec& spec, std::span<const double> t_grid,
                               const std::vector<TorusPoint>& x_grid) {
  if (t_grid.empty() || x_grid.empty())
    throw DomainError("check_density_sup_bound: grids must be nonempty");
  double s = spec.holder_s();
  double d = static_cast<double>(spec.dim());
  double c = sup_bound_constant(spec);
  double worst = 0.0;
  for (const TorusPoint& x : x_grid) {
    double f = eval_density(spec, x);
    if (f == 0.0) continue;
    for (double t : t_grid) {
      double ft = smoothed_density(spec, x, t);
      double vtd = ball_volume(spec.dim(), t);
      double denom = c * std::max(ft, std::pow(ft * vtd, s / (s + d)));
      worst = std::max(worst, f / denom);
    }
  }
  return worst;
}

std::vector<TorusPoint> holder_x_grid(const DensitySpec& spec, int count) {
  if (count < 1) throw DomainError("holder_x_grid: count must be >= 1");
  int d = spec.dim();
  std::vector<TorusPoint> out;

  std::vector<double> hard;
  switch (spec.family()) {
    case DensityFamily::uniform:
      break;
    case DensityFamily::triangle_product:
      hard = {0.0, 0.5};
      break;
    case DensityFamily::trig_product: {
      const TrigAxis& t = spec.trig_axes().front();
      double w = 2.0 * M_PI * t.frequency;
      hard.push_back(wrap01(-t.phase / w));          // crest
      hard.push_back(wrap01((M_PI - t.phase) / w));  // trough (zero when a = 1)
      break;
    }
  }
  for (double h : hard) {
    if (static_cast<int>(out.size()) >= count) break;
    out.emplace_back(std::vector<double>(static_cast<std::size_t>(d), h));
  }

  // Kronecker lattice on the remaining budget.
  const double phi_inv = 0.6180339887498949;
  int i = 0;
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> c(static_cast<std::size_t>(d));
    double alpha = phi_inv;
    for (int j = 0; j < d; ++j) {
      c[static_cast<std::size_t>(j)] = wrap01((i + 0.5) * alpha);
      alpha *= phi_inv;
    }
    out.emplace_back(std::move(c));
    ++i;
  }
  return out;
}

std::vector<double> log_spaced_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2)
    throw DomainError("log_spaced_grid: requires 0 < lo < hi and count >= 2");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    out.push_back(std::exp(llo + (lhi - llo) * i / (count - 1)));
  return out;
}

std::vector<DensitySpec> shipped_density_instances() {
  std::vector<DensitySpec> out;
  out.push_back(DensitySpec::uniform(1));
  out.push_back(DensitySpec::uniform(2));
  out.push_back(DensitySpec::trig_product({TrigAxis{0.5, 1, 0.0}}));
  out.push_back(DensitySpec::trig_product({TrigAxis{1.0, 1, 0.0}}));
  out.push_back(DensitySpec::triangle_product(1));
  out.push_back(DensitySpec::triangle_product(2));
  return out;
}

std::string density_to_json(const DensitySpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = spec.family_name();
  j["d"] = spec.dim();
  j["params"] = nlohmann::ordered_json::object();
  if (spec.family() == DensityFamily::trig_product) {
    std::vector<double> a, phi;
    std::vector<int> m;
    for (const TrigAxis& t : spec.trig_axes()) {
      a.push_back(t.amplitude);
      m.push_back(t.frequency);
      phi.push_back(t.phase);
    }
    j["params"]["a"] = a;
    j["params"]["m"] = m;
    j["params"]["phi"] = phi;
  }
  j["s"] = spec.holder_s();
  j["L"] = spec.holder_l();
  return j.dump();
}

static DensitySpec density_from_parsed(const nlohmann::json& j) {
  if (!j.contains("family") || !j.contains("d"))
    throw ConfigError("density JSON: requires \"family\" and \"d\"");
  std::string family = j.at("family").get<std::string>();
  int d = j.at("d").get<int>();
  DensitySpec spec = DensitySpec::uniform(1);
  if (family == "uniform") {
    spec = DensitySpec::uniform(d);
  } else if (family == "triangle_product") {
    spec = DensitySpec::triangle_product(d);
  } else if (family == "trig_product") {
    std::vector<TrigAxis> axes(static_cast<std::size_t>(d));
    if (j.contains("params")) {
      const auto& p = j.at("params");
      auto fill = [&](const char* key, auto setter) {
        if (!p.contains(key)) return;
        const auto& arr = p.at(key);
        if (!arr.is_array() || static_cast<int>(arr.size()) != d)
          throw ConfigError(std::string("density JSON: params.") + key +
                            " must be an array of length d");
        for (int i = 0; i < d; ++i) setter(axes[static_cast<std::size_t>(i)], arr.at(i));
      };
      fill("a", [](TrigAxis& t, const nlohmann::json& v) { t.amplitude = v.get<double>(); });
      fill("m", [](TrigAxis& t, const nlohmann::json& v) { t.frequency = v.get<int>(); });
      fill("phi", [](TrigAxis& t, const nlohmann::json& v) { t.phase = v.get<double>(); });
    }
    spec = DensitySpec::trig_product(std::move(axes));
  } else {
    throw ConfigError("density JSON: unknown family \"" + family + "\"");
  }
  if (j.contains("s") || j.contains("L")) {
    double s = j.contains("s") ? j.at("s").get<double>() : spec.holder_s();
    double L = j.contains("L") ? j.at("L").get<double>() : spec.holder_l();
    spec = spec.with_smoothness(s, L);
  }
  return spec;
}

DensitySpec density_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("density JSON parse error: ") + e.what());
  }
  try {
    return density_from_parsed(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("density JSON: ") + e.what());
  }
}

}  // namespace torent

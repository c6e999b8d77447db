#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "torent/errors.hpp"

namespace torent {

struct QuadratureOptions {
  double abs_tol = 1e-11;
  int max_depth = 48;
};

namespace quad_detail {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, double& kronrod, double& err) {
  double h = 0.5 * (b - a);
  double c = 0.5 * (a + b);
  double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double x = h * kXgk[static_cast<std::size_t>(i)];
    double fsum = f(c - x) + f(c + x);
    resk += kWgk[static_cast<std::size_t>(i)] * fsum;
    if (i % 2 == 1) resg += kWg[static_cast<std::size_t>(i / 2)] * fsum;
  }
  kronrod = resk * h;
  err = std::fabs((resk - resg) * h);
}

template <class F>
double adaptive(F&& f, double a, double b, double tol, int depth, int max_depth) {
  double val, err;
  gk15(f, a, b, val, err);
  if (err <= tol || b - a < 1e-300) return val;
  if (depth >= max_depth)
    throw QuadratureError("adaptive quadrature did not converge");
  double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         adaptive(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace quad_detail

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b] to the
/// requested absolute tolerance. Throws QuadratureError on nonconvergence.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
  if (!(b >= a)) throw DomainError("integrate: requires b >= a");
  if (a == b) return 0.0;
  return quad_detail::adaptive(f, a, b, opts.abs_tol, 0, opts.max_depth);
}

/// Same, but pre-splits [a, b] at the given interior breakpoints (kinks,
/// density zeros) so the adaptive refinement starts from smooth pieces.
template <class F>
double integrate(F&& f, double a, double b, std::span<const double> breakpoints,
                 QuadratureOptions opts = {}) {
  std::vector<double> cuts{a};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double piece_tol = opts.abs_tol / static_cast<double>(cuts.size());
  QuadratureOptions piece_opts{piece_tol, opts.max_depth};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate(f, cuts[i], cuts[i + 1], piece_opts);
  return total;
}

}  // namespace torent

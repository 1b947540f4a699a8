// Copyright 2026 The qgyro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small numerical kernels shared across modules: ordinary least squares for a
// line, globally adaptive Gauss-Kronrod (7/15) quadrature, golden-section
// minimization and bisection.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "qgyro/errors.hpp"

namespace qgyro {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  std::size_t n_points = 0;
};

/// y ~ slope * x + intercept by ordinary least squares. Throws DegenerateError
/// when fewer than 3 points are given or the x variance is below
/// `min_variance`.
inline LinearFit least_squares_line(std::span<const double> x, std::span<const double> y,
                                    double min_variance = 1e-14) {
  if (x.size() != y.size()) throw PreconditionError("least_squares_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw DegenerateError("least_squares_line: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx / static_cast<double>(n) >= min_variance)) {
    throw DegenerateError("least_squares_line: abscissa variance too small (fixed-point orbit?)");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = n;
  for (std::size_t i = 0; i < n; ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - (fit.slope * x[i] + fit.intercept)));
  }
  return fit;
}

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

struct GkInterval {
  double a, b, value, error;
  bool operator<(const GkInterval& o) const { return error < o.error; }
};

template <class F>
GkInterval gk15(F& f, double a, double b, std::size_t& evals) {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[static_cast<std::size_t>(j)];
    const double s = f(c - dx) + f(c + dx);
    kronrod += wgk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) gauss += wg[static_cast<std::size_t>(j / 2)] * s;
  }
  evals += 15;
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of f over the union of the
/// intervals delimited by `breakpoints` (ascending). Refines the interval with
/// the largest error estimate until error <= max(abs_tol, rel_tol |I|).
template <class F>
QuadratureResult integrate_gk(F&& f, std::span<const double> breakpoints, double abs_tol, double rel_tol = 0.0,
                              std::size_t max_intervals = 20000) {
  if (breakpoints.size() < 2) throw PreconditionError("integrate_gk needs at least two breakpoints");
  std::priority_queue<detail::GkInterval> heap;
  QuadratureResult res;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] < breakpoints[i]) throw PreconditionError("integrate_gk breakpoints must ascend");
    if (breakpoints[i + 1] == breakpoints[i]) continue;
    auto iv = detail::gk15(f, breakpoints[i], breakpoints[i + 1], res.evaluations);
    res.value += iv.value;
    res.error += iv.error;
    heap.push(iv);
  }
  while (!heap.empty() && res.error > std::max(abs_tol, rel_tol * std::abs(res.value)) &&
         heap.size() < max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    const auto left = detail::gk15(f, worst.a, mid, res.evaluations);
    const auto right = detail::gk15(f, mid, worst.b, res.evaluations);
    res.value += left.value + right.value - worst.value;
    res.error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the accumulated update round-off.
  double value = 0.0, error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  res.value = value;
  res.error = error;
  return res;
}

template <class F>
QuadratureResult integrate_gk(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0) {
  const double bp[] = {a, b};
  return integrate_gk(std::forward<F>(f), std::span<const double>(bp), abs_tol, rel_tol);
}

/// Golden-section search for a minimum of f on [a, b]. Returns (x, f(x)).
template <class F>
std::pair<double, double> golden_section_min(F&& f, double a, double b, double x_tol) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct BisectionResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bisection on [a, b] until |f| < f_tol or the bracket collapses. Throws
/// PreconditionError when f(a) and f(b) share a sign.
template <class F>
BisectionResult bisect(F&& f, double a, double b, double f_tol, int max_iter = 60) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, 0, true};
  if (fb == 0.0) return {b, fb, 0, true};
  if ((fa > 0.0) == (fb > 0.0)) throw PreconditionError("bisection: no sign change on the bracket");
  BisectionResult r;
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    r.x = m;
    r.fx = fm;
    if (std::abs(fm) < f_tol || !(m > a && m < b)) {
      r.converged = std::abs(fm) < f_tol;
      return r;
    }
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  r.iterations = max_iter;
  return r;
}

}  // namespace qgyro

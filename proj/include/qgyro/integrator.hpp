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

// Adaptive Dormand-Prince 5(4) integrator with the order-4 continuous
// extension, templated on any fixed-size Eigen state. Output is produced by
// evaluating the interpolant exactly at the requested times; steps are never
// snapped to the output grid.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qgyro/errors.hpp"

namespace qgyro {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  bool renormalize = true;
  std::size_t max_steps = 100'000'000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw PreconditionError("integrator tolerances must be > 0");
    if (!(max_step > 0.0)) throw PreconditionError("max_step must be > 0");
  }
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// One accepted step together with its interpolation coefficients.
template <class State>
struct Dopri5Segment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State, 5> coeff;

  State eval(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return coeff[0] + s * (coeff[1] + s1 * (coeff[2] + s * (coeff[3] + s1 * coeff[4])));
  }
};

/// Piecewise interpolant built from accepted steps.
template <class State>
class DenseSolution {
 public:
  void push(const Dopri5Segment<State>& seg) { segments_.push_back(seg); }

  bool empty() const { return segments_.empty(); }
  double t_begin() const { return segments_.front().t0; }
  double t_end() const { return segments_.back().t0 + segments_.back().h; }

  State eval(double t) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double x, const Dopri5Segment<State>& s) { return x < s.t0; });
    if (it != segments_.begin()) --it;
    return it->eval(t);
  }

  /// Step boundaries, useful as quadrature breakpoints.
  std::vector<double> knots() const {
    std::vector<double> k;
    k.reserve(segments_.size() + 1);
    for (const auto& s : segments_) k.push_back(s.t0);
    if (!segments_.empty()) k.push_back(t_end());
    return k;
  }

 private:
  std::vector<Dopri5Segment<State>> segments_;
};

namespace detail {

template <class State>
double rms_error(const State& err, const State& y0, const State& y1, double atol, double rtol) {
  const auto scale = atol + rtol * y0.array().abs().max(y1.array().abs());
  return std::sqrt((err.array() / scale).square().mean());
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 across `grid` (ascending, all >= t0).
///
/// `project(t, y)` runs after every accepted step and may modify y (e.g. to
/// renormalize). `on_sample(i, t, y)` receives the interpolated state at
/// grid[i]. `on_step(segment)` sees every accepted step.
template <class State, class Rhs, class Project, class OnSample, class OnStep>
IntegrationStats dopri5(Rhs&& f, double t0, State y, std::span<const double> grid, const IntegratorConfig& cfg,
                        Project&& project, OnSample&& on_sample, OnStep&& on_step) {
  cfg.validate();
  // Tableau (Hairer, Norsett & Wanner; DOPRI5).
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  IntegrationStats stats;
  std::size_t next = 0;
  while (next < grid.size() && grid[next] <= t0) {
    if (grid[next] < t0) throw PreconditionError("output grid starts before the initial time");
    on_sample(next, grid[next], y);
    ++next;
  }
  if (next == grid.size()) return stats;
  const double t_final = grid.back();

  const double atol = cfg.abs_tol;
  const double rtol = cfg.rel_tol;
  double t = t0;
  State k1 = f(t, y);

  // Initial step guess.
  double h;
  {
    const auto sk = atol + rtol * y.array().abs();
    const double d0 = std::sqrt((y.array() / sk).square().mean());
    const double dd1 = std::sqrt((k1.array() / sk).square().mean());
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, cfg.max_step);
    const State y1 = y + h0 * k1;
    const State f1 = f(t + h0, y1);
    const double d2 = std::sqrt(((f1 - k1).array() / sk).square().mean()) / h0;
    const double dm = std::max(dd1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, cfg.max_step});
  }

  bool last_rejected = false;
  while (next < grid.size()) {
    if (stats.accepted + stats.rejected >= cfg.max_steps) {
      throw NumericalError("integrator exceeded max_steps at t = " + std::to_string(t));
    }
    h = std::min(h, cfg.max_step);
    if (t + h > t_final) h = t_final - t;
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw NumericalError("step size underflow at t = " + std::to_string(t));
    }

    const State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    const State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    const State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const State y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State k7 = f(t + h, y1);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = detail::rms_error(err, y, y1, atol, rtol);

    if (!std::isfinite(en)) throw NumericalError("non-finite error estimate at t = " + std::to_string(t));

    if (en <= 1.0) {
      Dopri5Segment<State> seg;
      seg.t0 = t;
      seg.h = h;
      seg.coeff[0] = y;
      seg.coeff[1] = y1 - y;
      seg.coeff[2] = h * k1 - seg.coeff[1];
      seg.coeff[3] = seg.coeff[1] - h * k7 - seg.coeff[2];
      seg.coeff[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      const double t_new = (h == t_final - t) ? t_final : t + h;
      while (next < grid.size() && grid[next] <= t_new) {
        on_sample(next, grid[next], grid[next] == t_new ? y1 : seg.eval(grid[next]));
        ++next;
      }
      on_step(seg);
      ++stats.accepted;
      t = t_new;
      y = y1;
      project(t, y);
      k1 = f(t, y);
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h *= fac;
      last_rejected = false;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace qgyro

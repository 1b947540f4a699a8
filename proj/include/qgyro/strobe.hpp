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

// Stroboscopic (period-T Poincare) maps and the analytic level curves their
// points lie on.
//
// Both field types produce strobe points on curves of the form
//   a sqrt(1 - q^2) cos(p - shift) - c q = level,
// with (a, c) = (2 b0, 2 Omega) for the rotating field and
// (a, c) = (2 b0, 2 b3 - gamma) for the nonrotating one.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qgyro/core.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/fields.hpp"

namespace qgyro {

struct StrobePoint {
  std::size_t k = 0;
  double t = 0.0;
  double q = 0.0;
  double p = 0.0;
  double energy = 0.0;
  Vec3 s = Vec3::Zero();
};

struct StroboscopicMap {
  FieldSpec spec;
  std::size_t n_periods = 0;
  /// One orbit per initial condition, in input order; orbit[k].t = k T.
  std::vector<std::vector<StrobePoint>> orbits;
};

/// Integrates each initial condition and samples at t_k = k (2 pi / omega),
/// k = 0..n_periods. Runs up to `jobs` integrations concurrently (0 = all
/// cores); the result does not depend on `jobs`.
StroboscopicMap stroboscopic_map(const FieldSpec& spec, std::span<const CanonicalState> initials,
                                 std::size_t n_periods, const IntegratorConfig& cfg = {}, unsigned jobs = 1);

/// Strobe times k T computed as one multiplication each.
std::vector<double> strobe_times(double period, std::size_t n_periods);

enum class ContourKind { r_map, nr_map, separatrix };

struct ContourPoint {
  double q = 0.0;
  double p = 0.0;
};

struct ContourCurve {
  double level = 0.0;
  double a = 0.0;      // coefficient of sqrt(1 - q^2) cos(p - shift)
  double c = 0.0;      // coefficient of -q
  double shift = 0.0;  // phase offset in p
  ContourKind kind = ContourKind::r_map;
  bool degenerate = false;
  std::vector<ContourPoint> points;

  /// a sqrt(1 - q^2) cos(p - shift) - c q - level.
  double residual(double q, double p) const;
};

/// Solutions q in [-1, 1] of a sqrt(1 - q^2) cos(p - shift) - c q = level at
/// fixed p. Squares once to a quadratic and keeps roots whose unsquared
/// residual is within 1e-9 (relative to the coefficient scale).
std::vector<double> solve_level_q(double a, double c, double shift, double level, double p);

/// Sweeps p over n_points uniform values (plus the extremal and nodal values
/// of the cosine) and collects every valid (q, p).
ContourCurve sweep_contour(double a, double c, double shift, double level, ContourKind kind, std::size_t n_points);

/// Rotating-field torus through `initial`: level K = 2 b0 sqrt(1 - q0^2)
/// cos(p0 - phi) - 2 Omega q0.
ContourCurve contour_r(const RotatingFieldParams& params, const CanonicalState& initial, std::size_t n_points = 721);

/// Nonrotating-field curve through `initial` for slope gamma: level
/// E = 2 b0 sqrt(1 - q0^2) cos p0 - 2 (b3 - gamma / 2) q0.
ContourCurve contour_nr(const NonrotatingFieldParams& params, double gamma, const CanonicalState& initial,
                        std::size_t n_points = 721);

struct Commensurability {
  double ratio = 0.0;  // B / omega
  long long numerator = 0;
  long long denominator = 1;
  double error = 0.0;  // |ratio - numerator / denominator|
  bool rational = false;
};

/// Continued-fraction classification of B / omega: best convergent with
/// denominator <= max_denominator; rational when it is within tol.
Commensurability classify_commensurability(const RotatingFieldParams& params, double tol = 1e-9,
                                           long long max_denominator = 10000);

/// Continued-fraction classification of an arbitrary ratio.
Commensurability classify_ratio(double ratio, double tol = 1e-9, long long max_denominator = 10000);

struct Separatrix {
  /// Level +2 Omega; passes through q = -1.
  ContourCurve through_south;
  /// Level -2 Omega; passes through q = +1.
  ContourCurve through_north;
  /// Omega = 0: both levels are 0 and the curves are the lines
  /// p - phi = pi/2 and p - phi = 3 pi/2.
  bool degenerate = false;
};

/// Throws PreconditionError when b0 = 0 and Omega = 0.
Separatrix separatrix_r(const RotatingFieldParams& params, std::size_t n_points = 721);

/// Smallest k >= 1 with |S_k - S_0| < tol, or 0 if the orbit never returns.
std::size_t orbit_closure(std::span<const StrobePoint> orbit, double tol);

/// Number of points pairwise farther apart than `resolution` (greedy).
std::size_t distinct_points(std::span<const StrobePoint> orbit, double resolution);

}  // namespace qgyro

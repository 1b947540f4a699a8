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

// Numerical integration of the classical precession dS/dt = S x B(t).
//
// The unit vector S is the primary representation; (q, p) is derived because
// the canonical chart is singular at the poles, which NOT trajectories cross.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qgyro/core.hpp"
#include "qgyro/fields.hpp"
#include "qgyro/integrator.hpp"
#include "qgyro/qoracle.hpp"

namespace qgyro {

struct TrajectoryMeta {
  FieldSpec spec;
  IntegratorConfig config;
  /// Largest |(|S| - 1)| removed by a single renormalization (or reached, when
  /// renormalization is off).
  double max_norm_drift = 0.0;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<BlochVector> states;
  std::vector<CanonicalState> canonical;
  std::vector<double> energies;
  TrajectoryMeta meta;

  std::size_t size() const { return times.size(); }
};

/// Integrates dS/dt = S x B(t) and samples at `t_grid` (ascending, >= 0) from
/// the step interpolant. Throws NumericalError on step failure or when the
/// accumulated norm drift exceeds 1e-6 within one drive period.
Trajectory integrate_bloch(const FieldSpec& spec, const BlochVector& s0, std::span<const double> t_grid,
                           const IntegratorConfig& cfg = {});

/// Same, for an arbitrary field callable. `drift_window` is the time span over
/// which the 1e-6 norm-drift budget applies.
std::vector<BlochVector> integrate_bloch(const FieldFunction& field, const BlochVector& s0,
                                         std::span<const double> t_grid, const IntegratorConfig& cfg,
                                         double drift_window);

/// Two trajectories advanced in lockstep by one integrator (shared steps), so
/// their difference carries no independent step-control noise.
std::pair<std::vector<Vec3>, std::vector<Vec3>> integrate_bloch_pair(const FieldSpec& spec, const BlochVector& a,
                                                                     const BlochVector& b,
                                                                     std::span<const double> t_grid,
                                                                     const IntegratorConfig& cfg = {});

/// A trajectory and the separation delta(t) = S_b(t) - S(t) of a neighbour
/// S_b(0) = s0 + delta0. The equation of motion is linear, so delta obeys
/// d(delta)/dt = delta x B exactly; integrating it directly avoids the
/// cancellation of subtracting two nearly equal unit vectors.
std::pair<std::vector<Vec3>, std::vector<Vec3>> integrate_bloch_separation(const FieldSpec& spec,
                                                                           const BlochVector& s0, const Vec3& delta0,
                                                                           std::span<const double> t_grid,
                                                                           const IntegratorConfig& cfg = {});

/// Continuous solution on [0, t_end] for quadrature over the trajectory.
class BlochSolution {
 public:
  Vec3 operator()(double t) const { return dense_.eval(t); }
  double t_end() const { return dense_.t_end(); }
  /// Accepted step boundaries, in ascending order.
  std::vector<double> knots() const { return dense_.knots(); }

 private:
  friend BlochSolution solve_bloch(const FieldSpec&, const BlochVector&, double, const IntegratorConfig&);
  DenseSolution<Vec3> dense_;
};

BlochSolution solve_bloch(const FieldSpec& spec, const BlochVector& s0, double t_end, const IntegratorConfig& cfg = {});

/// Integrates Hamilton's equations in the (q, p) chart directly:
///   dq/dt = (B1 sin p - B2 cos p) sqrt(1 - q^2)
///   dp/dt = -(B1 cos p + B2 sin p) q / sqrt(1 - q^2) - B3.
/// Requires |q0| < 1 and throws NumericalError once |q| > 1 - 1e-6.
Trajectory integrate_canonical(const FieldSpec& spec, const CanonicalState& initial, std::span<const double> t_grid,
                               const IntegratorConfig& cfg = {});

/// max_t |S_classical(t) - S_quantum(t)| with the quantum side from the
/// Magnus oracle.
double quantum_consistency(const FieldSpec& spec, const CanonicalState& initial, std::span<const double> t_grid,
                           const IntegratorConfig& cfg = {}, const OracleConfig& oracle = {});

/// Uniform grid {0, dt, ..., n dt} with each point computed as i * dt.
std::vector<double> uniform_grid(double t_end, std::size_t n_intervals);

}  // namespace qgyro

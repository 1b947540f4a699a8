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

// Closed-form dynamics under the rotating field.
//
// In the frame co-rotating with the field the Hamiltonian is time
// independent,
//   K = 2 b0 sqrt(1 - Q^2) cos P - 2 Omega Q,   Omega = b3 - omega / 2,
// i.e. precession about the constant field (-2 b0, 0, -2 Omega) at angular
// rate B = 2 sqrt(b0^2 + Omega^2). The lab energy is H = K - omega q, so H is
// exactly linear in q with slope -omega.

#pragma once

#include <span>

#include "qgyro/core.hpp"
#include "qgyro/fields.hpp"

namespace qgyro {

/// Phase-space point in the co-rotating frame (frame tag `rotating`).
using RotatingFrameState = CanonicalState;

/// Raw closed-form components (S1, S2, S3) at time t, without any
/// renormalization. `initial` must be a lab-frame state.
Vec3 exact_bloch_components(const RotatingFieldParams& params, const CanonicalState& initial, double t);

/// Closed-form S(t), projected onto the sphere (the projection only absorbs
/// round-off; the raw components have unit norm analytically).
BlochVector exact_bloch_r(const RotatingFieldParams& params, const CanonicalState& initial, double t);

/// Closed-form S(t).S(0).
double exact_overlap_r(const RotatingFieldParams& params, const CanonicalState& initial, double t);

/// Independent route: S(t) = Rz(omega t + phi) Rot(n, B t) Rz(-phi) S(0), with
/// n the unit vector along (2 b0, 0, 2 Omega).
Vec3 rotation_bloch_r(const RotatingFieldParams& params, const CanonicalState& initial, double t);

/// Co-rotating-frame vector S_R(t) = Rot(n, B t) Rz(-phi) S(0).
Vec3 rotating_frame_bloch(const RotatingFieldParams& params, const CanonicalState& initial, double t);

/// Q = q, P = p - phi - omega t (mod 2 pi).
RotatingFrameState to_rotating_frame(const CanonicalState& state, const RotatingFieldParams& params, double t);

/// Inverse of to_rotating_frame.
CanonicalState from_rotating_frame(const RotatingFrameState& state, const RotatingFieldParams& params, double t);

/// K = 2 b0 sqrt(1 - Q^2) cos P - 2 Omega Q.
double rotating_hamiltonian(const RotatingFieldParams& params, const RotatingFrameState& state);

/// Period-one orbits: the two co-rotating-frame equilibria, S parallel and
/// antiparallel to the frame field.
struct FixedPointSet {
  double p_bar_plus = 0.0;   // P at the K = +B point
  double p_bar_minus = kPi;  // P at the K = -B point
  double q_bar_plus = 0.0;   // -2 Omega / B
  double q_bar_minus = 0.0;  // +2 Omega / B
  double e_plus = 0.0;       // +B (contour value)
  double e_minus = 0.0;      // -B
  double quantum_eigenvalue_plus = 0.0;   // +B/2
  double quantum_eigenvalue_minus = 0.0;  // -B/2
  QubitState eigenstate_plus = QubitState::plus();
  QubitState eigenstate_minus = QubitState::minus();
};

/// Throws DegenerateError when B = 0.
FixedPointSet fixed_points(const RotatingFieldParams& params);

struct EnergyLinearity {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// Least-squares slope of H(t) against q(t) along the exact trajectory.
/// Throws DegenerateError when the q variance is below 1e-14.
EnergyLinearity energy_linearity_check(const RotatingFieldParams& params, const CanonicalState& initial,
                                       std::span<const double> t_grid);

}  // namespace qgyro

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

// Geometry of precession about a constant field: the cone angle psi between
// S and B, velocity and acceleration of S, the frame rotation G(t) linking
// lab and rotating coordinates, and the single-formula NOT rule.
//
// For a constant field, K = -B.S = -B cos psi is conserved, v = S x B has
// norm B sin psi, a = v x B is centripetal with norm B^2 sin psi, and S
// precesses with angular rate |B|.

#pragma once

#include "qgyro/core.hpp"
#include "qgyro/fields.hpp"
#include "qgyro/integrator.hpp"

namespace qgyro {

struct PrecessionData {
  double psi = 0.0;           // angle between S and B, in [0, pi]
  double energy = 0.0;        // K = -B.S
  double speed = 0.0;         // |v| = sqrt(B^2 - K^2)
  double accel = 0.0;         // |a| = B |v|
  double angular_rate = 0.0;  // |B|
  double period = 0.0;        // 2 pi / |B|
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();

  /// Time for half a turn about B, pi / |B|.
  double half_turn_time() const { return 0.5 * period; }
};

/// Throws PreconditionError for a zero field.
PrecessionData precession_data(const Vec3& field, const BlochVector& s);

/// G(t): rotation by -omega t about axis 3, taking rotating-frame components
/// to the overlap metric of the lab frame.
struct FrameRotation {
  double angle = 0.0;  // omega t
  Mat3 matrix = Mat3::Identity();
};

FrameRotation frame_rotation(double omega, double t);

struct OverlapTransfer {
  double overlap_rotating = 1.0;  // S_R(t).S_R(0)
  double overlap_lab = 1.0;       // S_R(t)^T G(t) S_R(0)
};

/// Lab-frame overlap of a rotating-frame trajectory; the two generally reach
/// -1 at different times.
OverlapTransfer frame_overlap_transfer(const BlochVector& s_rot_t, const BlochVector& s0, double t, double omega);

struct NotRuleCheck {
  double lhs = 0.0;    // cos psi from -K / B
  double rhs = 0.0;    // S1(0) sin Theta
  double theta = 0.0;  // direction of B in the 1-3 plane, B = B (sin Theta, 0, cos Theta)
  bool satisfied = false;
};

/// cos psi = S1(0) sin Theta, valid when S3(0) = 0 or B3 = 0. Theta is the
/// signed angle of B from axis 3 towards axis 1, so sin Theta carries the
/// sign of B1. Throws PreconditionError for a zero field, a field with a
/// component along axis 2, or an initial state outside both branches.
NotRuleCheck not_rule(const CanonicalState& initial, const Vec3& field, double tol = 1e-12);

struct SeparatrixPrecession {
  Vec3 field = Vec3::Zero();    // (-2 b0, 0, -2 Omega)
  double level_north = 0.0;     // K of the orbit through the north pole, 2 Omega
  double level_south = 0.0;     // K of the orbit through the south pole, -2 Omega
  double max_abs_s3_north = 0.0;
  double max_abs_s3_south = 0.0;
  bool passes_poles = false;    // both maxima > 1 - 1e-8
  double period = 0.0;          // 2 pi / B, always finite
  double quoted_period = 0.0;   // pi / (2 b0^2), a dimensionally inconsistent
                                // expression kept for comparison only
};

/// Integrates the two separatrix-level orbits for one precession period,
/// starting half a turn away from their poles, and locates the maximum of
/// |S3|. Throws PreconditionError when b0 = 0 and Omega = 0.
SeparatrixPrecession separatrix_precession_check(const RotatingFieldParams& params, const IntegratorConfig& cfg = {});

}  // namespace qgyro

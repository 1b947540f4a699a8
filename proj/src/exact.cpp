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

#include "qgyro/exact.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qgyro/errors.hpp"
#include "qgyro/numerics.hpp"

namespace qgyro {
namespace {

Vec3 rotate_z(const Vec3& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

// Rodrigues rotation of v about unit axis n by angle a.
Vec3 rotate_axis(const Vec3& n, double a, const Vec3& v) {
  return v * std::cos(a) + n.cross(v) * std::sin(a) + n * n.dot(v) * (1.0 - std::cos(a));
}

void require_lab(const CanonicalState& s) {
  if (s.frame() != Frame::lab) throw PreconditionError("expected a lab-frame canonical state");
}

// Closed forms for phi = 0 as functions of (q0, p0, t).
Vec3 components_phi0(double b0, double om, double w, double q0, double p0, double t) {
  const double B = 2.0 * std::hypot(b0, om);
  const double B2 = B * B;
  const double r = std::sqrt(std::max(0.0, 1.0 - q0 * q0));
  const double wt = w * t;
  const double bt = B * t;
  const double sh2 = std::pow(std::sin(0.5 * bt), 2);
  const double hm = std::pow(0.5 * B - om, 2);
  const double hp = std::pow(0.5 * B + om, 2);

  const double s1 =
      -4.0 * q0 * b0 / B2 * (2.0 * om * std::cos(wt) * sh2 + 0.5 * B * std::sin(wt) * std::sin(bt)) +
      r / B2 *
          (2.0 * b0 * b0 * std::cos(p0 + wt) + hm * std::cos(p0 + wt - bt) + hp * std::cos(p0 + wt + bt) +
           4.0 * b0 * b0 * std::cos(p0 - wt) * sh2);
  const double s2 =
      -4.0 * q0 * b0 / B2 * (2.0 * om * std::sin(wt) * sh2 - 0.5 * B * std::cos(wt) * std::sin(bt)) +
      r / B2 *
          (2.0 * b0 * b0 * std::sin(p0 + wt) + hm * std::sin(p0 + wt - bt) + hp * std::sin(p0 + wt + bt) -
           4.0 * b0 * b0 * std::sin(p0 - wt) * sh2);
  const double s3 = -4.0 * q0 / B2 * (om * om + std::cos(bt) * b0 * b0) +
                    4.0 * b0 * r / B2 * (om * std::cos(p0) * (1.0 - std::cos(bt)) + 0.5 * B * std::sin(p0) * std::sin(bt));
  return {s1, s2, s3};
}

double overlap_phi0(double b0, double om, double w, double q0, double p0, double t) {
  const double B = 2.0 * std::hypot(b0, om);
  const double B2 = B * B;
  const double r = std::sqrt(std::max(0.0, 1.0 - q0 * q0));
  const double wt = w * t;
  const double bt = B * t;
  const double sb = std::sin(0.5 * bt);
  const double g = 0.5 * B * std::cos(0.5 * bt) * std::sin(0.5 * wt) + om * std::cos(0.5 * wt) * sb;
  const double a = (2.0 * b0 * b0 * std::cos(wt) + 2.0 * (0.25 * B2 + om * om) * std::cos(wt) * std::cos(bt) -
                    2.0 * B * om * std::sin(wt) * std::sin(bt)) /
                   B2;
  const double b = 8.0 * q0 * q0 * g * g / B2;
  const double c = -8.0 * b0 * q0 * r * std::cos(p0 - 0.5 * wt) *
                   (2.0 * om * std::cos(0.5 * wt) * sb * sb + 0.5 * B * std::sin(0.5 * wt) * std::sin(bt)) / B2;
  const double d =
      4.0 * b0 * b0 * sb * sb * (std::cos(2.0 * p0 - wt) - q0 * q0 * (1.0 + std::cos(2.0 * p0 - wt))) / B2;
  return a + b + c + d;
}

}  // namespace

Vec3 exact_bloch_components(const RotatingFieldParams& params, const CanonicalState& initial, double t) {
  params.validate();
  require_lab(initial);
  if (params.amplitude() == 0.0) {
    // No frame field: S_R is frozen and the lab vector just co-rotates.
    return rotate_z(bloch_from_canonical(initial).vec(), params.omega * t);
  }
  // The closed forms are written for phi = 0; a phase is a rigid z rotation.
  const Vec3 s = components_phi0(params.b0, params.detuning(), params.omega, initial.q(), initial.p() - params.phi, t);
  return params.phi == 0.0 ? s : rotate_z(s, params.phi);
}

BlochVector exact_bloch_r(const RotatingFieldParams& params, const CanonicalState& initial, double t) {
  return BlochVector::normalized(exact_bloch_components(params, initial, t));
}

double exact_overlap_r(const RotatingFieldParams& params, const CanonicalState& initial, double t) {
  params.validate();
  require_lab(initial);
  if (params.amplitude() == 0.0) {
    const Vec3 s0 = bloch_from_canonical(initial).vec();
    return rotate_z(s0, params.omega * t).dot(s0);
  }
  return overlap_phi0(params.b0, params.detuning(), params.omega, initial.q(), initial.p() - params.phi, t);
}

Vec3 rotating_frame_bloch(const RotatingFieldParams& params, const CanonicalState& initial, double t) {
  params.validate();
  require_lab(initial);
  const Vec3 s0 = rotate_z(bloch_from_canonical(initial).vec(), -params.phi);
  const double B = params.amplitude();
  if (B == 0.0) return s0;
  const Vec3 n = Vec3(2.0 * params.b0, 0.0, 2.0 * params.detuning()) / B;
  return rotate_axis(n, B * t, s0);
}

Vec3 rotation_bloch_r(const RotatingFieldParams& params, const CanonicalState& initial, double t) {
  return rotate_z(rotating_frame_bloch(params, initial, t), params.omega * t + params.phi);
}

RotatingFrameState to_rotating_frame(const CanonicalState& state, const RotatingFieldParams& params, double t) {
  require_lab(state);
  return RotatingFrameState(state.q(), state.p() - params.phi - params.omega * t, Frame::rotating);
}

CanonicalState from_rotating_frame(const RotatingFrameState& state, const RotatingFieldParams& params, double t) {
  if (state.frame() != Frame::rotating) throw PreconditionError("expected a rotating-frame state");
  return CanonicalState(state.q(), state.p() + params.phi + params.omega * t, Frame::lab);
}

double rotating_hamiltonian(const RotatingFieldParams& params, const RotatingFrameState& state) {
  const double q = state.q();
  return 2.0 * params.b0 * std::sqrt(1.0 - q * q) * std::cos(state.p()) - 2.0 * params.detuning() * q;
}

FixedPointSet fixed_points(const RotatingFieldParams& params) {
  params.validate();
  const double B = params.amplitude();
  if (!(B > 0.0)) throw DegenerateError("fixed points undefined for B = 0 (no field in the rotating frame)");
  const double om = params.detuning();
  FixedPointSet fp;
  fp.q_bar_plus = std::clamp(-2.0 * om / B, -1.0, 1.0);
  fp.q_bar_minus = std::clamp(2.0 * om / B, -1.0, 1.0);
  fp.p_bar_plus = 0.0;
  fp.p_bar_minus = kPi;
  fp.e_plus = B;
  fp.e_minus = -B;
  fp.quantum_eigenvalue_plus = 0.5 * B;
  fp.quantum_eigenvalue_minus = -0.5 * B;
  fp.eigenstate_plus = qubit_from_canonical(CanonicalState(fp.q_bar_plus, fp.p_bar_plus, Frame::rotating));
  fp.eigenstate_minus = qubit_from_canonical(CanonicalState(fp.q_bar_minus, fp.p_bar_minus, Frame::rotating));
  return fp;
}

EnergyLinearity energy_linearity_check(const RotatingFieldParams& params, const CanonicalState& initial,
                                       std::span<const double> t_grid) {
  const FieldSpec spec = params;
  std::vector<double> q, h;
  q.reserve(t_grid.size());
  h.reserve(t_grid.size());
  for (double t : t_grid) {
    const Vec3 s = exact_bloch_components(params, initial, t);
    q.push_back(-s.z());
    h.push_back(-field_at(spec, t).dot(s));
  }
  const LinearFit fit = least_squares_line(q, h, 1e-14);
  return {fit.slope, fit.intercept, fit.max_residual};
}

}  // namespace qgyro

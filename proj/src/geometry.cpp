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

#include "qgyro/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "qgyro/dynamics.hpp"
#include "qgyro/errors.hpp"
#include "qgyro/numerics.hpp"

namespace qgyro {
namespace {

double max_abs_s3(const Vec3& field, const Vec3& s0, const IntegratorConfig& cfg) {
  const double T = kTwoPi / field.norm();
  const BlochSolution sol = solve_bloch(ConstantField{field}, BlochVector::normalized(s0), T, cfg);
  const auto neg_abs = [&](double t) { return -std::abs(sol(t).normalized().z()); };
  constexpr std::size_t kSamples = 400;
  std::size_t best = 0;
  double best_v = 0.0;
  for (std::size_t i = 0; i <= kSamples; ++i) {
    const double v = neg_abs(T * static_cast<double>(i) / kSamples);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = T * static_cast<double>(best > 0 ? best - 1 : 0) / kSamples;
  const double hi = T * static_cast<double>(std::min(best + 1, kSamples)) / kSamples;
  const auto [t, v] = golden_section_min(neg_abs, lo, hi, 1e-12 * T);
  (void)t;
  return std::max(-v, -best_v);
}

// Rotation by pi about the unit axis n: x -> 2 (n.x) n - x.
Vec3 half_turn(const Vec3& n, const Vec3& x) { return 2.0 * n.dot(x) * n - x; }

}  // namespace

PrecessionData precession_data(const Vec3& field, const BlochVector& s) {
  const double b = field.norm();
  if (!(b > 0.0)) throw PreconditionError("precession_data requires a nonzero field");
  PrecessionData d;
  d.energy = -field.dot(s.vec());
  d.psi = std::acos(std::clamp(-d.energy / b, -1.0, 1.0));
  d.velocity = s.vec().cross(field);
  d.acceleration = d.velocity.cross(field);
  d.speed = d.velocity.norm();
  d.accel = d.acceleration.norm();
  d.angular_rate = b;
  d.period = kTwoPi / b;
  return d;
}

FrameRotation frame_rotation(double omega, double t) {
  FrameRotation g;
  g.angle = omega * t;
  const double c = std::cos(g.angle);
  const double s = std::sin(g.angle);
  g.matrix << c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0;
  return g;
}

OverlapTransfer frame_overlap_transfer(const BlochVector& s_rot_t, const BlochVector& s0, double t, double omega) {
  OverlapTransfer o;
  o.overlap_rotating = s_rot_t.dot(s0);
  o.overlap_lab = s_rot_t.vec().dot(frame_rotation(omega, t).matrix * s0.vec());
  return o;
}

NotRuleCheck not_rule(const CanonicalState& initial, const Vec3& field, double tol) {
  const double b = field.norm();
  if (!(b > 0.0)) throw PreconditionError("not_rule requires a nonzero field");
  if (std::abs(field.y()) > tol * b) throw PreconditionError("not_rule requires a field in the 1-3 plane");
  const BlochVector s0 = bloch_from_canonical(initial);
  const bool equator = std::abs(s0.s3()) <= tol;
  const bool transverse = std::abs(field.z()) <= tol * b;
  if (!equator && !transverse) throw PreconditionError("not_rule applies only when S3(0) = 0 or B3 = 0");
  NotRuleCheck r;
  r.theta = std::atan2(field.x(), field.z());
  r.lhs = std::cos(precession_data(field, s0).psi);
  r.rhs = s0.s1() * std::sin(r.theta);
  r.satisfied = std::abs(r.lhs - r.rhs) <= std::max(tol, 1e-12);
  return r;
}

SeparatrixPrecession separatrix_precession_check(const RotatingFieldParams& params, const IntegratorConfig& cfg) {
  params.validate();
  const double om = params.detuning();
  if (params.b0 == 0.0 && om == 0.0) throw PreconditionError("separatrix_precession_check requires a nonzero field");
  SeparatrixPrecession r;
  r.field = Vec3(-2.0 * params.b0, 0.0, -2.0 * om);
  const double b = r.field.norm();
  const Vec3 n = r.field / b;
  r.level_north = -r.field.z();
  r.level_south = r.field.z();
  r.max_abs_s3_north = max_abs_s3(r.field, half_turn(n, Vec3::UnitZ()), cfg);
  r.max_abs_s3_south = max_abs_s3(r.field, half_turn(n, -Vec3::UnitZ()), cfg);
  r.passes_poles = r.max_abs_s3_north > 1.0 - 1e-8 && r.max_abs_s3_south > 1.0 - 1e-8;
  r.period = kTwoPi / b;
  r.quoted_period = params.b0 != 0.0 ? kPi / (2.0 * params.b0 * params.b0) : 0.0;
  return r;
}

}  // namespace qgyro

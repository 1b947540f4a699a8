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

#include "qgyro/fields.hpp"

#include <cmath>

#include "qgyro/errors.hpp"

namespace qgyro {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// omega * (t mod T); keeps the trig argument in [0, 2pi) for long runs.
double reduced_phase(double omega, double t) {
  const double T = kTwoPi / omega;
  return omega * std::fmod(t, T);
}

}  // namespace

double RotatingFieldParams::amplitude() const { return 2.0 * std::hypot(b0, detuning()); }

void RotatingFieldParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw PreconditionError("rotating field requires omega > 0");
  if (!(b0 >= 0.0) || !std::isfinite(b0)) throw PreconditionError("rotating field requires b0 >= 0");
  if (!std::isfinite(b3) || !std::isfinite(phi)) throw PreconditionError("rotating field parameters must be finite");
}

void NonrotatingFieldParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw PreconditionError("nonrotating field requires omega > 0");
  if (!std::isfinite(b0) || !std::isfinite(b3)) throw PreconditionError("nonrotating field parameters must be finite");
}

Vec3 field_at(const FieldSpec& spec, double t) {
  return std::visit(
      overloaded{
          [t](const RotatingFieldParams& f) -> Vec3 {
            const double arg = reduced_phase(f.omega, t) + f.phi;
            return -2.0 * Vec3(f.b0 * std::cos(arg), f.b0 * std::sin(arg), f.b3);
          },
          [t](const NonrotatingFieldParams& f) -> Vec3 {
            return -2.0 * Vec3(f.b0, 0.0, f.b3 * std::cos(reduced_phase(f.omega, t)));
          },
          [](const ConstantField& f) -> Vec3 { return f.vector; },
          [](const MeanOfNonrotating& f) -> Vec3 { return Vec3(-2.0 * f.source.b0, 0.0, 0.0); },
      },
      spec);
}

double hamiltonian_value(const FieldSpec& spec, const CanonicalState& state, double t) {
  const Vec3 b = field_at(spec, t);
  const double q = state.q();
  const double p = state.p();
  // S3 = -q, so the axial term is +B3 q.
  return -(b.x() * std::cos(p) + b.y() * std::sin(p)) * std::sqrt(1.0 - q * q) + b.z() * q;
}

bool is_periodic(const FieldSpec& spec) {
  return std::holds_alternative<RotatingFieldParams>(spec) || std::holds_alternative<NonrotatingFieldParams>(spec);
}

double period(const FieldSpec& spec) {
  if (const auto* r = std::get_if<RotatingFieldParams>(&spec)) return r->period();
  if (const auto* n = std::get_if<NonrotatingFieldParams>(&spec)) return n->period();
  throw PreconditionError("field variant '" + variant_name(spec) + "' has no period");
}

void validate(const FieldSpec& spec) {
  std::visit(overloaded{
                 [](const RotatingFieldParams& f) { f.validate(); },
                 [](const NonrotatingFieldParams& f) { f.validate(); },
                 [](const ConstantField& f) {
                   if (!f.vector.allFinite()) throw PreconditionError("constant field must be finite");
                 },
                 [](const MeanOfNonrotating& f) { f.source.validate(); },
             },
             spec);
}

std::string variant_name(const FieldSpec& spec) {
  return std::visit(overloaded{
                        [](const RotatingFieldParams&) { return std::string("rotating"); },
                        [](const NonrotatingFieldParams&) { return std::string("nonrotating"); },
                        [](const ConstantField&) { return std::string("constant"); },
                        [](const MeanOfNonrotating&) { return std::string("mean_of_nr"); },
                    },
                    spec);
}

}  // namespace qgyro

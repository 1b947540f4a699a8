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

// Driving fields B(t). The classical energy is H = -B(t).S and the quantum
// Hamiltonian is -B(t).sigma / 2.

#pragma once

#include <string>
#include <variant>

#include "qgyro/core.hpp"

namespace qgyro {

/// B(t) = -2 (b0 cos(wt + phi), b0 sin(wt + phi), b3)
struct RotatingFieldParams {
  double b0 = 0.0;
  double b3 = 0.0;
  double omega = 1.0;
  double phi = 0.0;

  /// Omega = b3 - omega/2, the rotating-frame z field (up to -2).
  double detuning() const { return b3 - 0.5 * omega; }
  /// B = 2 sqrt(b0^2 + detuning^2), the rotating-frame field magnitude.
  double amplitude() const;
  double period() const { return kTwoPi / omega; }
  void validate() const;
};

/// B(t) = -2 (b0, 0, b3 cos wt)
struct NonrotatingFieldParams {
  double b0 = 0.0;
  double b3 = 0.0;
  double omega = 1.0;

  double period() const { return kTwoPi / omega; }
  void validate() const;
};

struct ConstantField {
  Vec3 vector = Vec3::Zero();
};

/// Period average of a nonrotating field: (-2 b0, 0, 0).
struct MeanOfNonrotating {
  NonrotatingFieldParams source;
};

using FieldSpec = std::variant<RotatingFieldParams, NonrotatingFieldParams, ConstantField, MeanOfNonrotating>;

Vec3 field_at(const FieldSpec& spec, double t);

/// H = -[B1 cos p + B2 sin p] sqrt(1 - q^2) + B3 q, which is -B(t).S with S3 = -q.
double hamiltonian_value(const FieldSpec& spec, const CanonicalState& state, double t);

bool is_periodic(const FieldSpec& spec);

/// T = 2 pi / omega. Throws PreconditionError for aperiodic variants.
double period(const FieldSpec& spec);

/// Throws PreconditionError if any parameter invariant fails.
void validate(const FieldSpec& spec);

/// "rotating", "nonrotating", "constant" or "mean_of_nr".
std::string variant_name(const FieldSpec& spec);

}  // namespace qgyro

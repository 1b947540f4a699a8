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

// Independent quantum-side oracle: i d(psi)/dt = H(t) psi with
// H(t) = -B(t).sigma / 2, integrated by a fourth-order Magnus scheme
// (SU(2)-exact per step), plus rotating-wave closed forms.
//
// The Magnus propagator shares no code with the classical Runge-Kutta
// integrator, so agreement between the two is a meaningful check.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qgyro/core.hpp"
#include "qgyro/fields.hpp"

namespace qgyro {

/// 2x2 unitary U(t).
class Propagator {
 public:
  /// Throws DomainError unless U^dagger U = 1 within 1e-10.
  explicit Propagator(const Mat2c& u);
  static Propagator identity() { return Propagator(Mat2c::Identity()); }

  const Mat2c& matrix() const { return u_; }
  QubitState apply(const QubitState& psi) const;

 private:
  Mat2c u_;
};

struct OracleConfig {
  /// Local error target per step (absolute, on the unit spinor), measured by
  /// step doubling before Richardson extrapolation.
  double tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 200'000'000;

  void validate() const;
};

struct QuantumRun {
  std::vector<QubitState> states;
  /// Largest |(||psi|| - 1)| seen before per-step renormalization.
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
};

using FieldFunction = std::function<Vec3(double)>;

/// SU(2) element exp(-i w.sigma / 2).
Mat2c su2_exp(const Vec3& w);

/// Propagates psi0 through the (ascending, >= 0) grid.
QuantumRun propagate_run(const FieldSpec& spec, const QubitState& psi0, std::span<const double> t_grid,
                         const OracleConfig& cfg = {});
QuantumRun propagate_run(const FieldFunction& field, const QubitState& psi0, std::span<const double> t_grid,
                         const OracleConfig& cfg = {});

std::vector<QubitState> propagate(const FieldSpec& spec, const QubitState& psi0, std::span<const double> t_grid,
                                  const OracleConfig& cfg = {});

/// U(t) from 0 to t.
Propagator propagator(const FieldSpec& spec, double t, const OracleConfig& cfg = {});

/// Nonrotating-field parameters for the rotating-wave comparison.
struct RwaParams {
  double b0 = 0.0;
  double b3 = 0.0;
  double omega = 1.0;

  void validate() const;
  NonrotatingFieldParams field() const { return {b0, b3, omega}; }
};

/// Omega_R = sqrt((2 b0 - omega)^2 + b3^2).
double rabi_frequency(const RwaParams& params);

/// Unit Pauli combination ((2b0-omega) sigma_z - b3 sigma_x) / Omega_R. Its
/// square is the identity. Returns sigma_z when Omega_R = 0.
Mat2c rwa_sigma(const RwaParams& params);

/// Rotating-wave solution in the original basis. Internally the state is
/// rotated by pi/2 about y, evolved with the period-averaged rotating-frame
/// Hamiltonian (Omega_R / 2) sigma_hat, brought back to the lab frame by
/// R(t) = exp(-i omega t sigma_z / 2) and rotated back.
QubitState rwa_solution(const RwaParams& params, const QubitState& psi0, double t);

/// D = sqrt(2 Tr[(rho1 - rho2)^2]), the Bloch-sphere chord distance.
double distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Euclidean norm of psi1 - psi2.
double state_distance(const QubitState& a, const QubitState& b);

}  // namespace qgyro

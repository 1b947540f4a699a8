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

#include "qgyro/qoracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgyro/errors.hpp"

namespace qgyro {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// One fourth-order Magnus step for H = h.sigma / 2 with h = -B. Gauss-Legendre
// nodes; the commutator term is (sqrt3/12) h^2 [A2, A1].
template <class Field>
Mat2c magnus4(const Field& field, double t, double h) {
  const double c1 = 0.5 - kSqrt3 / 6.0;
  const double c2 = 0.5 + kSqrt3 / 6.0;
  const Vec3 h1 = -field(t + c1 * h);
  const Vec3 h2 = -field(t + c2 * h);
  const Vec3 w = 0.5 * h * (h1 + h2) + (kSqrt3 / 12.0) * h * h * h2.cross(h1);
  return su2_exp(w);
}

template <class Field>
QuantumRun propagate_impl(const Field& field, const QubitState& psi0, std::span<const double> grid,
                          const OracleConfig& cfg) {
  cfg.validate();
  QuantumRun run;
  run.states.reserve(grid.size());
  if (grid.empty()) return run;
  if (grid.front() < 0.0) throw PreconditionError("time grid must start at t >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] < grid[i - 1]) throw PreconditionError("time grid must be sorted ascending");
  }

  Vec2c psi = psi0.amplitudes();
  double t = 0.0;
  double h = std::min(0.01, cfg.max_step);
  std::size_t attempts = 0;
  for (double target : grid) {
    while (t < target) {
      if (++attempts > cfg.max_steps) throw NumericalError("Magnus propagation exceeded max_steps");
      const bool final_step = t + h >= target;
      const double step = final_step ? target - t : h;
      const Vec2c full = magnus4(field, t, step) * psi;
      const Vec2c half = magnus4(field, t + 0.5 * step, 0.5 * step) * (magnus4(field, t, 0.5 * step) * psi);
      const double err = (half - full).norm();
      if (!std::isfinite(err)) throw NumericalError("non-finite Magnus step at t = " + std::to_string(t));
      if (err <= cfg.tol || step <= 1e-13 * std::max(1.0, t)) {
        if (step <= 1e-13 * std::max(1.0, t) && err > cfg.tol) {
          throw NumericalError("Magnus step size underflow at t = " + std::to_string(t));
        }
        Vec2c next = half + (half - full) / 15.0;
        const double n = next.norm();
        run.max_norm_drift = std::max(run.max_norm_drift, std::abs(n - 1.0));
        psi = next / n;
        t = final_step ? target : t + step;
        ++run.steps;
      }
      const double fac = err > 0.0 ? 0.9 * std::pow(cfg.tol / err, 0.2) : 4.0;
      const double h_new = step * std::clamp(fac, 0.2, 4.0);
      // A short final step onto a grid point should not shrink the stride.
      h = std::min(final_step && err <= cfg.tol ? std::max(h, h_new) : h_new, cfg.max_step);
    }
    run.states.push_back(QubitState::normalized(psi));
  }
  return run;
}

}  // namespace

// --- Propagator --------------------------------------------------------

Propagator::Propagator(const Mat2c& u) : u_(u) {
  if (!u.allFinite() || (u.adjoint() * u - Mat2c::Identity()).norm() > 1e-10) {
    throw DomainError("propagator is not unitary");
  }
}

QubitState Propagator::apply(const QubitState& psi) const { return QubitState::normalized(u_ * psi.amplitudes()); }

void OracleConfig::validate() const {
  if (!(tol > 0.0)) throw PreconditionError("oracle tolerance must be > 0");
  if (!(max_step > 0.0)) throw PreconditionError("oracle max_step must be > 0");
}

Mat2c su2_exp(const Vec3& w) {
  const double a = w.norm();
  const double c = std::cos(0.5 * a);
  // sin(a/2)/a, continued smoothly through a = 0.
  const double s = a > 1e-8 ? std::sin(0.5 * a) / a : 0.5 - a * a / 48.0;
  const cplx I(0.0, 1.0);
  Mat2c u;
  u << cplx(c, -s * w.z()), -I * s * cplx(w.x(), -w.y()),
       -I * s * cplx(w.x(), w.y()), cplx(c, s * w.z());
  return u;
}

QuantumRun propagate_run(const FieldSpec& spec, const QubitState& psi0, std::span<const double> t_grid,
                         const OracleConfig& cfg) {
  validate(spec);
  return propagate_impl([&spec](double t) { return field_at(spec, t); }, psi0, t_grid, cfg);
}

QuantumRun propagate_run(const FieldFunction& field, const QubitState& psi0, std::span<const double> t_grid,
                         const OracleConfig& cfg) {
  return propagate_impl(field, psi0, t_grid, cfg);
}

std::vector<QubitState> propagate(const FieldSpec& spec, const QubitState& psi0, std::span<const double> t_grid,
                                  const OracleConfig& cfg) {
  return propagate_run(spec, psi0, t_grid, cfg).states;
}

Propagator propagator(const FieldSpec& spec, double t, const OracleConfig& cfg) {
  const double grid[] = {t};
  const QubitState e0 = propagate(spec, QubitState::plus(), grid, cfg).front();
  const QubitState e1 = propagate(spec, QubitState::minus(), grid, cfg).front();
  Mat2c u;
  u.col(0) = e0.amplitudes();
  u.col(1) = e1.amplitudes();
  return Propagator(u);
}

// --- rotating-wave approximation ----------------------------------------

void RwaParams::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw PreconditionError("RWA requires omega > 0");
  if (!std::isfinite(b0) || !std::isfinite(b3)) throw PreconditionError("RWA parameters must be finite");
}

double rabi_frequency(const RwaParams& params) {
  params.validate();
  return std::hypot(2.0 * params.b0 - params.omega, params.b3);
}

Mat2c rwa_sigma(const RwaParams& params) {
  const double wr = rabi_frequency(params);
  if (wr == 0.0) return pauli(3);
  return ((2.0 * params.b0 - params.omega) / wr) * pauli(3) - (params.b3 / wr) * pauli(1);
}

QubitState rwa_solution(const RwaParams& params, const QubitState& psi0, double t) {
  const double wr = rabi_frequency(params);
  const cplx I(0.0, 1.0);
  // Y = exp(+i pi sigma_y / 4) maps b0 sigma_x + b3 cos(wt) sigma_z onto
  // b0 sigma_z - b3 cos(wt) sigma_x.
  const double r = std::sqrt(0.5);
  const Mat2c y = r * (Mat2c::Identity() + I * pauli(2));
  const Mat2c avg = std::cos(0.5 * wr * t) * Mat2c::Identity() - I * std::sin(0.5 * wr * t) * rwa_sigma(params);
  Mat2c frame = Mat2c::Zero();
  frame(0, 0) = std::polar(1.0, -0.5 * params.omega * t);
  frame(1, 1) = std::polar(1.0, 0.5 * params.omega * t);
  return QubitState::normalized(y.adjoint() * frame * avg * y * psi0.amplitudes());
}

double distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const Mat2c d = rho1.matrix() - rho2.matrix();
  return std::sqrt(std::max(0.0, 2.0 * (d * d).trace().real()));
}

double state_distance(const QubitState& a, const QubitState& b) { return (a.amplitudes() - b.amplitudes()).norm(); }

}  // namespace qgyro

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

#include "qgyro/core.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "qgyro/errors.hpp"

namespace qgyro {

double wrap_angle(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2pi.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double angular_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

const Mat2c& pauli(int i) {
  static const std::array<Mat2c, 3> sigma = [] {
    const cplx I(0.0, 1.0);
    std::array<Mat2c, 3> m;
    m[0] << 0.0, 1.0, 1.0, 0.0;
    m[1] << 0.0, -I, I, 0.0;
    m[2] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  if (i < 1 || i > 3) throw PreconditionError("pauli index must be 1, 2 or 3");
  return sigma[static_cast<std::size_t>(i - 1)];
}

// --- BlochVector -------------------------------------------------------

BlochVector::BlochVector(double s1, double s2, double s3) : BlochVector(Vec3(s1, s2, s3)) {}

BlochVector::BlochVector(const Vec3& v) : v_(v) {
  if (!v.allFinite() || std::abs(v.squaredNorm() - 1.0) > kUnitNormTol) {
    throw DomainError("BlochVector requires unit norm, got |S|^2 = " +
                      std::to_string(v.squaredNorm()));
  }
}

BlochVector BlochVector::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero vector");
  return BlochVector(v / n, Unchecked{});
}

BlochVector BlochVector::operator-() const { return BlochVector(-v_, Unchecked{}); }

// --- CanonicalState ----------------------------------------------------

CanonicalState::CanonicalState(double q, double p, Frame frame)
    : q_(q), p_(wrap_angle(p)), frame_(frame) {
  if (!std::isfinite(q) || !std::isfinite(p)) throw DomainError("non-finite canonical state");
  if (std::abs(q) > 1.0 + kUnitNormTol) {
    throw DomainError("canonical coordinate q must satisfy |q| <= 1, got " + std::to_string(q));
  }
  q_ = std::clamp(q, -1.0, 1.0);
}

// --- QubitState --------------------------------------------------------

QubitState::QubitState(cplx amp_plus, cplx amp_minus) : QubitState(Vec2c(amp_plus, amp_minus)) {}

QubitState::QubitState(const Vec2c& amplitudes) : a_(amplitudes) {
  if (!amplitudes.allFinite() || std::abs(amplitudes.squaredNorm() - 1.0) > kUnitNormTol) {
    throw DomainError("QubitState requires unit norm");
  }
}

QubitState QubitState::normalized(const Vec2c& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize a zero spinor");
  Vec2c a = amplitudes / n;
  // Re-normalize once more so the squared norm lands inside the 1e-12 gate.
  return QubitState(a / a.norm());
}

// --- DensityMatrix -----------------------------------------------------

DensityMatrix::DensityMatrix(const Mat2c& rho) : rho_(rho) {
  if (!rho.allFinite()) throw DomainError("non-finite density matrix");
  if ((rho - rho.adjoint()).norm() > kPurityTol) throw DomainError("density matrix not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0)) > kPurityTol) throw DomainError("density matrix trace != 1");
  if (std::abs((rho * rho).trace().real() - 1.0) > kPurityTol) {
    throw DomainError("density matrix is not pure");
  }
}

// --- conversions -------------------------------------------------------

BlochVector bloch_from_canonical(const CanonicalState& state) {
  return BlochVector::normalized(bloch_components(state.q(), state.p()));
}

CanonicalState canonical_from_bloch(const BlochVector& s, Frame frame) {
  // Pole convention: atan2(0, 0) = 0, so p = 0 when s1 = s2 = 0.
  const double p = (s.s1() == 0.0 && s.s2() == 0.0) ? 0.0 : std::atan2(s.s2(), s.s1());
  return CanonicalState(-s.s3(), p, frame);
}

QubitState qubit_from_canonical(const CanonicalState& state) {
  const double q = state.q();
  const double a = std::sqrt(0.5 * (1.0 - q));
  const double b = std::sqrt(0.5 * (1.0 + q));
  return QubitState::normalized(Vec2c(cplx(a), std::polar(b, state.p())));
}

BlochVector bloch_from_qubit(const QubitState& psi) {
  const cplx a = psi.amp_plus();
  const cplx b = psi.amp_minus();
  const cplx ab = std::conj(a) * b;
  return BlochVector::normalized(Vec3(2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)));
}

CanonicalState perpendicular(const CanonicalState& state) {
  return CanonicalState(-state.q(), state.p() + kPi, state.frame());
}

DensityMatrix density_from_bloch(const BlochVector& s) {
  Mat2c rho = 0.5 * (Mat2c::Identity() + s.s1() * pauli(1) + s.s2() * pauli(2) + s.s3() * pauli(3));
  return DensityMatrix(rho);
}

DensityMatrix density_from_qubit(const QubitState& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

BlochVector bloch_from_density(const DensityMatrix& rho) {
  const Mat2c& m = rho.matrix();
  return BlochVector::normalized(Vec3((m * pauli(1)).trace().real(), (m * pauli(2)).trace().real(),
                                      (m * pauli(3)).trace().real()));
}

}  // namespace qgyro

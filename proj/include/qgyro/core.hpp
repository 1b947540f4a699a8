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

// State representations of a single qubit and the exact maps between them:
//
//   QubitState  <->  DensityMatrix  <->  BlochVector  <->  CanonicalState
//
// The canonical pair is q = -cos(theta), p = phi, so that
//   S = (sqrt(1-q^2) cos p, sqrt(1-q^2) sin p, -q)
// and |psi> = sqrt((1-q)/2) |+> + sqrt((1+q)/2) e^{ip} |->.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace qgyro {

using Vec3 = Eigen::Vector3d;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kPurityTol = 1e-10;

/// Maps an angle into [0, 2pi).
double wrap_angle(double angle);

/// Shortest distance between two angles on the circle, in [0, pi].
double angular_distance(double a, double b);

/// Unchecked kernel for the (q, p) -> S map. Works for any Eigen scalar.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> bloch_components(const Scalar& q, const Scalar& p) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar r = sqrt(Scalar(1) - q * q);
  return Eigen::Matrix<Scalar, 3, 1>(r * cos(p), r * sin(p), -q);
}

/// Pauli matrix sigma_i for i in {1, 2, 3}.
const Mat2c& pauli(int i);

/// Unit vector on the Bloch sphere.
class BlochVector {
 public:
  /// Throws DomainError unless the components have unit norm within 1e-12.
  BlochVector(double s1, double s2, double s3);
  explicit BlochVector(const Vec3& v);

  /// Projects a nonzero vector onto the sphere.
  static BlochVector normalized(const Vec3& v);

  double s1() const { return v_.x(); }
  double s2() const { return v_.y(); }
  double s3() const { return v_.z(); }
  const Vec3& vec() const { return v_; }

  double dot(const BlochVector& other) const { return v_.dot(other.v_); }
  BlochVector operator-() const;

 private:
  struct Unchecked {};
  BlochVector(const Vec3& v, Unchecked) : v_(v) {}
  Vec3 v_;
};

enum class Frame { lab, rotating };

/// Phase-space point (q, p). p is kept in [0, 2pi).
class CanonicalState {
 public:
  /// Throws DomainError when |q| > 1 + 1e-12; q is clamped onto [-1, 1].
  CanonicalState(double q, double p, Frame frame = Frame::lab);

  double q() const { return q_; }
  double p() const { return p_; }
  Frame frame() const { return frame_; }

 private:
  double q_;
  double p_;
  Frame frame_;
};

/// Pure qubit state a|+> + b|->, normalized within 1e-12.
class QubitState {
 public:
  QubitState(cplx amp_plus, cplx amp_minus);
  explicit QubitState(const Vec2c& amplitudes);

  static QubitState normalized(const Vec2c& amplitudes);
  static QubitState plus() { return {cplx(1.0), cplx(0.0)}; }
  static QubitState minus() { return {cplx(0.0), cplx(1.0)}; }

  cplx amp_plus() const { return a_(0); }
  cplx amp_minus() const { return a_(1); }
  const Vec2c& amplitudes() const { return a_; }

  /// <this|other>
  cplx inner(const QubitState& other) const { return a_.dot(other.a_); }

 private:
  Vec2c a_;
};

/// 2x2 density matrix of a pure state.
class DensityMatrix {
 public:
  /// Throws DomainError unless rho is Hermitian with unit trace and purity.
  explicit DensityMatrix(const Mat2c& rho);

  const Mat2c& matrix() const { return rho_; }
  double purity() const { return (rho_ * rho_).trace().real(); }

 private:
  Mat2c rho_;
};

BlochVector bloch_from_canonical(const CanonicalState& state);
CanonicalState canonical_from_bloch(const BlochVector& s, Frame frame = Frame::lab);
QubitState qubit_from_canonical(const CanonicalState& state);
BlochVector bloch_from_qubit(const QubitState& psi);
CanonicalState perpendicular(const CanonicalState& state);
DensityMatrix density_from_bloch(const BlochVector& s);
DensityMatrix density_from_qubit(const QubitState& psi);
/// S_i = Tr(rho sigma_i).
BlochVector bloch_from_density(const DensityMatrix& rho);

}  // namespace qgyro

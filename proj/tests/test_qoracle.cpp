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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "qgyro/dynamics.hpp"
#include "qgyro/errors.hpp"
#include "qgyro/qoracle.hpp"

using namespace qgyro;

TEST_SUITE("qoracle") {
  TEST_CASE("su2_exp is unitary and matches a half-angle rotation") {
    const Vec3 w(0.3, -1.2, 0.7);
    const Mat2c u = su2_exp(w);
    CHECK((u.adjoint() * u - Mat2c::Identity()).norm() < 1e-14);
    const Mat2c z = su2_exp(Vec3(0.0, 0.0, kPi));
    CHECK(std::abs(z(0, 0) - cplx(0.0, -1.0)) < 1e-15);
  }

  TEST_CASE("Propagator rejects non-unitary matrices") {
    Mat2c m = Mat2c::Identity();
    m(0, 0) = 1.1;
    CHECK_THROWS_AS(Propagator{m}, DomainError);
  }

  TEST_CASE("constant field: spin precesses like the classical vector") {
    const FieldSpec spec = ConstantField{Vec3(0.0, 0.0, -2.0)};
    const CanonicalState c(0.0, 0.0);
    const std::vector<double> grid{0.0, 0.5, 1.0, kPi};
    const auto psi = propagate(spec, qubit_from_canonical(c), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // S x B with B = -2 z turns x towards +y at rate 2.
      const Vec3 s = bloch_from_qubit(psi[i]).vec();
      const Vec3 expect(std::cos(2.0 * grid[i]), std::sin(2.0 * grid[i]), 0.0);
      CHECK((s - expect).norm() < 1e-10);
    }
  }

  TEST_CASE("quantum and classical evolutions agree") {
    const FieldSpec spec = NonrotatingFieldParams{1.0, 1.5, 3.0};
    const auto grid = uniform_grid(10.0 * period(spec), 200);
    CHECK(quantum_consistency(spec, CanonicalState(0.5, 1.0), grid) < 1e-8);
  }

  TEST_CASE("propagator composes with the state evolution") {
    const FieldSpec spec = RotatingFieldParams{0.7, 1.3, 1.1, 0.4};
    const QubitState psi0 = qubit_from_canonical(CanonicalState(0.2, 0.5));
    const double t = 3.3;
    const Propagator u = propagator(spec, t);
    const std::vector<double> grid{0.0, t};
    const QubitState a = propagate(spec, psi0, grid).back();
    CHECK(state_distance(a, u.apply(psi0)) < 1e-10);
  }

  TEST_CASE("RWA: Rabi frequency and exact resonant solution at b3 -> 0") {
    const RwaParams p{1.0, 0.1, 2.0};
    CHECK(rabi_frequency(p) == doctest::Approx(0.1));
    const QubitState psi0 = QubitState::plus();
    // b3 = 0 gives no transverse coupling: only the static part remains.
    const RwaParams q{1.0, 0.0, 2.0};
    const auto grid = uniform_grid(5.0, 10);
    const auto exact = propagate(q.field(), psi0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(state_distance(exact[i], rwa_solution(q, psi0, grid[i])) < 1e-9);
    }
  }

  TEST_CASE("state and density-matrix distances") {
    // The spinor distance sees the global phase; the density-matrix one does not.
    CHECK(state_distance(QubitState::plus(), QubitState::minus()) == doctest::Approx(std::sqrt(2.0)));
    const QubitState phased(cplx(0.0, 1.0), cplx(0.0));
    CHECK(state_distance(QubitState::plus(), phased) == doctest::Approx(std::sqrt(2.0)));
    CHECK(distance(density_from_qubit(QubitState::plus()), density_from_qubit(phased)) < 1e-15);
    CHECK(distance(density_from_qubit(QubitState::plus()), density_from_qubit(QubitState::minus())) ==
          doctest::Approx(2.0));
  }
}

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

#include "qgyro/analysis.hpp"
#include "qgyro/errors.hpp"
#include "qgyro/integrator.hpp"
#include "qgyro/numerics.hpp"

using namespace qgyro;

TEST_SUITE("numerics") {
  TEST_CASE("least squares recovers an exact line") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double v : x) y.push_back(-2.5 * v + 0.75);
    const LinearFit f = least_squares_line(x, y);
    CHECK(f.slope == doctest::Approx(-2.5));
    CHECK(f.intercept == doctest::Approx(0.75));
    CHECK(f.max_residual < 1e-14);
    CHECK(f.n_points == 5);
  }

  TEST_CASE("least squares rejects degenerate input") {
    const std::vector<double> two{0.0, 1.0};
    CHECK_THROWS_AS(least_squares_line(two, two), DegenerateError);
    const std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(least_squares_line(flat, flat), DegenerateError);
  }

  TEST_CASE("Gauss-Kronrod integrates smooth and kinked integrands") {
    CHECK(integrate_gk([](double t) { return std::sin(t); }, 0.0, kPi, 1e-14).value == doctest::Approx(2.0));
    const double breaks[] = {-1.0, 0.0, 2.0};
    const QuadratureResult r = integrate_gk([](double t) { return std::abs(t); }, breaks, 1e-14);
    CHECK(r.value == doctest::Approx(2.5).epsilon(1e-13));
    const auto osc = integrate_gk([](double t) { return std::cos(40.0 * t) * t; }, 0.0, kTwoPi, 1e-13, 1e-12);
    CHECK(std::abs(osc.value) < 1e-11);
  }

  TEST_CASE("golden section finds a parabola minimum") {
    const auto [x, fx] = golden_section_min([](double t) { return (t - 0.3) * (t - 0.3) - 1.0; }, -1.0, 2.0, 1e-10);
    CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(fx == doctest::Approx(-1.0));
  }

  TEST_CASE("bisection converges and validates its bracket") {
    const BisectionResult r = bisect([](double t) { return t * t - 2.0; }, 0.0, 2.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(bisect([](double t) { return t * t + 1.0; }, -1.0, 1.0, 1e-12), PreconditionError);
  }

  TEST_CASE("DOPRI5 solves the harmonic oscillator with dense output") {
    using State = Eigen::Vector2d;
    const auto rhs = [](double, const State& y) { return State(y(1), -y(0)); };
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.1 * i * kPi);
    std::vector<State> out(grid.size());
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-13;
    const IntegrationStats st = dopri5<State>(
        rhs, 0.0, State(1.0, 0.0), grid, cfg, [](double, State&) {},
        [&](std::size_t i, double, const State& y) { out[i] = y; }, [](const Dopri5Segment<State>&) {});
    CHECK(st.accepted > 0);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(out[i](0) - std::cos(grid[i])));
    CHECK(err < 1e-9);
  }

  TEST_CASE("bessel J0 reference values") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
    CHECK(bessel_j0(-1.0) == bessel_j0(1.0));
    CHECK(bessel_j0(10.0) == doctest::Approx(-0.2459357644513483).epsilon(1e-12));
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-12);
    CHECK(std::abs(bessel_j0(5.520078110286311)) < 1e-12);
    CHECK(bessel_j0(30.0) == doctest::Approx(-0.08636798358104121).epsilon(1e-12));
    // Both branches agree across the crossover.
    CHECK(std::abs(bessel_j0(20.0) - bessel_j0(std::nextafter(20.0, 21.0))) < 1e-12);
  }
}

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
#include "qgyro/strobe.hpp"

using namespace qgyro;

TEST_SUITE("strobe") {
  TEST_CASE("strobe times are exact multiples of the period") {
    const auto t = strobe_times(0.5, 4);
    CHECK(t == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  }

  TEST_CASE("map output does not depend on the worker count") {
    const FieldSpec spec = NonrotatingFieldParams{1.0, 1.5, 3.0};
    const std::vector<CanonicalState> ics{{0.5, 1.0}, {-0.2, 3.0}, {0.1, 5.0}};
    const StroboscopicMap a = stroboscopic_map(spec, ics, 20, {}, 1);
    const StroboscopicMap b = stroboscopic_map(spec, ics, 20, {}, 3);
    REQUIRE(a.orbits.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      REQUIRE(a.orbits[i].size() == 21);
      for (std::size_t k = 0; k <= 20; ++k) {
        CHECK(a.orbits[i][k].q == b.orbits[i][k].q);
        CHECK(a.orbits[i][k].p == b.orbits[i][k].p);
      }
    }
  }

  TEST_CASE("rotating-field strobe points lie on their contour") {
    const RotatingFieldParams p{0.7, 1.3, 1.1, 0.4};
    const CanonicalState c(0.35, 2.2);
    const CanonicalState ics[] = {c};
    const StroboscopicMap map = stroboscopic_map(p, ics, 50);
    const ContourCurve curve = contour_r(p, c, 361);
    CHECK_FALSE(curve.points.empty());
    for (const auto& pt : curve.points) CHECK(std::abs(curve.residual(pt.q, pt.p)) < 1e-9);
    for (const auto& pt : map.orbits[0]) CHECK(std::abs(curve.residual(pt.q, pt.p)) < 1e-7);
  }

  TEST_CASE("level-set solver returns valid roots only") {
    const auto qs = solve_level_q(1.0, 0.5, 0.0, 0.2, 0.3);
    for (double q : qs) {
      CHECK(std::abs(std::sqrt(1.0 - q * q) * std::cos(0.3) - 0.5 * q - 0.2) < 1e-9);
    }
    CHECK(solve_level_q(1.0, 0.0, 0.0, 5.0, 0.0).empty());
  }

  TEST_CASE("commensurability by continued fractions") {
    const Commensurability r = classify_ratio(2.0 / 89.0);
    CHECK(r.rational);
    CHECK(r.numerator == 2);
    CHECK(r.denominator == 89);
    CHECK_FALSE(classify_ratio(std::sqrt(5.0)).rational);
    const Commensurability c = classify_commensurability(RotatingFieldParams{1.0, 44.5, 89.0, 0.0});
    CHECK(c.denominator == 89);
  }

  TEST_CASE("separatrix levels and the degenerate case") {
    const RotatingFieldParams p{1.0, 1.0, 1.0, 0.0};
    const Separatrix s = separatrix_r(p);
    CHECK(s.through_south.level == doctest::Approx(2.0 * p.detuning()));
    CHECK(s.through_north.level == doctest::Approx(-2.0 * p.detuning()));
    CHECK(std::abs(s.through_south.residual(-1.0, 0.0)) < 1e-12);
    const Separatrix d = separatrix_r(RotatingFieldParams{1.0, 0.5, 1.0, 0.0});
    CHECK(d.degenerate);
    CHECK_THROWS_AS(separatrix_r(RotatingFieldParams{0.0, 0.5, 1.0, 0.0}), PreconditionError);
  }

  TEST_CASE("orbit closure and distinct points") {
    const RotatingFieldParams p{1.0, 44.5, 89.0, 0.0};
    const CanonicalState ics[] = {{0.5, 1.0}};
    const StroboscopicMap map = stroboscopic_map(p, ics, 100);
    CHECK(orbit_closure(map.orbits[0], 1e-6) == 89);
    CHECK(distinct_points(map.orbits[0], 1e-6) == 89);
  }

  TEST_CASE("nonrotating strobe points lie near the fitted contour") {
    const NonrotatingFieldParams p{1.0, 1.5, 3.0};
    const CanonicalState c(0.5, 1.0);
    const double gamma = fit_gamma_nr(p, c, 200).gamma;
    const ContourCurve curve = contour_nr(p, gamma, c);
    const CanonicalState ics[] = {c};
    const StroboscopicMap map = stroboscopic_map(p, ics, 100);
    for (const auto& pt : map.orbits[0]) {
      CHECK(std::abs(curve.residual(pt.q, pt.p)) < 2e-2);
    }
  }
}

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

// Unitary NOT operations: evolutions carrying S(0) to its antipode,
// S(t_not).S(0) = -1.
//
// For the rotating field four parameter regimes are known in closed form:
//   case 1  omega^2 = b0^2 + (b3 - omega/2)^2      equator,        (2n+1) pi/omega
//   case 2  b3 = omega/2, b0 = (2m+1) omega/2     poles, p0 = l pi, (2n+1) pi/omega
//   case 3  b3 = omega/2, b0 = omega              poles,          (2n+1) pi/(2 omega)
//                                                 p0 = (2l+3) pi/4, (4n+eps) pi/(2 omega)
//   case 4  b3 = omega/2, b0 = omega/(4m)         p0 = (l+1/2) pi, m (2n+1) 2 pi/omega
// For case 3, eps = 1 when l is even and 3 when l is odd. A nonzero field
// phase phi shifts every branch phase by phi.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qgyro/core.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/fields.hpp"

namespace qgyro {

enum class ClassKind { equator, poles, phase_lines };

/// Set of initial conditions (a branch) for which a regime realizes the NOT.
struct InitialClass {
  ClassKind kind = ClassKind::equator;
  std::vector<double> phases;  // p0 values for phase_lines, in [0, 2 pi)
  std::string label;

  bool contains(const CanonicalState& s, double tol = 1e-9) const;
};

/// t_n = (slope n + offset) pi / omega, n = 0, 1, 2, ...
struct NotSchedule {
  double slope = 2.0;
  double offset = 1.0;
  InitialClass initial_class;

  double t_not(double omega, int n) const;
};

struct NotRegime {
  int case_id = 0;
  int m = -1;  // integer parameter of cases 2 and 4; -1 when unused
  std::string constraints;
  std::vector<NotSchedule> schedules;
};

struct IntBounds {
  int m_max = 16;
};

/// Regimes whose constraints hold for `params` within 1e-9 relative.
std::vector<NotRegime> predict_regimes(const RotatingFieldParams& params, const IntBounds& bounds = {});

/// Checks every schedule of a regime for n = 0..n_max on a deterministic set
/// of class members with the closed-form overlap; true when all reach
/// <= -1 + tol.
bool verify_regime(const RotatingFieldParams& params, const NotRegime& regime, int n_max = 3, double tol = 1e-8);

/// Closed-form S(t_not).S(0) for each case:
///   (1) 2 q0^2 - 1
///   (2) -q0^2 + (q0^2 - 1) cos 2p0
///   (3) -q0^2 + (-1)^(l+1) (q0^2 - 1) sin 2p0
///   (4) -q0^2 + (1 - q0^2) cos 2p0
/// `printed_case1` selects the alternative form 1 - 2 q0^2 for case 1.
double overlap_expression(int case_id, const CanonicalState& initial, int l = 0, bool printed_case1 = false);

struct NotEvent {
  double t = 0.0;
  double overlap = 1.0;
};

struct NotDetection {
  double t_star = 0.0;
  double min_overlap = 1.0;
  bool achieved = false;
  /// Every refined local minimum of the overlap, in time order.
  std::vector<NotEvent> events;
  /// Sampled overlap curve.
  std::vector<double> times;
  std::vector<double> overlap;
};

struct DetectSettings {
  double tol = 1e-3;
  std::size_t samples_per_period = 200;
  IntegratorConfig integrator{};
};

/// Tracks S(t).S(0) on a dense grid over [0, t_max] and refines every local
/// minimum by golden-section search. t_star is the first minimum reaching
/// -1 + tol, or the deepest minimum when none does.
NotDetection detect_not(const FieldSpec& spec, const CanonicalState& initial, double t_max,
                        const DetectSettings& settings = {});

/// Event closest in time to `t`, if any.
std::optional<NotEvent> nearest_event(const NotDetection& detection, double t);

/// g = gamma^2 - b0^2 - (b3 - gamma/2)^2; with gamma = omega this is the
/// case-1 condition for the rotating field.
double resonance_function(double gamma, double b0, double b3);

struct ResonanceSettings {
  double seed_q0 = 0.5;
  double seed_p0 = 1.0;
  std::size_t n_periods = 200;
  int max_iter = 60;
  IntegratorConfig integrator{};
};

struct ResonanceResult {
  double b0_star = 0.0;
  double gamma_star = 0.0;
  double g_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bisection on g(b0) with gamma(b0) fitted from a nonrotating strobe run,
/// until |g| < 1e-6 omega^2. Throws PreconditionError when g does not change
/// sign on [b0_min, b0_max].
ResonanceResult nr_resonance_search(double omega, double b3, double b0_min, double b0_max,
                                    const ResonanceSettings& settings = {});

/// Half-turn time pi / |mean field| = pi / (2 b0) about the period-averaged
/// nonrotating field. Throws DomainError for b0 <= 0.
double mean_not_time(double b0);

}  // namespace qgyro

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

#include "qgyro/notgate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgyro/analysis.hpp"
#include "qgyro/errors.hpp"
#include "qgyro/exact.hpp"
#include "qgyro/numerics.hpp"

namespace qgyro {
namespace {

bool close_rel(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(scale)); }

InitialClass equator_class() { return {ClassKind::equator, {}, "bphi (equator q0 = 0, any p0)"}; }

InitialClass pole_class() { return {ClassKind::poles, {}, "poles (q0 = -1 or +1)"}; }

InitialClass phase_class(std::vector<double> phases, double phi, std::string label) {
  for (double& p : phases) p = wrap_angle(p + phi);
  return {ClassKind::phase_lines, std::move(phases), std::move(label)};
}

}  // namespace

bool InitialClass::contains(const CanonicalState& s, double tol) const {
  switch (kind) {
    case ClassKind::equator:
      return std::abs(s.q()) <= tol;
    case ClassKind::poles:
      return std::abs(std::abs(s.q()) - 1.0) <= tol;
    case ClassKind::phase_lines:
      return std::any_of(phases.begin(), phases.end(),
                         [&](double p) { return angular_distance(p, s.p()) <= tol; });
  }
  return false;
}

double NotSchedule::t_not(double omega, int n) const {
  if (n < 0) throw PreconditionError("schedule index n must be >= 0");
  return (slope * n + offset) * kPi / omega;
}

std::vector<NotRegime> predict_regimes(const RotatingFieldParams& params, const IntBounds& bounds) {
  params.validate();
  const double w = params.omega;
  const double b0 = params.b0;
  const double om = params.detuning();
  std::vector<NotRegime> out;

  if (close_rel(w * w, b0 * b0 + om * om, w * w)) {
    NotRegime r;
    r.case_id = 1;
    r.constraints = "omega^2 = b0^2 + (b3 - omega/2)^2";
    r.schedules.push_back({2.0, 1.0, equator_class()});
    out.push_back(std::move(r));
  }
  if (!close_rel(params.b3, 0.5 * w, w)) return out;

  const double m2 = std::round((2.0 * b0 / w - 1.0) / 2.0);
  if (m2 >= 0.0 && m2 <= bounds.m_max && close_rel(b0, (2.0 * m2 + 1.0) * 0.5 * w, w)) {
    NotRegime r;
    r.case_id = 2;
    r.m = static_cast<int>(m2);
    r.constraints = "b3 = omega/2, b0 = (2m+1) omega/2";
    r.schedules.push_back({2.0, 1.0, pole_class()});
    r.schedules.push_back({2.0, 1.0, phase_class({0.0, kPi}, params.phi, "b0/bpi (p0 = l pi, any q0)")});
    out.push_back(std::move(r));
  }
  if (close_rel(b0, w, w)) {
    NotRegime r;
    r.case_id = 3;
    r.constraints = "b3 = omega/2, b0 = omega";
    r.schedules.push_back({1.0, 0.5, pole_class()});
    // l even: p0 = 3pi/4, 7pi/4, eps = 1; l odd: p0 = 5pi/4, pi/4, eps = 3.
    r.schedules.push_back(
        {2.0, 0.5, phase_class({0.75 * kPi, 1.75 * kPi}, params.phi, "b3pi/4, b7pi/4 (l even, eps = 1)")});
    r.schedules.push_back(
        {2.0, 1.5, phase_class({1.25 * kPi, 0.25 * kPi}, params.phi, "b5pi/4, bpi/4 (l odd, eps = 3)")});
    out.push_back(std::move(r));
  }
  if (b0 > 0.0) {
    const double m4 = std::round(w / (4.0 * b0));
    if (m4 >= 1.0 && m4 <= bounds.m_max && close_rel(b0, w / (4.0 * m4), w)) {
      NotRegime r;
      r.case_id = 4;
      r.m = static_cast<int>(m4);
      r.constraints = "b3 = omega/2, b0 = omega/(4m)";
      r.schedules.push_back(
          {4.0 * m4, 2.0 * m4, phase_class({0.5 * kPi, 1.5 * kPi}, params.phi, "bpi/2, b3pi/2 (p0 = (l+1/2) pi)")});
      out.push_back(std::move(r));
    }
  }
  return out;
}

bool verify_regime(const RotatingFieldParams& params, const NotRegime& regime, int n_max, double tol) {
  const double qs[] = {-0.9, -0.5, -0.1, 0.0, 0.3, 0.7, 0.95};
  const double ps[] = {0.0, 0.4, 1.3, 2.5, 3.9, 5.6};
  for (const auto& sched : regime.schedules) {
    std::vector<CanonicalState> members;
    switch (sched.initial_class.kind) {
      case ClassKind::equator:
        for (double p : ps) members.emplace_back(0.0, p);
        break;
      case ClassKind::poles:
        members.emplace_back(-1.0, 0.0);
        members.emplace_back(1.0, 0.0);
        break;
      case ClassKind::phase_lines:
        for (double p : sched.initial_class.phases) {
          for (double q : qs) members.emplace_back(q, p);
        }
        break;
    }
    for (int n = 0; n <= n_max; ++n) {
      const double t = sched.t_not(params.omega, n);
      for (const auto& ic : members) {
        if (exact_overlap_r(params, ic, t) > -1.0 + tol) return false;
      }
    }
  }
  return true;
}

double overlap_expression(int case_id, const CanonicalState& initial, int l, bool printed_case1) {
  const double q2 = initial.q() * initial.q();
  const double p0 = initial.p();
  switch (case_id) {
    case 1:
      return printed_case1 ? 1.0 - 2.0 * q2 : 2.0 * q2 - 1.0;
    case 2:
      return -q2 + (q2 - 1.0) * std::cos(2.0 * p0);
    case 3: {
      const double sign = (l % 2 == 0) ? -1.0 : 1.0;  // (-1)^(l+1)
      return -q2 + sign * (q2 - 1.0) * std::sin(2.0 * p0);
    }
    case 4:
      return -q2 + (1.0 - q2) * std::cos(2.0 * p0);
    default:
      throw PreconditionError("case_id must be 1, 2, 3 or 4");
  }
}

NotDetection detect_not(const FieldSpec& spec, const CanonicalState& initial, double t_max,
                        const DetectSettings& settings) {
  validate(spec);
  if (!(t_max > 0.0)) throw PreconditionError("detect_not requires t_max > 0");
  if (!(settings.tol > 0.0 && settings.tol <= 0.1)) throw PreconditionError("detect_not requires tol in (0, 0.1]");
  if (settings.samples_per_period < 200) throw PreconditionError("detect_not needs >= 200 samples per period");

  // Sampling period: the drive period, or the precession period of a
  // constant field.
  double T;
  if (is_periodic(spec)) {
    T = period(spec);
    // Fast precession must be resolved too.
    const double bmax = field_at(spec, 0.0).norm() + field_at(spec, 0.25 * T).norm();
    if (bmax > 0.0) T = std::min(T, kTwoPi / bmax);
  } else {
    const double b = field_at(spec, 0.0).norm();
    T = b > 0.0 ? kTwoPi / b : t_max;
  }
  const auto n = static_cast<std::size_t>(
      std::ceil(t_max / T * static_cast<double>(settings.samples_per_period)));

  const BlochVector s0 = bloch_from_canonical(initial);
  const BlochSolution sol = solve_bloch(spec, s0, t_max, settings.integrator);
  const auto overlap_at = [&](double t) { return sol(t).normalized().dot(s0.vec()); };

  NotDetection det;
  det.times = uniform_grid(t_max, n);
  det.overlap.reserve(det.times.size());
  for (double t : det.times) det.overlap.push_back(t == 0.0 ? 1.0 : overlap_at(t));

  const auto& o = det.overlap;
  const auto& ts = det.times;
  for (std::size_t i = 1; i + 1 < o.size(); ++i) {
    if (o[i] < o[i - 1] && o[i] <= o[i + 1]) {
      const auto [t, v] = golden_section_min(overlap_at, ts[i - 1], ts[i + 1], 1e-10 * std::max(1.0, ts[i]));
      det.events.push_back({t, std::max(v, -1.0)});
    }
  }
  // A minimum at the end of the window counts too.
  if (o.size() >= 2 && o.back() < o[o.size() - 2]) det.events.push_back({ts.back(), std::max(o.back(), -1.0)});

  const auto first_hit = std::find_if(det.events.begin(), det.events.end(),
                                      [&](const NotEvent& e) { return e.overlap <= -1.0 + settings.tol; });
  if (first_hit != det.events.end()) {
    det.t_star = first_hit->t;
    det.min_overlap = first_hit->overlap;
  } else if (!det.events.empty()) {
    const auto deepest = std::min_element(det.events.begin(), det.events.end(),
                                          [](const NotEvent& a, const NotEvent& b) { return a.overlap < b.overlap; });
    det.t_star = deepest->t;
    det.min_overlap = deepest->overlap;
  } else {
    const auto it = std::min_element(o.begin(), o.end());
    det.t_star = ts[static_cast<std::size_t>(it - o.begin())];
    det.min_overlap = *it;
  }
  det.achieved = det.min_overlap <= -1.0 + settings.tol;
  return det;
}

std::optional<NotEvent> nearest_event(const NotDetection& detection, double t) {
  if (detection.events.empty()) return std::nullopt;
  return *std::min_element(detection.events.begin(), detection.events.end(), [t](const NotEvent& a, const NotEvent& b) {
    return std::abs(a.t - t) < std::abs(b.t - t);
  });
}

double resonance_function(double gamma, double b0, double b3) {
  const double d = b3 - 0.5 * gamma;
  return gamma * gamma - b0 * b0 - d * d;
}

ResonanceResult nr_resonance_search(double omega, double b3, double b0_min, double b0_max,
                                    const ResonanceSettings& settings) {
  if (!(omega > 0.0)) throw PreconditionError("nr_resonance_search requires omega > 0");
  if (!(b0_min < b0_max)) throw PreconditionError("nr_resonance_search requires b0_min < b0_max");
  const CanonicalState seed(settings.seed_q0, settings.seed_p0);
  const auto g = [&](double b0) {
    const double gamma = fit_gamma_nr({b0, b3, omega}, seed, settings.n_periods, settings.integrator).gamma;
    return resonance_function(gamma, b0, b3);
  };
  const BisectionResult b = bisect(g, b0_min, b0_max, 1e-6 * omega * omega, settings.max_iter);
  ResonanceResult r;
  r.b0_star = b.x;
  r.g_value = b.fx;
  r.iterations = b.iterations;
  r.converged = b.converged;
  // Recompute at the returned root so gamma_star matches b0_star.
  r.gamma_star = fit_gamma_nr({b.x, b3, omega}, seed, settings.n_periods, settings.integrator).gamma;
  return r;
}

double mean_not_time(double b0) {
  if (!(b0 > 0.0)) throw DomainError("mean_not_time requires b0 > 0");
  return kPi / (2.0 * b0);
}

}  // namespace qgyro

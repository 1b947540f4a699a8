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

#include "qgyro/strobe.hpp"

#include <algorithm>
#include <cmath>

#include "qgyro/errors.hpp"
#include "qgyro/parallel.hpp"

namespace qgyro {

std::vector<double> strobe_times(double period, std::size_t n_periods) {
  std::vector<double> t(n_periods + 1);
  for (std::size_t k = 0; k <= n_periods; ++k) t[k] = static_cast<double>(k) * period;
  return t;
}

StroboscopicMap stroboscopic_map(const FieldSpec& spec, std::span<const CanonicalState> initials,
                                 std::size_t n_periods, const IntegratorConfig& cfg, unsigned jobs) {
  validate(spec);
  const double T = period(spec);
  const std::vector<double> times = strobe_times(T, n_periods);
  StroboscopicMap map;
  map.spec = spec;
  map.n_periods = n_periods;
  map.orbits = parallel_map(initials.size(), jobs, [&](std::size_t i) {
    const Trajectory traj = integrate_bloch(spec, bloch_from_canonical(initials[i]), times, cfg);
    std::vector<StrobePoint> orbit(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      orbit[k] = {k, traj.times[k], traj.canonical[k].q(), traj.canonical[k].p(), traj.energies[k],
                  traj.states[k].vec()};
    }
    return orbit;
  });
  return map;
}

// --- level curves ---------------------------------------------------------

double ContourCurve::residual(double q, double p) const {
  return a * std::sqrt(std::max(0.0, 1.0 - q * q)) * std::cos(p - shift) - c * q - level;
}

std::vector<double> solve_level_q(double a, double c, double shift, double level, double p) {
  const double scale = std::max({std::abs(a), std::abs(c), std::abs(level), 1e-300});
  const double ac = a * std::cos(p - shift);
  const auto residual = [&](double q) { return ac * std::sqrt(std::max(0.0, 1.0 - q * q)) - c * q - level; };
  const double tol = 1e-9 * std::max(1.0, scale);
  std::vector<double> roots;
  const auto keep = [&](double q) {
    if (!(std::abs(q) <= 1.0 + 1e-12)) return;
    q = std::clamp(q, -1.0, 1.0);
    if (std::abs(residual(q)) > tol) return;
    for (double r : roots) {
      if (std::abs(r - q) < 1e-13) return;
    }
    roots.push_back(q);
  };
  // (ac^2 + c^2) q^2 + 2 level c q + (level^2 - ac^2) = 0, with the
  // discriminant written as ac^2 (ac^2 + c^2 - level^2) for accuracy.
  const double A = ac * ac + c * c;
  if (A <= 1e-28 * scale * scale) return roots;  // a cos = 0 and c = 0: no q-dependence
  double inner = ac * ac + c * c - level * level;
  if (inner < 0.0 && inner > -1e-12 * scale * scale) inner = 0.0;
  if (inner < 0.0) return roots;
  const double root = std::abs(ac) * std::sqrt(inner);
  keep((-level * c + root) / A);
  keep((-level * c - root) / A);
  std::sort(roots.begin(), roots.end());
  return roots;
}

ContourCurve sweep_contour(double a, double c, double shift, double level, ContourKind kind, std::size_t n_points) {
  if (n_points < 4) throw PreconditionError("contour sweep needs at least 4 points");
  ContourCurve curve;
  curve.level = level;
  curve.a = a;
  curve.c = c;
  curve.shift = shift;
  curve.kind = kind;
  std::vector<double> ps;
  ps.reserve(n_points + 4);
  for (std::size_t i = 0; i < n_points; ++i) {
    ps.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(n_points));
  }
  for (double extra : {0.0, 0.5 * kPi, kPi, 1.5 * kPi}) ps.push_back(wrap_angle(shift + extra));
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  const double scale = std::max({std::abs(a), std::abs(c), std::abs(level), 1e-300});
  for (double p : ps) {
    // Nodal line of the cosine with c = 0: every q solves the equation iff
    // level = 0 there.
    const bool nodal = std::abs(a * std::cos(p - shift)) <= 1e-14 * scale && std::abs(c) <= 1e-14 * scale;
    if (nodal) {
      if (std::abs(level) <= 1e-12 * scale) {
        for (std::size_t j = 0; j < n_points; ++j) {
          curve.points.push_back({-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n_points - 1), p});
        }
      }
      continue;
    }
    for (double q : solve_level_q(a, c, shift, level, p)) curve.points.push_back({q, p});
  }
  return curve;
}

ContourCurve contour_r(const RotatingFieldParams& params, const CanonicalState& initial, std::size_t n_points) {
  params.validate();
  const double a = 2.0 * params.b0;
  const double c = 2.0 * params.detuning();
  const double q0 = initial.q();
  const double level = a * std::sqrt(1.0 - q0 * q0) * std::cos(initial.p() - params.phi) - c * q0;
  ContourCurve curve = sweep_contour(a, c, params.phi, level, ContourKind::r_map, n_points);
  if (curve.points.empty()) throw NumericalError("contour_r: no real solutions at the initial-condition level");
  return curve;
}

ContourCurve contour_nr(const NonrotatingFieldParams& params, double gamma, const CanonicalState& initial,
                        std::size_t n_points) {
  params.validate();
  const double a = 2.0 * params.b0;
  const double c = 2.0 * params.b3 - gamma;
  const double q0 = initial.q();
  const double level = a * std::sqrt(1.0 - q0 * q0) * std::cos(initial.p()) - c * q0;
  ContourCurve curve = sweep_contour(a, c, 0.0, level, ContourKind::nr_map, n_points);
  if (curve.points.empty()) throw NumericalError("contour_nr: no real solutions at the initial-condition level");
  return curve;
}

// --- commensurability -------------------------------------------------------

Commensurability classify_ratio(double ratio, double tol, long long max_denominator) {
  if (!std::isfinite(ratio) || ratio < 0.0) throw PreconditionError("ratio must be finite and >= 0");
  if (max_denominator < 1) throw PreconditionError("max_denominator must be >= 1");
  Commensurability out;
  out.ratio = ratio;
  // Convergents h/k of the continued fraction of `ratio`.
  long long h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  double x = ratio;
  out.numerator = static_cast<long long>(std::floor(ratio));
  out.denominator = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(x);
    if (fl > 9.0e15) break;
    const auto an = static_cast<long long>(fl);
    const long long h = an * h_prev + h_prev2;
    const long long k = an * k_prev + k_prev2;
    if (k > max_denominator) break;
    out.numerator = h;
    out.denominator = k;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  out.error = std::abs(ratio - static_cast<double>(out.numerator) / static_cast<double>(out.denominator));
  out.rational = out.error < tol;
  return out;
}

Commensurability classify_commensurability(const RotatingFieldParams& params, double tol, long long max_denominator) {
  params.validate();
  return classify_ratio(params.amplitude() / params.omega, tol, max_denominator);
}

// --- separatrix -------------------------------------------------------------

Separatrix separatrix_r(const RotatingFieldParams& params, std::size_t n_points) {
  params.validate();
  const double om = params.detuning();
  if (params.b0 == 0.0 && om == 0.0) throw PreconditionError("separatrix undefined without a rotating-frame field");
  const double a = 2.0 * params.b0;
  const double c = 2.0 * om;
  Separatrix sep;
  if (om == 0.0) {
    // Level 0 is attained on the lines cos(p - phi) = 0 for every q.
    sep.degenerate = true;
    for (int side = 0; side < 2; ++side) {
      ContourCurve& curve = side == 0 ? sep.through_south : sep.through_north;
      curve.level = 0.0;
      curve.a = a;
      curve.c = 0.0;
      curve.shift = params.phi;
      curve.kind = ContourKind::separatrix;
      curve.degenerate = true;
      const double p = wrap_angle(params.phi + (side == 0 ? 0.5 : 1.5) * kPi);
      for (std::size_t j = 0; j < n_points; ++j) {
        curve.points.push_back({-1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n_points - 1), p});
      }
    }
    return sep;
  }
  sep.through_south = sweep_contour(a, c, params.phi, c, ContourKind::separatrix, n_points);
  sep.through_north = sweep_contour(a, c, params.phi, -c, ContourKind::separatrix, n_points);
  return sep;
}

// --- orbit diagnostics -------------------------------------------------------

std::size_t orbit_closure(std::span<const StrobePoint> orbit, double tol) {
  if (orbit.empty()) return 0;
  for (std::size_t k = 1; k < orbit.size(); ++k) {
    if ((orbit[k].s - orbit[0].s).norm() < tol) return k;
  }
  return 0;
}

std::size_t distinct_points(std::span<const StrobePoint> orbit, double resolution) {
  std::vector<Vec3> reps;
  for (const auto& pt : orbit) {
    const bool seen =
        std::any_of(reps.begin(), reps.end(), [&](const Vec3& r) { return (r - pt.s).norm() < resolution; });
    if (!seen) reps.push_back(pt.s);
  }
  return reps.size();
}

}  // namespace qgyro

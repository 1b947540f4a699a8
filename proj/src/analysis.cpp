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

#include "qgyro/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qgyro/errors.hpp"
#include "qgyro/numerics.hpp"
#include "qgyro/parallel.hpp"

namespace qgyro {

// --- integrability witness ---------------------------------------------------

LyapunovResult lyapunov_estimate(const FieldSpec& spec, const BlochVector& s0, double delta0, std::size_t n_periods,
                                 const IntegratorConfig& cfg) {
  if (!(delta0 > 0.0 && delta0 <= 1e-6)) throw PreconditionError("lyapunov_estimate requires 0 < delta0 <= 1e-6");
  if (n_periods == 0) throw PreconditionError("lyapunov_estimate requires n_periods >= 1");
  // Perturb along a unit direction orthogonal to s0.
  const Vec3 v = s0.vec();
  const Vec3 helper = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e = v.cross(helper).normalized();
  const BlochVector s1 = BlochVector::normalized(v + delta0 * e);

  const std::vector<double> times = strobe_times(period(spec), n_periods);
  // The neighbour is carried as s0 + delta(t) so D(t) = |delta(t)| keeps full
  // relative precision even for D(0) ~ 1e-8.
  const auto [a, delta] = integrate_bloch_separation(spec, s0, s1.vec() - v, times, cfg);
  LyapunovResult res;
  res.d0 = delta[0].norm();
  res.times = times;
  res.ratio.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) res.ratio.push_back(delta[k].norm() / res.d0);
  res.lambda = std::log(res.ratio.back()) / times.back();
  return res;
}

// --- gamma slope -------------------------------------------------------------

GammaFit fit_gamma(const StroboscopicMap& map, std::size_t ic_index) {
  if (ic_index >= map.orbits.size()) throw PreconditionError("fit_gamma: initial-condition index out of range");
  const auto& orbit = map.orbits[ic_index];
  std::vector<double> q, h;
  q.reserve(orbit.size());
  h.reserve(orbit.size());
  for (const auto& pt : orbit) {
    q.push_back(pt.q);
    h.push_back(pt.energy);
  }
  const LinearFit fit = least_squares_line(q, h, 1e-12);
  return {-fit.slope, fit.intercept, fit.max_residual, fit.n_points};
}

GammaFit fit_gamma_nr(const NonrotatingFieldParams& params, const CanonicalState& initial, std::size_t n_periods,
                      const IntegratorConfig& cfg) {
  const CanonicalState ics[] = {initial};
  return fit_gamma(stroboscopic_map(params, ics, n_periods, cfg), 0);
}

// --- potential-weighted averages --------------------------------------------

AverageSeries weighted_average_series(const NonrotatingFieldParams& params, const CanonicalState& initial,
                                      std::size_t n_periods, const IntegratorConfig& cfg, const WeightFunction& f) {
  params.validate();
  if (n_periods == 0) throw PreconditionError("weighted_average_series requires n_periods >= 1");
  const double T = params.period();
  const double t_max = static_cast<double>(n_periods) * T;
  const BlochSolution sol = solve_bloch(params, bloch_from_canonical(initial), t_max, cfg);
  const double scale = 4.0 * params.b0 * params.b3;
  const auto vdot = [&](double t) { return scale * sol(t).y(); };
  const auto weight = [&](double t) {
    const double phase = params.omega * std::fmod(t, T);
    return f ? f(phase) : std::cos(phase);
  };

  // Step boundaries are where the interpolant changes polynomial piece.
  const std::vector<double> knots = sol.knots();
  double vmax = 0.0;
  for (double t : knots) vmax = std::max(vmax, std::abs(vdot(t)));

  AverageSeries out;
  out.period = T;
  out.t_max = t_max;
  out.epsilon = 1e-12 * vmax * T;
  const double abs_tol = std::max(1e-13 * vmax * T, 1e-300);

  const auto window_breaks = [&](double a, double b) {
    std::vector<double> br{a};
    auto it = std::upper_bound(knots.begin(), knots.end(), a);
    for (; it != knots.end() && *it < b; ++it) br.push_back(*it);
    br.push_back(b);
    return br;
  };

  out.per_period.reserve(n_periods);
  double num_total = 0.0, den_total = 0.0, mean = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < n_periods; ++k) {
    const double a = static_cast<double>(k) * T;
    const double b = static_cast<double>(k + 1) * T;
    const auto br = window_breaks(a, b);
    const double num = integrate_gk([&](double t) { return weight(t) * vdot(t); }, br, abs_tol, 1e-10).value;
    const double den = integrate_gk(vdot, br, abs_tol, 1e-10).value;
    AverageEntry e;
    e.k = k;
    e.numerator = num;
    e.denominator = den;
    e.flagged = !(std::abs(den) >= out.epsilon) || den == 0.0;
    e.f_avg = e.flagged ? 0.0 : num / den;
    if (e.flagged) {
      ++out.flagged_count;
    } else {
      mean += e.f_avg;
      ++used;
    }
    num_total += num;
    den_total += den;
    out.per_period.push_back(e);
  }
  out.mean_per_period = used > 0 ? mean / static_cast<double>(used) : 0.0;
  out.aggregate_flagged = !(std::abs(den_total) >= out.epsilon) || den_total == 0.0;
  out.aggregate = out.aggregate_flagged ? 0.0 : num_total / den_total;
  return out;
}

ExpansionTerms expansion_terms(double omega, std::size_t n_max) {
  if (!(omega > 0.0)) throw PreconditionError("expansion_terms requires omega > 0");
  // C_n = int_0^2pi phi^n cos(phi), S_n = int_0^2pi phi^n sin(phi):
  //   C_0 = 0, S_0 = 0, C_n = -n S_(n-1), S_n = -(2pi)^n + n C_(n-1).
  ExpansionTerms out;
  out.omega = omega;
  out.a.resize(n_max + 1);
  out.b.resize(n_max + 1);
  double c = 0.0, s = 0.0;
  double two_pi_n = 1.0;  // (2 pi)^n
  for (std::size_t n = 0; n <= n_max; ++n) {
    const auto dn = static_cast<double>(n);
    if (n > 0) {
      two_pi_n *= kTwoPi;
      const double c_new = -dn * s;
      const double s_new = -two_pi_n + dn * c;
      c = c_new;
      s = s_new;
    }
    out.a[n] = c / std::pow(omega, dn + 1.0);
    out.b[n] = std::pow(kTwoPi / omega, dn + 1.0) / (dn + 1.0);
  }
  return out;
}

double high_freq_average(const NonrotatingFieldParams& params) {
  return -4.0 * (params.b0 * params.b0 + params.b3 * params.b3) / (params.omega * params.omega);
}

double gamma_prediction(const NonrotatingFieldParams& params) {
  return 2.0 * params.b3 * (1.0 - high_freq_average(params));
}

std::vector<GammaSweepRow> gamma_sweep(double b0, double b3, std::span<const double> omegas,
                                       const CanonicalState& initial, std::size_t n_periods,
                                       const IntegratorConfig& cfg, unsigned jobs) {
  return parallel_map(omegas.size(), jobs, [&](std::size_t i) {
    const NonrotatingFieldParams p{b0, b3, omegas[i]};
    GammaSweepRow row;
    row.omega = omegas[i];
    row.gamma_fit = fit_gamma_nr(p, initial, n_periods, cfg).gamma;
    row.gamma_pred = gamma_prediction(p);
    row.rel_err = std::abs(row.gamma_fit - row.gamma_pred) / std::abs(row.gamma_fit);
    return row;
  });
}

// --- strong coupling ---------------------------------------------------------

StrongCouplingResult strong_coupling(const NonrotatingFieldParams& params) {
  params.validate();
  StrongCouplingResult r;
  r.bessel_argument = 2.0 * params.b3 / params.omega;
  r.j0 = bessel_j0(r.bessel_argument);
  r.omega0 = params.b0 * r.j0;
  r.localized = std::abs(r.j0) < 1e-6;
  r.b0_period = params.b0 * params.period();
  return r;
}

double mean_map_level(const StrongCouplingResult& result, const CanonicalState& initial) {
  const double q0 = initial.q();
  return 2.0 * result.omega0 * std::sqrt(1.0 - q0 * q0) * std::cos(initial.p());
}

LocalizationReport localization_check(const NonrotatingFieldParams& params, const CanonicalState& initial,
                                      double t_max, const IntegratorConfig& cfg) {
  params.validate();
  if (t_max <= 0.0) {
    if (!(params.b0 > 0.0)) throw PreconditionError("localization_check needs t_max or b0 > 0");
    t_max = 1.0 / params.b0;
  }
  LocalizationReport rep;
  rep.coupling = strong_coupling(params);
  const auto n = static_cast<std::size_t>(std::floor(t_max / params.period()));
  const CanonicalState ics[] = {initial};
  const StroboscopicMap map = stroboscopic_map(params, ics, n, cfg);
  for (const auto& pt : map.orbits[0]) rep.max_dq = std::max(rep.max_dq, std::abs(pt.q - initial.q()));
  rep.strobes = map.orbits[0].size();
  return rep;
}

// --- rotating-wave error -----------------------------------------------------

RwaErrorReport rwa_error(const RwaParams& params, const QubitState& psi0, std::size_t n_samples,
                         bool allow_off_resonance, const OracleConfig& oracle) {
  params.validate();
  if (!allow_off_resonance && std::abs(params.omega - 2.0 * params.b0) > 1e-12 * std::max(1.0, params.omega)) {
    throw PreconditionError("rwa_error requires resonance omega = 2 b0");
  }
  if (n_samples == 0) throw PreconditionError("rwa_error requires n_samples >= 1");
  RwaErrorReport rep;
  rep.window = params.b3 != 0.0 ? params.omega / std::abs(params.b3) : 100.0 * kTwoPi / params.omega;
  const std::vector<double> grid = uniform_grid(rep.window, n_samples);
  const auto psi = propagate(params.field(), psi0, grid, oracle);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = state_distance(psi[i], rwa_solution(params, psi0, grid[i]));
    if (e > rep.max_error) {
      rep.max_error = e;
      rep.t_at_max = grid[i];
    }
  }
  return rep;
}

}  // namespace qgyro

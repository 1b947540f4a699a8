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

// Analysis of nonrotating-field dynamics: integrability witnesses, the
// stroboscopic energy slope gamma, potential-weighted drive averages, the
// high-frequency and strong-coupling limits, and rotating-wave error.
//
// At strobe times the nonrotating-field energy obeys H_k = E - gamma q_k. With
// V = -2 b3 q the exact identity
//   gamma = 2 b3 (1 - <f>),   <f> = int cos(wt) dV / int dV,
// links the slope to the potential-weighted average of the drive.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qgyro/core.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/fields.hpp"
#include "qgyro/qoracle.hpp"
#include "qgyro/strobe.hpp"

namespace qgyro {

// --- integrability witness ---------------------------------------------------

struct LyapunovResult {
  double lambda = 0.0;      // (1/t) ln(D(t) / D(0)) at the last strobe
  double d0 = 0.0;          // initial separation
  std::vector<double> times;
  std::vector<double> ratio;  // D(t_k) / D(0)
};

/// Integrates s0 together with the separation to a neighbour at distance
/// ~delta0 and samples D(t) = |delta(t)| at every period. Requires
/// 0 < delta0 <= 1e-6.
LyapunovResult lyapunov_estimate(const FieldSpec& spec, const BlochVector& s0, double delta0, std::size_t n_periods,
                                 const IntegratorConfig& cfg = {});

// --- gamma slope -------------------------------------------------------------

struct GammaFit {
  double gamma = 0.0;      // minus the slope of H_k against q_k
  double intercept = 0.0;  // E(q0, p0)
  double max_residual = 0.0;
  std::size_t n_points = 0;
};

/// Least-squares fit of H_k = E - gamma q_k on one orbit of the map. Throws
/// DegenerateError for fixed-point orbits (q variance <= 1e-12).
GammaFit fit_gamma(const StroboscopicMap& map, std::size_t ic_index);

/// Convenience: strobe one nonrotating-field orbit and fit it.
GammaFit fit_gamma_nr(const NonrotatingFieldParams& params, const CanonicalState& initial, std::size_t n_periods = 200,
                      const IntegratorConfig& cfg = {});

// --- potential-weighted averages --------------------------------------------

/// Drive profile f as a function of the phase omega t.
using WeightFunction = std::function<double(double)>;

struct AverageEntry {
  std::size_t k = 0;
  double f_avg = 0.0;
  double numerator = 0.0;    // int f dV over [t_k, t_k+1]
  double denominator = 0.0;  // int dV over [t_k, t_k+1]
  bool flagged = false;      // |denominator| < epsilon; excluded from means
};

struct AverageSeries {
  std::vector<AverageEntry> per_period;
  /// Whole-window average int f dV / int dV over [0, n T].
  double aggregate = 0.0;
  bool aggregate_flagged = false;
  /// Mean of the unflagged per-period values.
  double mean_per_period = 0.0;
  std::size_t flagged_count = 0;
  double period = 0.0;
  double t_max = 0.0;
  double epsilon = 0.0;  // denominator guard 1e-12 max|dV/dt| T
};

/// Per-period and whole-window averages of f(omega t) weighted by
/// dV/dt = 4 b0 b3 S2, by adaptive Gauss-Kronrod quadrature over the
/// integrator's continuous solution.
AverageSeries weighted_average_series(const NonrotatingFieldParams& params, const CanonicalState& initial,
                                      std::size_t n_periods, const IntegratorConfig& cfg = {},
                                      const WeightFunction& f = {});

struct ExpansionTerms {
  double omega = 1.0;
  std::vector<double> a;  // A_n = omega^-(n+1) int_0^2pi cos(phi) phi^n dphi
  std::vector<double> b;  // B_n = (2 pi / omega)^(n+1) / (n + 1)
};

/// Closed-form moments by repeated integration by parts.
ExpansionTerms expansion_terms(double omega, std::size_t n_max);

/// High-frequency estimate <f> = -4 (b0^2 + b3^2) / omega^2.
double high_freq_average(const NonrotatingFieldParams& params);

/// gamma_pred = 2 b3 (1 - high_freq_average).
double gamma_prediction(const NonrotatingFieldParams& params);

struct GammaSweepRow {
  double omega = 0.0;
  double gamma_fit = 0.0;
  double gamma_pred = 0.0;
  double rel_err = 0.0;  // |gamma_fit - gamma_pred| / gamma_fit
};

/// Fitted versus predicted gamma for each omega (deterministic order).
std::vector<GammaSweepRow> gamma_sweep(double b0, double b3, std::span<const double> omegas,
                                       const CanonicalState& initial, std::size_t n_periods = 200,
                                       const IntegratorConfig& cfg = {}, unsigned jobs = 1);

// --- strong coupling ---------------------------------------------------------

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

struct StrongCouplingResult {
  double omega0 = 0.0;            // b0 J0(2 b3 / omega)
  double bessel_argument = 0.0;   // 2 b3 / omega
  double j0 = 0.0;
  bool localized = false;         // |J0| < 1e-6
  double b0_period = 0.0;         // b0 T; the mean-field picture needs b0 T << 1
};

StrongCouplingResult strong_coupling(const NonrotatingFieldParams& params);

/// Mean-map level K_m = 2 omega0 sqrt(1 - q0^2) cos p0.
double mean_map_level(const StrongCouplingResult& result, const CanonicalState& initial);

struct LocalizationReport {
  double max_dq = 0.0;  // max_k |q_k - q0| over strobes with t_k <= t_max
  std::size_t strobes = 0;
  StrongCouplingResult coupling;
};

/// Strobes the nonrotating field up to t_max (default 1 / b0).
LocalizationReport localization_check(const NonrotatingFieldParams& params, const CanonicalState& initial,
                                      double t_max = 0.0, const IntegratorConfig& cfg = {});

// --- rotating-wave error -----------------------------------------------------

struct RwaErrorReport {
  double max_error = 0.0;
  double t_at_max = 0.0;
  double window = 0.0;
};

/// max over a uniform grid of n_samples + 1 points in [0, omega / b3] of
/// |psi_NR(t) - psi_RWA(t)|. Requires omega = 2 b0 (within 1e-12) unless
/// allow_off_resonance is set. For b3 = 0 the window is 100 periods.
RwaErrorReport rwa_error(const RwaParams& params, const QubitState& psi0, std::size_t n_samples = 1000,
                         bool allow_off_resonance = false, const OracleConfig& oracle = {});

}  // namespace qgyro

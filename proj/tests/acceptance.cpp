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

// Acceptance checks. Each criterion prints one line:
//   [PASS] <n> <title>: <measurements>
//   [FAIL] <n> <title>: <measurements>
// Usage: qgyro_acceptance [--criterion N]   (default: all)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgyro/analysis.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/errors.hpp"
#include "qgyro/exact.hpp"
#include "qgyro/notgate.hpp"
#include "qgyro/qoracle.hpp"
#include "qgyro/strobe.hpp"

using namespace qgyro;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

IntegratorConfig tight() {
  IntegratorConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  return c;
}

const NonrotatingFieldParams kRef{1.0, 1.5, 3.0};

// 1. gamma for the reference field.
Outcome gamma_reproduction() {
  const double g = fit_gamma_nr(kRef, CanonicalState(0.5, 1.0), 200).gamma;
  const double rel = std::abs(g - 4.9559) / 4.9559;
  return {rel < 5e-3, "gamma = " + fmt("%.6f", g) + ", rel. deviation from 4.9559 = " + fmt("%.2e", rel)};
}

// 2. gamma does not depend on the initial condition.
Outcome gamma_universality() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uq(-0.9, 0.9), up(0.0, kTwoPi);
  std::vector<GammaFit> fits;
  while (fits.size() < 10) {
    try {
      fits.push_back(fit_gamma_nr(kRef, CanonicalState(uq(rng), up(rng)), 200));
    } catch (const DegenerateError&) {
      // Fixed-point orbit: draw again.
    }
  }
  double lo = fits[0].gamma, hi = lo, mean = 0.0;
  for (const auto& f : fits) {
    lo = std::min(lo, f.gamma);
    hi = std::max(hi, f.gamma);
    mean += f.gamma / 10.0;
  }
  double min_gap = 1e300;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    for (std::size_t j = i + 1; j < fits.size(); ++j) {
      min_gap = std::min(min_gap, std::abs(fits[i].intercept - fits[j].intercept));
    }
  }
  const double spread = (hi - lo) / mean;
  return {spread < 1e-3 && min_gap > 1e-6,
          "relative spread = " + fmt("%.2e", spread) + ", min intercept gap = " + fmt("%.3e", min_gap)};
}

// 3. Separation of nearby orbits stays at D(0).
Outcome integrability_witness() {
  const double T = kRef.period();
  double worst_dev = 0.0, worst_lambda = 0.0;
  for (const CanonicalState& c : {CanonicalState(0.5, 1.0), CanonicalState(-0.3, 4.0)}) {
    const LyapunovResult r = lyapunov_estimate(kRef, bloch_from_canonical(c), 1e-8, 1000, tight());
    for (double x : r.ratio) worst_dev = std::max(worst_dev, std::abs(x - 1.0));
    worst_lambda = std::max(worst_lambda, std::abs(r.lambda));
  }
  return {worst_dev <= 1e-6 && worst_lambda < 1e-3 / T,
          "max |D/D0 - 1| = " + fmt("%.2e", worst_dev) + ", max |lambda| = " + fmt("%.2e", worst_lambda) +
              " (limit " + fmt("%.2e", 1e-3 / T) + ")"};
}

// 4. Closed form, classical integrator and quantum propagator agree.
Outcome closed_form_agreement() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 2.0), uq(-0.95, 0.95), up(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const RotatingFieldParams p{u(rng), u(rng), u(rng), up(rng)};
    const CanonicalState c(uq(rng), up(rng));
    const auto grid = uniform_grid(100.0 * p.period(), 2000);
    const Trajectory tr = integrate_bloch(p, bloch_from_canonical(c), grid, tight());
    const auto psi = propagate(p, qubit_from_canonical(c), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Vec3 e = exact_bloch_r(p, c, grid[k]).vec();
      const Vec3 q = bloch_from_qubit(psi[k]).vec();
      worst = std::max({worst, (e - tr.states[k].vec()).norm(), (e - q).norm(), (q - tr.states[k].vec()).norm()});
    }
  }
  return {worst < 1e-8, "max pairwise |dS| over 20 sets x 100 periods = " + fmt("%.2e", worst)};
}

// 5. All four NOT regimes, plus case-2 sharpness.
Outcome not_cases() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uq(-1.0, 1.0), up(0.0, kTwoPi), ua(0.1, 1.4);
  std::vector<std::pair<int, RotatingFieldParams>> sets;
  for (int i = 0; i < 4; ++i) {
    const double w = 0.5 + i, a = ua(rng);  // omega^2 = b0^2 + Omega^2
    sets.push_back({1, {w * std::sin(a), 0.5 * w + w * std::cos(a), w, up(rng)}});
  }
  for (int m = 0; m <= 3; ++m) sets.push_back({2, {(2.0 * m + 1.0) * 0.5, 0.5, 1.0, up(rng)}});
  sets.push_back({3, {1.0, 0.5, 1.0, 0.0}});
  sets.push_back({3, {2.0, 1.0, 2.0, up(rng)}});
  for (int m = 1; m <= 3; ++m) sets.push_back({4, {1.0 / (4.0 * m), 0.5, 1.0, up(rng)}});

  double worst_in = -1.0;
  int checked = 0;
  bool all_found = true;
  for (const auto& [id, p] : sets) {
    const auto regimes = predict_regimes(p);
    const auto it = std::find_if(regimes.begin(), regimes.end(), [id = id](const NotRegime& r) { return r.case_id == id; });
    if (it == regimes.end()) {
      all_found = false;
      continue;
    }
    for (const auto& sched : it->schedules) {
      for (int s = 0; s < 50; ++s) {
        double q = uq(rng), ph = up(rng);
        const auto& cls = sched.initial_class;
        if (cls.kind == ClassKind::equator) q = 0.0;
        if (cls.kind == ClassKind::poles) q = (s % 2 == 0) ? -1.0 : 1.0;
        if (cls.kind == ClassKind::phase_lines) ph = cls.phases[static_cast<std::size_t>(s) % cls.phases.size()];
        const CanonicalState c(q, ph);
        for (int n = 0; n <= 3; ++n) {
          worst_in = std::max(worst_in, exact_overlap_r(p, c, sched.t_not(p.omega, n)));
          ++checked;
        }
      }
    }
  }
  // Case 2 sharpness: phases at least 0.1 away from l pi.
  double best_out = 1.0;
  for (int m = 0; m <= 3; ++m) {
    const RotatingFieldParams p{(2.0 * m + 1.0) * 0.5, 0.5, 1.0, 0.0};
    for (int s = 0; s < 50; ++s) {
      const double q = 0.95 * uq(rng);
      double ph = up(rng);
      while (std::min(angular_distance(ph, 0.0), angular_distance(ph, kPi)) < 0.1) ph = up(rng);
      for (int n = 0; n <= 3; ++n) {
        best_out = std::min(best_out, exact_overlap_r(p, CanonicalState(q, ph), (2.0 * n + 1.0) * kPi / p.omega));
      }
    }
  }
  return {all_found && worst_in <= -1.0 + 1e-8 && best_out > -1.0 + 1e-6,
          std::to_string(checked) + " in-class checks, max overlap = -1 + " + fmt("%.2e", worst_in + 1.0) +
              "; case-2 off-class min overlap = -1 + " + fmt("%.2e", best_out + 1.0)};
}

// 6. Nonrotating-field NOT resonance.
Outcome nr_resonance() {
  const ResonanceResult r = nr_resonance_search(1.0, 1.5, 0.5, 2.0);
  bool ok = r.converged && r.b0_star >= 1.27 && r.b0_star <= 1.29 && r.gamma_star >= 1.48 && r.gamma_star <= 1.49;
  std::ostringstream os;
  os << "b0* = " << fmt("%.5f", r.b0_star) << ", gamma* = " << fmt("%.5f", r.gamma_star);
  const double target = 5.0 * kPi;
  const NonrotatingFieldParams p{r.b0_star, 1.5, 1.0};
  for (double q0 : {-0.5, 0.0, 0.5}) {
    const NotDetection d = detect_not(p, CanonicalState(q0, kPi / 2), 1.1 * target);
    double best = 1.0, t_best = 0.0;
    for (const auto& e : d.events) {
      if (std::abs(e.t - target) <= 0.02 * target && e.overlap < best) {
        best = e.overlap;
        t_best = e.t;
      }
    }
    ok = ok && best <= -0.99;
    os << "; q0 = " << q0 << ": min overlap " << fmt("%.6f", best) << " at t = " << fmt("%.4f", t_best);
  }
  return {ok, os.str()};
}

// 7. Mean-field NOT time.
Outcome mean_field_not() {
  const NonrotatingFieldParams p{0.2, 0.2, 10.0};
  bool ok = true;
  std::ostringstream os;
  for (double q0 : {-0.5, 0.0, 0.3}) {
    const NotDetection d = detect_not(p, CanonicalState(q0, 1.5 * kPi), 20.0 * p.period());
    const double rel = std::abs(d.t_star - 7.854) / 7.854;
    ok = ok && d.achieved && rel < 0.02;
    os << (q0 == -0.5 ? "" : "; ") << "q0 = " << q0 << ": t* = " << fmt("%.4f", d.t_star);
  }
  return {ok, os.str()};
}

// 8. High-frequency gamma formula.
Outcome high_frequency_gamma() {
  const std::vector<double> omegas{20.0, 50.0, 100.0};
  const auto rows = gamma_sweep(1.0, 1.5, omegas, CanonicalState(0.5, 1.0), 200);
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : rows) {
    ok = ok && r.rel_err < 0.02;
    os << (r.omega == 20.0 ? "" : "; ") << "omega = " << r.omega << ": fit " << fmt("%.5f", r.gamma_fit) << " pred "
       << fmt("%.5f", r.gamma_pred) << " rel " << fmt("%.4f", r.rel_err);
  }
  return {ok, os.str()};
}

// 9. Averaging theorem: <f> -> 0 once many periods fit in 1 / b0.
Outcome averaging_regime() {
  const double omega = 10.0, T = kTwoPi / omega;
  const auto aggregate = [&](double b0) {
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(1.0 / b0 / T)));
    return weighted_average_series({b0, 1.0, omega}, CanonicalState(0.5, 1.0), n).aggregate;
  };
  const double b_long = 1.0 / (5.0 * T);  // t_max / T = 5
  const double b_short = 1.0 / (1.6 * T);  // t_max / T = 1.6
  double worst_long = 0.0, best_short = 1.0;
  for (double b0 : {b_long, 0.5 * b_long, 0.25 * b_long}) worst_long = std::max(worst_long, std::abs(aggregate(b0)));
  for (double b0 : {b_short, 1.5 * b_short}) best_short = std::min(best_short, std::abs(aggregate(b0)));
  return {worst_long < 0.01 && best_short > 0.01,
          "t_max/T >= 5: max |<f>| = " + fmt("%.4f", worst_long) + "; t_max/T <= 1.6: min |<f>| = " +
              fmt("%.4f", best_short)};
}

// 10. Rotating-wave error is O(b3 / omega).
Outcome rwa_scaling() {
  const QubitState psi0 = qubit_from_canonical(CanonicalState(0.3, 1.0));
  const RwaErrorReport a = rwa_error({1.0, 0.1, 2.0}, psi0);
  const RwaErrorReport b = rwa_error({1.0, 0.05, 2.0}, psi0);
  const double ratio = a.max_error / b.max_error;
  return {a.max_error <= 0.15 && ratio >= 1.5 && ratio <= 2.5,
          "err(0.05) = " + fmt("%.5f", a.max_error) + ", err(0.025) = " + fmt("%.5f", b.max_error) +
              ", ratio = " + fmt("%.3f", ratio)};
}

// 11. Dynamical localization at the first zero of J0.
Outcome dynamical_localization() {
  const double omega = 10.0;
  const NonrotatingFieldParams p{0.01, 0.5 * 2.404825557695773 * omega, omega};
  double worst = 0.0;
  for (const CanonicalState& c : {CanonicalState(0.3, 1.0), CanonicalState(-0.6, 4.0), CanonicalState(0.0, 0.0)}) {
    worst = std::max(worst, localization_check(p, c).max_dq);
  }
  return {worst < 0.05, "J0 = " + fmt("%.2e", strong_coupling(p).j0) + ", max |q_k - q0| = " + fmt("%.2e", worst)};
}

// 12. Commensurate orbits close; incommensurate orbits fill their curve.
Outcome commensurability() {
  const CanonicalState ics[] = {CanonicalState(0.5, 1.0)};
  const RotatingFieldParams rational{1.0, 44.5, 89.0, 0.0};
  const StroboscopicMap a = stroboscopic_map(rational, ics, 89);
  const std::size_t closure = orbit_closure(a.orbits[0], 1e-6);
  const RotatingFieldParams irrational{1.0, 0.0, 1.0, 0.0};
  const StroboscopicMap b = stroboscopic_map(irrational, ics, 1000);
  const std::size_t no_close = orbit_closure(b.orbits[0], 1e-6);
  const std::size_t distinct = distinct_points(b.orbits[0], 1e-6);
  const Commensurability ca = classify_commensurability(rational);
  const Commensurability cb = classify_commensurability(irrational);
  return {closure >= 1 && closure <= 89 && no_close == 0 && distinct >= 500 && ca.rational && !cb.rational,
          "B/omega = " + std::to_string(ca.numerator) + "/" + std::to_string(ca.denominator) + " closes after " +
              std::to_string(closure) + " strobes; sqrt(5): " + std::to_string(distinct) +
              " distinct points, closure = " + std::to_string(no_close)};
}

// 13. Strobe points lie on their invariant curves.
Outcome torus_membership() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.2, 2.0), uq(-0.9, 0.9), up(0.0, kTwoPi);
  double worst_r = 0.0;
  for (int i = 0; i < 10; ++i) {
    const RotatingFieldParams p{u(rng), u(rng), u(rng), up(rng)};
    const CanonicalState c(uq(rng), up(rng));
    const CanonicalState ics[] = {c};
    const ContourCurve curve = contour_r(p, c);
    const StroboscopicMap map = stroboscopic_map(p, ics, 200, tight());
    for (const auto& pt : map.orbits[0]) {
      worst_r = std::max(worst_r, std::abs(curve.residual(pt.q, pt.p)));
    }
  }
  double worst_nr = 0.0;
  for (int i = 0; i < 5; ++i) {
    const CanonicalState c(uq(rng), up(rng));
    const CanonicalState ics[] = {c};
    const StroboscopicMap map = stroboscopic_map(kRef, ics, 200);
    const ContourCurve curve = contour_nr(kRef, fit_gamma(map, 0).gamma, c);
    for (const auto& pt : map.orbits[0]) worst_nr = std::max(worst_nr, std::abs(curve.residual(pt.q, pt.p)));
  }
  return {worst_r < 1e-7 && worst_nr < 2e-2,
          "rotating max residual = " + fmt("%.2e", worst_r) + ", nonrotating max residual = " + fmt("%.2e", worst_nr)};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"gamma reproduction", gamma_reproduction},
      {"gamma universality", gamma_universality},
      {"integrability witness", integrability_witness},
      {"closed-form agreement", closed_form_agreement},
      {"NOT cases 1-4", not_cases},
      {"NR NOT resonance", nr_resonance},
      {"mean-field NOT", mean_field_not},
      {"high-frequency gamma formula", high_frequency_gamma},
      {"averaging-theorem regime", averaging_regime},
      {"RWA scaling", rwa_scaling},
      {"dynamical localization", dynamical_localization},
      {"commensurability", commensurability},
      {"torus membership", torus_membership},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 1;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", criteria.size());
    return 1;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

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

#include "qgyro/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qgyro/errors.hpp"

namespace qgyro {
namespace {

constexpr double kDriftBudget = 1e-6;
constexpr double kPoleGuard = 1e-6;

template <int Cols>
using Columns = Eigen::Matrix<double, 3, Cols>;

// Tracks the norm drift removed (or accumulated) per drift window.
class DriftMonitor {
 public:
  explicit DriftMonitor(double window) : window_(window) {}

  void record(double t, double drift) {
    max_drift_ = std::max(max_drift_, drift);
    if (!std::isfinite(window_)) return;
    const auto w = static_cast<long long>(std::floor(t / window_));
    if (w != current_) {
      current_ = w;
      sum_ = 0.0;
    }
    sum_ += drift;
    if (sum_ > kDriftBudget) {
      throw NumericalError("norm drift " + std::to_string(sum_) + " exceeds 1e-6 within one period near t = " +
                           std::to_string(t));
    }
  }

  double max_drift() const { return max_drift_; }

 private:
  double window_;
  long long current_ = std::numeric_limits<long long>::min();
  double sum_ = 0.0;
  double max_drift_ = 0.0;
};

double drift_window(const FieldSpec& spec) {
  if (is_periodic(spec)) return period(spec);
  const double b = field_at(spec, 0.0).norm();
  return b > 0.0 ? kTwoPi / b : std::numeric_limits<double>::infinity();
}

void check_grid(std::span<const double> grid) {
  if (!grid.empty() && grid.front() < 0.0) throw PreconditionError("time grid must start at t >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] >= grid[i - 1])) throw PreconditionError("time grid must be sorted ascending");
  }
}

// Integrates Cols vectors in lockstep under dS/dt = S x B. The first
// `unit_cols` columns are unit vectors and are renormalized after every
// accepted step when cfg.renormalize is set; any remaining columns are
// free solutions of the same linear equation (e.g. separations).
template <int Cols, class FieldFn, class OnStep>
std::vector<Columns<Cols>> run_bloch(const FieldFn& field, const Columns<Cols>& s0, std::span<const double> grid,
                                     const IntegratorConfig& cfg, double window, IntegrationStats* stats,
                                     double* max_drift, OnStep&& on_step, int unit_cols = Cols) {
  check_grid(grid);
  std::vector<Columns<Cols>> out(grid.size());
  DriftMonitor monitor(window);
  const auto rhs = [&field](double t, const Columns<Cols>& s) -> Columns<Cols> {
    const Vec3 b = field(t);
    Columns<Cols> ds;
    for (int c = 0; c < Cols; ++c) ds.col(c) = s.col(c).cross(b);
    return ds;
  };
  const auto project = [&](double t, Columns<Cols>& s) {
    double drift = 0.0;
    for (int c = 0; c < unit_cols; ++c) {
      const double n = s.col(c).norm();
      drift = std::max(drift, std::abs(n - 1.0));
      if (cfg.renormalize) s.col(c) /= n;
    }
    if (cfg.renormalize) {
      monitor.record(t, drift);
    } else {
      // Without projection the deviation itself is the telemetry; the budget
      // applies to how much it grows within a window.
      monitor.record(t, 0.0);
      if (drift > kDriftBudget * std::max(1.0, std::ceil(t / window))) {
        throw NumericalError("norm drift exceeds 1e-6 per period near t = " + std::to_string(t));
      }
    }
    if (drift > 1e-3) throw NumericalError("norm blow-up near t = " + std::to_string(t));
  };
  const auto on_sample = [&out](std::size_t i, double, const Columns<Cols>& s) { out[i] = s; };
  const IntegrationStats st = dopri5(rhs, 0.0, s0, grid, cfg, project, on_sample, on_step);
  if (stats) *stats = st;
  if (max_drift) *max_drift = monitor.max_drift();
  // Samples come from the interpolant, which is not on the sphere exactly.
  if (cfg.renormalize) {
    for (auto& s : out) {
      for (int c = 0; c < unit_cols; ++c) s.col(c).normalize();
    }
  }
  return out;
}

const auto kNoStep = [](const auto&) {};

}  // namespace

std::vector<double> uniform_grid(double t_end, std::size_t n_intervals) {
  if (n_intervals == 0) return {0.0};
  std::vector<double> g(n_intervals + 1);
  const double dt = t_end / static_cast<double>(n_intervals);
  for (std::size_t i = 0; i <= n_intervals; ++i) g[i] = static_cast<double>(i) * dt;
  g.back() = t_end;
  return g;
}

Trajectory integrate_bloch(const FieldSpec& spec, const BlochVector& s0, std::span<const double> t_grid,
                           const IntegratorConfig& cfg) {
  validate(spec);
  const auto field = [&spec](double t) { return field_at(spec, t); };
  IntegrationStats stats;
  Trajectory traj;
  const auto samples =
      run_bloch<1>(field, s0.vec(), t_grid, cfg, drift_window(spec), &stats, &traj.meta.max_norm_drift, kNoStep);
  traj.meta.spec = spec;
  traj.meta.config = cfg;
  traj.meta.steps_accepted = stats.accepted;
  traj.meta.steps_rejected = stats.rejected;
  traj.times.assign(t_grid.begin(), t_grid.end());
  traj.states.reserve(samples.size());
  traj.canonical.reserve(samples.size());
  traj.energies.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const BlochVector s = BlochVector::normalized(samples[i]);
    traj.states.push_back(s);
    traj.canonical.push_back(canonical_from_bloch(s));
    traj.energies.push_back(-field_at(spec, t_grid[i]).dot(s.vec()));
  }
  return traj;
}

std::vector<BlochVector> integrate_bloch(const FieldFunction& field, const BlochVector& s0,
                                         std::span<const double> t_grid, const IntegratorConfig& cfg,
                                         double window) {
  if (!(window > 0.0)) throw PreconditionError("drift window must be > 0");
  const auto samples = run_bloch<1>(field, s0.vec(), t_grid, cfg, window, nullptr, nullptr, kNoStep);
  std::vector<BlochVector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(BlochVector::normalized(s));
  return out;
}

std::pair<std::vector<Vec3>, std::vector<Vec3>> integrate_bloch_separation(const FieldSpec& spec,
                                                                           const BlochVector& s0, const Vec3& delta0,
                                                                           std::span<const double> t_grid,
                                                                           const IntegratorConfig& cfg) {
  validate(spec);
  const auto field = [&spec](double t) { return field_at(spec, t); };
  Columns<2> y0;
  y0.col(0) = s0.vec();
  y0.col(1) = delta0;
  const auto samples = run_bloch<2>(field, y0, t_grid, cfg, drift_window(spec), nullptr, nullptr, kNoStep, 1);
  std::pair<std::vector<Vec3>, std::vector<Vec3>> out;
  out.first.reserve(samples.size());
  out.second.reserve(samples.size());
  for (const auto& s : samples) {
    out.first.emplace_back(s.col(0));
    out.second.emplace_back(s.col(1));
  }
  return out;
}

std::pair<std::vector<Vec3>, std::vector<Vec3>> integrate_bloch_pair(const FieldSpec& spec, const BlochVector& a,
                                                                     const BlochVector& b,
                                                                     std::span<const double> t_grid,
                                                                     const IntegratorConfig& cfg) {
  validate(spec);
  const auto field = [&spec](double t) { return field_at(spec, t); };
  Columns<2> s0;
  s0.col(0) = a.vec();
  s0.col(1) = b.vec();
  const auto samples = run_bloch<2>(field, s0, t_grid, cfg, drift_window(spec), nullptr, nullptr, kNoStep);
  std::pair<std::vector<Vec3>, std::vector<Vec3>> out;
  out.first.reserve(samples.size());
  out.second.reserve(samples.size());
  for (const auto& s : samples) {
    out.first.emplace_back(s.col(0));
    out.second.emplace_back(s.col(1));
  }
  return out;
}

BlochSolution solve_bloch(const FieldSpec& spec, const BlochVector& s0, double t_end, const IntegratorConfig& cfg) {
  validate(spec);
  if (!(t_end > 0.0)) throw PreconditionError("solve_bloch requires t_end > 0");
  const auto field = [&spec](double t) { return field_at(spec, t); };
  BlochSolution sol;
  const double grid[] = {t_end};
  run_bloch<1>(field, s0.vec(), grid, cfg, drift_window(spec), nullptr, nullptr,
               [&sol](const Dopri5Segment<Vec3>& seg) { sol.dense_.push(seg); });
  return sol;
}

Trajectory integrate_canonical(const FieldSpec& spec, const CanonicalState& initial, std::span<const double> t_grid,
                               const IntegratorConfig& cfg) {
  validate(spec);
  check_grid(t_grid);
  if (!(std::abs(initial.q()) < 1.0)) throw PreconditionError("integrate_canonical requires |q0| < 1");
  using V2 = Eigen::Vector2d;
  const auto rhs = [&spec](double t, const V2& y) -> V2 {
    const Vec3 b = field_at(spec, t);
    const double q = y(0), p = y(1);
    const double r = std::sqrt(1.0 - q * q);
    const double c = std::cos(p), s = std::sin(p);
    return V2((b.x() * s - b.y() * c) * r, -(b.x() * c + b.y() * s) * q / r - b.z());
  };
  const auto guard = [](double t, const V2& y) {
    if (!(std::abs(y(0)) <= 1.0 - kPoleGuard)) {
      throw NumericalError("canonical chart singularity: |q| > 1 - 1e-6 near t = " + std::to_string(t));
    }
  };
  std::vector<V2> samples(t_grid.size());
  const IntegrationStats stats = dopri5(
      rhs, 0.0, V2(initial.q(), initial.p()), t_grid, cfg, [&](double t, V2& y) { guard(t, y); },
      [&](std::size_t i, double t, const V2& y) {
        guard(t, y);
        samples[i] = y;
      },
      kNoStep);

  Trajectory traj;
  traj.meta.spec = spec;
  traj.meta.config = cfg;
  traj.meta.steps_accepted = stats.accepted;
  traj.meta.steps_rejected = stats.rejected;
  traj.times.assign(t_grid.begin(), t_grid.end());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const CanonicalState c(samples[i](0), samples[i](1), initial.frame());
    const BlochVector s = bloch_from_canonical(c);
    traj.canonical.push_back(c);
    traj.states.push_back(s);
    traj.energies.push_back(-field_at(spec, t_grid[i]).dot(s.vec()));
  }
  return traj;
}

double quantum_consistency(const FieldSpec& spec, const CanonicalState& initial, std::span<const double> t_grid,
                           const IntegratorConfig& cfg, const OracleConfig& oracle) {
  const Trajectory traj = integrate_bloch(spec, bloch_from_canonical(initial), t_grid, cfg);
  const auto psi = propagate(spec, qubit_from_canonical(initial), t_grid, oracle);
  double worst = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    worst = std::max(worst, (traj.states[i].vec() - bloch_from_qubit(psi[i]).vec()).norm());
  }
  return worst;
}

}  // namespace qgyro

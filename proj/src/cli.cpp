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

#include "qgyro/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgyro/analysis.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/errors.hpp"
#include "qgyro/exact.hpp"
#include "qgyro/geometry.hpp"
#include "qgyro/io.hpp"
#include "qgyro/notgate.hpp"
#include "qgyro/strobe.hpp"

namespace qgyro {
namespace {

using nlohmann::json;

// --- shared option groups ----------------------------------------------------

struct FieldOptions {
  std::string kind = "r";
  double b0 = 0.0;
  double b3 = 0.0;
  double omega = 0.0;
  double phi = 0.0;
  CLI::App* app = nullptr;

  void add(CLI::App* sub, bool with_kind = true) {
    app = sub;
    if (with_kind) {
      sub->add_option("--field", kind, "Field variant: r (rotating) or nr (nonrotating)")
          ->check(CLI::IsMember({"r", "nr"}));
    }
    sub->add_option("--b0", b0, "Transverse amplitude b0");
    sub->add_option("--b3", b3, "Longitudinal amplitude b3");
    sub->add_option("--omega", omega, "Drive angular frequency omega");
    if (with_kind) sub->add_option("--phi", phi, "Drive phase phi (rotating field)");
  }

  void require() const {
    for (const char* name : {"--b0", "--b3", "--omega"}) {
      if (app->get_option(name)->count() == 0) throw PreconditionError(std::string("missing required option ") + name);
    }
  }

  RotatingFieldParams rotating() const {
    require();
    RotatingFieldParams p{b0, b3, omega, phi};
    p.validate();
    return p;
  }

  NonrotatingFieldParams nonrotating() const {
    require();
    NonrotatingFieldParams p{b0, b3, omega};
    p.validate();
    return p;
  }

  FieldSpec spec() const {
    if (kind == "nr") return nonrotating();
    return rotating();
  }
};

struct InitialOptions {
  double q0 = 0.5;
  double p0 = 1.0;

  void add(CLI::App* sub) {
    sub->add_option("--q0", q0, "Initial q = -cos(theta)")->capture_default_str();
    sub->add_option("--p0", p0, "Initial p = azimuth")->capture_default_str();
  }
  CanonicalState state() const { return CanonicalState(q0, p0); }
};

struct OutputOptions {
  std::string out;
  bool json = false;

  void add(CLI::App* sub) {
    sub->add_option("--out", out, "CSV output path (default: standard output)");
    sub->add_flag("--json", json, "Print a JSON summary on standard output");
  }
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;

  void add(CLI::App* sub) {
    sub->add_option("--rtol", rtol, "Integrator relative tolerance")->capture_default_str();
    sub->add_option("--atol", atol, "Integrator absolute tolerance")->capture_default_str();
  }
  IntegratorConfig config() const {
    IntegratorConfig c;
    c.rel_tol = rtol;
    c.abs_tol = atol;
    c.validate();
    return c;
  }
};

class Runner {
 public:
  explicit Runner(std::ostream& out) : out_(out) {}

  /// CSV goes to --out when given, else to standard output unless only the
  /// JSON summary was requested.
  void emit(const OutputOptions& o, const std::function<void(std::ostream&)>& csv, const json& summary) {
    if (!o.out.empty()) {
      std::ofstream f(o.out, std::ios::binary);
      if (!f) throw PreconditionError("cannot open output file '" + o.out + "'");
      csv(f);
      if (!f) throw PreconditionError("failed writing '" + o.out + "'");
    } else if (!o.json) {
      csv(out_);
    }
    if (o.json) out_ << dump_json(summary);
  }

 private:
  std::ostream& out_;
};

std::size_t positive(long long v, const char* name) {
  if (v <= 0) throw PreconditionError(std::string(name) + " must be positive");
  return static_cast<std::size_t>(v);
}

// --- JSON config -------------------------------------------------------------

std::vector<CLI::App*> selected_chain(CLI::App& app) {
  std::vector<CLI::App*> chain{&app};
  for (CLI::App* cur = &app;;) {
    const auto subs = cur->get_subcommands();
    if (subs.empty()) break;
    cur = subs.front();
    chain.push_back(cur);
  }
  return chain;
}

std::string config_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw PreconditionError("config: unsupported value " + v.dump());
}

/// Fills options not given on the command line from a JSON object whose keys
/// are flag names without the leading dashes.
void apply_config(CLI::App& app, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot open config file '" + path + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw PreconditionError("config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw PreconditionError("config: expected a JSON object");
  const auto chain = selected_chain(app);
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    CLI::Option* opt = nullptr;
    for (auto it = chain.rbegin(); it != chain.rend() && opt == nullptr; ++it) {
      opt = (*it)->get_option_no_throw("--" + key);
    }
    if (opt == nullptr) throw PreconditionError("config: unknown option '" + key + "'");
    if (opt->count() > 0) continue;  // the command line wins
    if (value.is_array()) {
      for (const auto& v : value) opt->add_result(config_token(v));
    } else {
      opt->add_result(config_token(value));
    }
    opt->run_callback();
  }
}

// --- subcommands -------------------------------------------------------------

struct Cli {
  CLI::App app{"Classical-gyromagnet simulator for a driven qubit", "qgyro"};
  std::function<void()> action;
  Runner runner;
  std::ostream& out;
  std::string config_path;
  unsigned jobs = 1;

  explicit Cli(std::ostream& o) : runner(o), out(o) {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", config_path, "JSON file with option values (keys are flag names)");
    app.add_option("--jobs", jobs, "Worker threads for sweeps (0 = all cores)")->envname("QG_JOBS");
    app.set_version_flag("--version", "qgyro 1.0.0");
    add_simulate();
    add_strobe();
    add_contour();
    add_fit_gamma();
    add_lyapunov();
    add_avg();
    add_rwa();
    add_localize();
    add_not();
    add_geometry();
  }

  // Each option set lives as long as the Cli object.
  template <class T>
  T& keep() {
    auto p = std::make_shared<T>();
    store_.push_back(p);
    return *p;
  }

  void add_simulate() {
    auto* sub = app.add_subcommand("simulate", "Integrate one trajectory: t,s1,s2,s3,q,p,H");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& periods = keep<long long>();
    auto& samples = keep<long long>();
    periods = 10;
    samples = 100;
    f.add(sub);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--periods", periods, "Number of drive periods")->capture_default_str();
    sub->add_option("--samples-per-period", samples, "Output rows per period")->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const FieldSpec spec = f.spec();
        const std::size_t n = positive(periods, "--periods") * positive(samples, "--samples-per-period");
        const auto grid = uniform_grid(static_cast<double>(periods) * period(spec), n);
        const Trajectory tr = integrate_bloch(spec, bloch_from_canonical(ic.state()), grid, integ.config());
        json s;
        s["field"] = to_json(spec);
        s["rows"] = tr.size();
        s["max_norm_drift"] = tr.meta.max_norm_drift;
        s["steps_accepted"] = tr.meta.steps_accepted;
        s["steps_rejected"] = tr.meta.steps_rejected;
        s["final"] = {{"t", tr.times.back()},
                      {"q", tr.canonical.back().q()},
                      {"p", tr.canonical.back().p()},
                      {"H", tr.energies.back()}};
        runner.emit(o, [&](std::ostream& os) { write_trajectory_csv(os, tr); }, s);
      };
    });
  }

  void add_strobe() {
    auto* sub = app.add_subcommand("strobe", "Stroboscopic map at t_k = k T: ic_index,k,t,q,p,H");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& periods = keep<long long>();
    auto& ics = keep<std::vector<std::string>>();
    auto& random = keep<long long>();
    auto& seed = keep<unsigned long long>();
    auto& closure_tol = keep<double>();
    periods = 200;
    seed = 1;
    closure_tol = 1e-6;
    f.add(sub);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--periods", periods, "Number of strobes after t = 0")->capture_default_str();
    sub->add_option("--ic", ics, "Initial condition 'q,p' (repeatable; default --q0/--p0)");
    sub->add_option("--random", random, "Append this many random initial conditions");
    sub->add_option("--seed", seed, "Seed for --random")->capture_default_str();
    sub->add_option("--closure-tol", closure_tol, "Distance for orbit closure")->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const FieldSpec spec = f.spec();
        std::vector<CanonicalState> initials;
        for (const auto& s : ics) initials.push_back(parse_ic(s));
        if (random > 0) {
          std::mt19937_64 rng(seed);
          std::uniform_real_distribution<double> uq(-0.95, 0.95), up(0.0, kTwoPi);
          for (long long i = 0; i < random; ++i) {
            const double q = uq(rng);
            initials.emplace_back(q, up(rng));
          }
        }
        if (initials.empty()) initials.push_back(ic.state());
        const StroboscopicMap map =
            stroboscopic_map(spec, initials, positive(periods, "--periods"), integ.config(), jobs);
        json s;
        s["field"] = to_json(spec);
        s["n_periods"] = map.n_periods;
        json orbits = json::array();
        for (const auto& orbit : map.orbits) {
          orbits.push_back({{"q0", orbit.front().q},
                            {"p0", orbit.front().p},
                            {"closure", orbit_closure(orbit, closure_tol)},
                            {"distinct_points", distinct_points(orbit, closure_tol)}});
        }
        s["orbits"] = std::move(orbits);
        if (const auto* r = std::get_if<RotatingFieldParams>(&spec)) {
          const Commensurability c = classify_commensurability(*r);
          s["commensurability"] = {{"ratio", c.ratio},
                                   {"numerator", c.numerator},
                                   {"denominator", c.denominator},
                                   {"rational", c.rational}};
        }
        runner.emit(o, [&](std::ostream& os) { write_map_csv(os, map); }, s);
      };
    });
  }

  void add_contour() {
    auto* sub = app.add_subcommand("contour", "Invariant curve of the map through an initial condition: level,q,p");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& points = keep<long long>();
    auto& gamma = keep<double>();
    auto& separatrix = keep<bool>();
    points = 721;
    f.add(sub);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--points", points, "Number of p samples")->capture_default_str();
    auto* g = sub->add_option("--gamma", gamma, "Slope gamma for the nonrotating field (default: fitted)");
    sub->add_flag("--separatrix", separatrix, "Rotating field: emit the separatrix instead");
    sub->callback([&, g] {
      action = [&, g] {
        const std::size_t n = positive(points, "--points");
        std::vector<ContourCurve> curves;
        json s;
        if (f.kind == "nr") {
          const NonrotatingFieldParams p = f.nonrotating();
          const double gm = g->count() > 0 ? gamma : fit_gamma_nr(p, ic.state(), 200, integ.config()).gamma;
          curves.push_back(contour_nr(p, gm, ic.state(), n));
          s["field"] = to_json(p);
          s["gamma"] = gm;
        } else {
          const RotatingFieldParams p = f.rotating();
          s["field"] = to_json(p);
          if (separatrix) {
            const Separatrix sep = separatrix_r(p, n);
            curves.push_back(sep.through_south);
            curves.push_back(sep.through_north);
            s["degenerate"] = sep.degenerate;
          } else {
            curves.push_back(contour_r(p, ic.state(), n));
          }
        }
        json levels = json::array();
        for (const auto& c : curves) levels.push_back({{"level", c.level}, {"points", c.points.size()}});
        s["curves"] = std::move(levels);
        runner.emit(o, [&](std::ostream& os) { write_contour_csv(os, curves); }, s);
      };
    });
  }

  void add_fit_gamma() {
    auto* sub = app.add_subcommand("fit-gamma", "Slope gamma of H_k against q_k for the nonrotating field");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& periods = keep<long long>();
    auto& sweep = keep<std::vector<double>>();
    periods = 200;
    f.add(sub, false);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--periods", periods, "Number of strobes")->capture_default_str();
    auto* sw = sub->add_option("--sweep", sweep, "Comma-separated omegas for a fitted-vs-predicted sweep")
                   ->delimiter(',');
    sub->callback([&, sw] {
      action = [&, sw] {
        const std::size_t n = positive(periods, "--periods");
        if (sw->count() > 0) {
          if (f.app->get_option("--b0")->count() == 0 || f.app->get_option("--b3")->count() == 0) {
            throw PreconditionError("--sweep requires --b0 and --b3");
          }
          const auto rows = gamma_sweep(f.b0, f.b3, sweep, ic.state(), n, integ.config(), jobs);
          json s = json::array();
          for (const auto& r : rows) {
            s.push_back({{"omega", r.omega}, {"gamma_fit", r.gamma_fit}, {"gamma_pred", r.gamma_pred},
                         {"rel_err", r.rel_err}});
          }
          runner.emit(o, [&](std::ostream& os) { write_sweep_csv(os, rows); }, s);
          return;
        }
        const NonrotatingFieldParams p = f.nonrotating();
        const CanonicalState ics[] = {ic.state()};
        const StroboscopicMap map = stroboscopic_map(p, ics, n, integ.config());
        const GammaFit fit = fit_gamma(map, 0);
        json s;
        s["field"] = to_json(p);
        s["gamma"] = fit.gamma;
        s["intercept"] = fit.intercept;
        s["max_residual"] = fit.max_residual;
        s["n_points"] = fit.n_points;
        s["gamma_high_frequency"] = gamma_prediction(p);
        runner.emit(o, [&](std::ostream& os) { write_map_csv(os, map); }, s);
      };
    });
  }

  void add_lyapunov() {
    auto* sub = app.add_subcommand("lyapunov", "Separation of two nearby trajectories: k,t,ratio");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& periods = keep<long long>();
    auto& delta0 = keep<double>();
    periods = 1000;
    delta0 = 1e-8;
    f.add(sub);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--periods", periods, "Number of periods")->capture_default_str();
    sub->add_option("--delta0", delta0, "Initial separation")->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const FieldSpec spec = f.spec();
        const LyapunovResult r = lyapunov_estimate(spec, bloch_from_canonical(ic.state()), delta0,
                                                   positive(periods, "--periods"), integ.config());
        double max_dev = 0.0;
        for (double x : r.ratio) max_dev = std::max(max_dev, std::abs(x - 1.0));
        json s;
        s["field"] = to_json(spec);
        s["lambda"] = r.lambda;
        s["lambda_times_period"] = r.lambda * period(spec);
        s["d0"] = r.d0;
        s["max_ratio_deviation"] = max_dev;
        runner.emit(o,
                    [&](std::ostream& os) {
                      os << "k,t,ratio\n";
                      for (std::size_t k = 0; k < r.times.size(); ++k) {
                        os << k << ',' << format_double(r.times[k]) << ',' << format_double(r.ratio[k]) << '\n';
                      }
                    },
                    s);
      };
    });
  }

  void add_avg() {
    auto* sub = app.add_subcommand("avg", "Potential-weighted averages of cos(omega t): k,f_avg,flagged");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& periods = keep<long long>();
    periods = 200;
    f.add(sub, false);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--periods", periods, "Number of periods")->capture_default_str();
    sub->callback([&] {
      action = [&] {
        const NonrotatingFieldParams p = f.nonrotating();
        const AverageSeries a =
            weighted_average_series(p, ic.state(), positive(periods, "--periods"), integ.config());
        json s;
        s["field"] = to_json(p);
        s["aggregate"] = a.aggregate;
        s["aggregate_flagged"] = a.aggregate_flagged;
        s["mean_per_period"] = a.mean_per_period;
        s["flagged_count"] = a.flagged_count;
        s["gamma_from_aggregate"] = 2.0 * p.b3 * (1.0 - a.aggregate);
        s["high_frequency_average"] = high_freq_average(p);
        s["t_max"] = a.t_max;
        runner.emit(o, [&](std::ostream& os) { write_average_csv(os, a); }, s);
      };
    });
  }

  void add_rwa() {
    auto* sub = app.add_subcommand("rwa", "Rotating-wave approximation error for the resonant nonrotating field");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& samples = keep<long long>();
    auto& off = keep<bool>();
    samples = 1000;
    f.add(sub, false);
    ic.add(sub);
    o.add(sub);
    sub->add_option("--samples", samples, "Grid intervals over [0, omega / b3]")->capture_default_str();
    sub->add_flag("--allow-off-resonance", off, "Skip the omega = 2 b0 check");
    sub->callback([&] {
      action = [&] {
        f.require();
        const RwaParams p{f.b0, f.b3, f.omega};
        const RwaErrorReport r =
            rwa_error(p, qubit_from_canonical(ic.state()), positive(samples, "--samples"), off);
        json s;
        s["b0"] = p.b0;
        s["b3"] = p.b3;
        s["omega"] = p.omega;
        s["max_error"] = r.max_error;
        s["t_at_max"] = r.t_at_max;
        s["window"] = r.window;
        s["rabi_frequency"] = rabi_frequency(p);
        runner.emit(o,
                    [&](std::ostream& os) {
                      os << "b3_over_omega,max_error,t_at_max,window\n"
                         << format_double(p.b3 / p.omega) << ',' << format_double(r.max_error) << ','
                         << format_double(r.t_at_max) << ',' << format_double(r.window) << '\n';
                    },
                    s);
      };
    });
  }

  void add_localize() {
    auto* sub = app.add_subcommand("localize", "Strong-coupling averaging and dynamical localization");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    auto& t_max = keep<double>();
    f.add(sub, false);
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->add_option("--t-max", t_max, "Strobe window (default 1 / b0)");
    sub->callback([&] {
      action = [&] {
        const NonrotatingFieldParams p = f.nonrotating();
        const LocalizationReport r = localization_check(p, ic.state(), t_max, integ.config());
        json s;
        s["field"] = to_json(p);
        s["omega0"] = r.coupling.omega0;
        s["bessel_argument"] = r.coupling.bessel_argument;
        s["j0"] = r.coupling.j0;
        s["localized"] = r.coupling.localized;
        s["b0_period"] = r.coupling.b0_period;
        s["mean_map_level"] = mean_map_level(r.coupling, ic.state());
        s["max_dq"] = r.max_dq;
        s["strobes"] = r.strobes;
        runner.emit(o,
                    [&](std::ostream& os) {
                      os << "omega0,j0,max_dq,strobes\n"
                         << format_double(r.coupling.omega0) << ',' << format_double(r.coupling.j0) << ','
                         << format_double(r.max_dq) << ',' << r.strobes << '\n';
                    },
                    s);
      };
    });
  }

  void add_not() {
    auto* nt = app.add_subcommand("not", "NOT operations S(t).S(0) = -1");
    nt->require_subcommand(1);

    {
      auto* sub = nt->add_subcommand("predict", "Closed-form NOT regimes of the rotating field");
      auto& f = keep<FieldOptions>();
      auto& o = keep<OutputOptions>();
      auto& m_max = keep<int>();
      m_max = 16;
      f.add(sub, false);
      sub->add_option("--phi", f.phi, "Drive phase phi");
      o.add(sub);
      sub->add_option("--m-max", m_max, "Largest integer m tried")->capture_default_str();
      sub->callback([&] {
        action = [&] {
          const RotatingFieldParams p = f.rotating();
          const auto regimes = predict_regimes(p, {m_max});
          json s;
          s["field"] = to_json(p);
          json arr = json::array();
          for (const auto& r : regimes) {
            json jr = to_json(r);
            jr["verified"] = verify_regime(p, r);
            arr.push_back(std::move(jr));
          }
          s["regimes"] = std::move(arr);
          runner.emit(o,
                      [&](std::ostream& os) {
                        os << "case,m,slope,offset,class,t_not_0\n";
                        for (const auto& r : regimes) {
                          for (const auto& sc : r.schedules) {
                            os << r.case_id << ',' << r.m << ',' << format_double(sc.slope) << ','
                               << format_double(sc.offset) << ",\"" << sc.initial_class.label << "\","
                               << format_double(sc.t_not(p.omega, 0)) << '\n';
                          }
                        }
                      },
                      s);
        };
      });
    }
    {
      auto* sub = nt->add_subcommand("detect", "Numerical NOT detection from S(t).S(0): t,overlap");
      auto& f = keep<FieldOptions>();
      auto& ic = keep<InitialOptions>();
      auto& o = keep<OutputOptions>();
      auto& integ = keep<IntegratorOptions>();
      auto& t_max = keep<double>();
      auto& tol = keep<double>();
      auto& near = keep<double>();
      tol = 1e-3;
      f.add(sub);
      ic.add(sub);
      o.add(sub);
      integ.add(sub);
      auto* tm = sub->add_option("--t-max", t_max, "Search window (default 20 periods)");
      sub->add_option("--tol", tol, "Achievement tolerance on 1 + overlap")->capture_default_str();
      auto* nr = sub->add_option("--near", near, "Also report the overlap minimum closest to this time");
      sub->callback([&, tm, nr] {
        action = [&, tm, nr] {
          const FieldSpec spec = f.spec();
          const double window = tm->count() > 0 ? t_max : 20.0 * period(spec);
          DetectSettings ds;
          ds.tol = tol;
          ds.integrator = integ.config();
          const NotDetection d = detect_not(spec, ic.state(), window, ds);
          json s;
          s["field"] = to_json(spec);
          s["t_star"] = d.t_star;
          s["min_overlap"] = d.min_overlap;
          s["achieved"] = d.achieved;
          s["t_max"] = window;
          json ev = json::array();
          for (const auto& e : d.events) ev.push_back({{"t", e.t}, {"overlap", e.overlap}});
          s["events"] = std::move(ev);
          if (nr->count() > 0) {
            if (const auto e = nearest_event(d, near)) s["nearest"] = {{"t", e->t}, {"overlap", e->overlap}};
          }
          runner.emit(o, [&](std::ostream& os) { write_detection_csv(os, d); }, s);
        };
      });
    }
    {
      auto* sub = nt->add_subcommand("resonance", "Nonrotating-field NOT resonance by bisection on b0");
      auto& o = keep<OutputOptions>();
      auto& integ = keep<IntegratorOptions>();
      auto& omega = keep<double>();
      auto& b3 = keep<double>();
      auto& lo = keep<double>();
      auto& hi = keep<double>();
      auto& periods = keep<long long>();
      periods = 200;
      auto* om = sub->add_option("--omega", omega, "Drive angular frequency");
      auto* b = sub->add_option("--b3", b3, "Longitudinal amplitude");
      auto* l = sub->add_option("--b0-min", lo, "Lower end of the b0 bracket");
      auto* h = sub->add_option("--b0-max", hi, "Upper end of the b0 bracket");
      sub->add_option("--periods", periods, "Strobes per gamma fit")->capture_default_str();
      o.add(sub);
      integ.add(sub);
      sub->callback([&, om, b, l, h] {
        action = [&, om, b, l, h] {
          for (const CLI::Option* opt : {om, b, l, h}) {
            if (opt->count() == 0) throw PreconditionError("missing required option " + opt->get_name());
          }
          ResonanceSettings rs;
          rs.n_periods = positive(periods, "--periods");
          rs.integrator = integ.config();
          const ResonanceResult r = nr_resonance_search(omega, b3, lo, hi, rs);
          json s;
          s["b0_star"] = r.b0_star;
          s["gamma_star"] = r.gamma_star;
          s["g_value"] = r.g_value;
          s["iterations"] = r.iterations;
          s["converged"] = r.converged;
          runner.emit(o,
                      [&](std::ostream& os) {
                        os << "b0_star,gamma_star,g_value,iterations,converged\n"
                           << format_double(r.b0_star) << ',' << format_double(r.gamma_star) << ','
                           << format_double(r.g_value) << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
                           << '\n';
                      },
                      s);
        };
      });
    }
  }

  void add_geometry() {
    auto* sub = app.add_subcommand("geometry", "Precession geometry in the rotating frame");
    auto& f = keep<FieldOptions>();
    auto& ic = keep<InitialOptions>();
    auto& o = keep<OutputOptions>();
    auto& integ = keep<IntegratorOptions>();
    f.add(sub, false);
    sub->add_option("--phi", f.phi, "Drive phase phi");
    ic.add(sub);
    o.add(sub);
    integ.add(sub);
    sub->callback([&] {
      action = [&] {
        const RotatingFieldParams p = f.rotating();
        const Vec3 field(-2.0 * p.b0, 0.0, -2.0 * p.detuning());
        const CanonicalState lab = ic.state();
        const BlochVector s0 = bloch_from_canonical(CanonicalState(lab.q(), lab.p() - p.phi));
        json s;
        s["field"] = to_json(p);
        s["frame_field"] = {field.x(), field.y(), field.z()};
        if (field.norm() > 0.0) {
          const PrecessionData d = precession_data(field, s0);
          s["precession"] = {{"psi", d.psi},           {"energy", d.energy}, {"speed", d.speed},
                             {"accel", d.accel},       {"angular_rate", d.angular_rate},
                             {"period", d.period},     {"half_turn_time", d.half_turn_time()}};
          try {
            const NotRuleCheck nr = not_rule(CanonicalState(lab.q(), lab.p() - p.phi), field);
            s["not_rule"] = {{"applicable", true}, {"lhs", nr.lhs}, {"rhs", nr.rhs}, {"theta", nr.theta},
                             {"satisfied", nr.satisfied}};
          } catch (const PreconditionError&) {
            s["not_rule"] = {{"applicable", false}};
          }
          const SeparatrixPrecession sp = separatrix_precession_check(p, integ.config());
          s["separatrix"] = {{"level_north", sp.level_north},
                             {"level_south", sp.level_south},
                             {"max_abs_s3_north", sp.max_abs_s3_north},
                             {"max_abs_s3_south", sp.max_abs_s3_south},
                             {"passes_poles", sp.passes_poles},
                             {"period", sp.period},
                             {"quoted_period", sp.quoted_period}};
        }
        runner.emit(o,
                    [&](std::ostream& os) {
                      os << "key,value\n";
                      if (s.contains("precession")) {
                        for (const auto& [k, v] : s["precession"].items()) {
                          os << k << ',' << format_double(v.get<double>()) << '\n';
                        }
                      }
                    },
                    s);
      };
    });
  }

  static CanonicalState parse_ic(const std::string& text) {
    std::istringstream is(text);
    double q = 0.0, p = 0.0;
    char comma = 0;
    if (!(is >> q >> comma >> p) || comma != ',' || !(is >> std::ws).eof()) {
      throw PreconditionError("initial condition must be 'q,p': '" + text + "'");
    }
    return CanonicalState(q, p);
  }

 private:
  std::vector<std::shared_ptr<void>> store_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli(out);
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  try {
    if (!cli.config_path.empty()) apply_config(cli.app, cli.config_path);
    if (!cli.action) throw PreconditionError("no subcommand selected");
    cli.action();
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace qgyro

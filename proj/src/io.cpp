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

#include "qgyro/io.hpp"

#include <array>
#include <charconv>

#include "qgyro/errors.hpp"

namespace qgyro {
namespace {

using nlohmann::json;

class Row {
 public:
  explicit Row(std::ostream& os) : os_(os) {}
  ~Row() { os_ << '\n'; }
  Row& operator<<(double x) { return put(format_double(x)); }
  Row& operator<<(std::size_t n) { return put(std::to_string(n)); }
  Row& put(const std::string& s) {
    if (!first_) os_ << ',';
    first_ = false;
    os_ << s;
    return *this;
  }

 private:
  std::ostream& os_;
  bool first_ = true;
};

const char* class_kind_name(ClassKind k) {
  switch (k) {
    case ClassKind::equator: return "equator";
    case ClassKind::poles: return "poles";
    case ClassKind::phase_lines: return "phase_lines";
  }
  return "unknown";
}

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw PreconditionError(std::string("field spec: missing numeric member '") + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // fold -0 into 0
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,s1,s2,s3,q,p,H\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.states[i];
    Row(os) << traj.times[i] << s.s1() << s.s2() << s.s3() << traj.canonical[i].q() << traj.canonical[i].p()
            << traj.energies[i];
  }
}

void write_map_csv(std::ostream& os, const StroboscopicMap& map) {
  os << "ic_index,k,t,q,p,H\n";
  for (std::size_t i = 0; i < map.orbits.size(); ++i) {
    for (const auto& pt : map.orbits[i]) Row(os) << i << pt.k << pt.t << pt.q << pt.p << pt.energy;
  }
}

void write_contour_csv(std::ostream& os, std::span<const ContourCurve> curves) {
  os << "level,q,p\n";
  for (const auto& c : curves) {
    for (const auto& pt : c.points) Row(os) << c.level << pt.q << pt.p;
  }
}

void write_sweep_csv(std::ostream& os, std::span<const GammaSweepRow> rows) {
  os << "omega,gamma_fit,gamma_pred,rel_err\n";
  for (const auto& r : rows) Row(os) << r.omega << r.gamma_fit << r.gamma_pred << r.rel_err;
}

void write_average_csv(std::ostream& os, const AverageSeries& series) {
  os << "k,f_avg,flagged\n";
  for (const auto& e : series.per_period) Row(os) << e.k << e.f_avg << static_cast<std::size_t>(e.flagged);
}

void write_detection_csv(std::ostream& os, const NotDetection& detection) {
  os << "t,overlap\n";
  for (std::size_t i = 0; i < detection.times.size(); ++i) Row(os) << detection.times[i] << detection.overlap[i];
}

json to_json(const FieldSpec& spec) {
  json j;
  j["variant"] = variant_name(spec);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RotatingFieldParams>) {
          j["b0"] = f.b0;
          j["b3"] = f.b3;
          j["omega"] = f.omega;
          j["phi"] = f.phi;
        } else if constexpr (std::is_same_v<T, NonrotatingFieldParams>) {
          j["b0"] = f.b0;
          j["b3"] = f.b3;
          j["omega"] = f.omega;
        } else if constexpr (std::is_same_v<T, ConstantField>) {
          j["vector"] = {f.vector.x(), f.vector.y(), f.vector.z()};
        } else {
          j["b0"] = f.source.b0;
          j["b3"] = f.source.b3;
          j["omega"] = f.source.omega;
        }
      },
      spec);
  return j;
}

FieldSpec field_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string()) {
    throw PreconditionError("field spec: expected an object with a string 'variant'");
  }
  const std::string v = j.at("variant").get<std::string>();
  FieldSpec spec;
  if (v == "rotating") {
    spec = RotatingFieldParams{number_at(j, "b0"), number_at(j, "b3"), number_at(j, "omega"),
                               j.contains("phi") ? number_at(j, "phi") : 0.0};
  } else if (v == "nonrotating") {
    spec = NonrotatingFieldParams{number_at(j, "b0"), number_at(j, "b3"), number_at(j, "omega")};
  } else if (v == "mean_of_nr") {
    spec = MeanOfNonrotating{{number_at(j, "b0"), number_at(j, "b3"), number_at(j, "omega")}};
  } else if (v == "constant") {
    const json& vec = j.contains("vector") ? j.at("vector") : json();
    if (!vec.is_array() || vec.size() != 3) throw PreconditionError("field spec: 'vector' must have 3 numbers");
    spec = ConstantField{Vec3(vec[0].get<double>(), vec[1].get<double>(), vec[2].get<double>())};
  } else {
    throw PreconditionError("field spec: unknown variant '" + v + "'");
  }
  validate(spec);
  return spec;
}

json to_json(const NotRegime& regime) {
  json j;
  j["case"] = regime.case_id;
  if (regime.m >= 0) j["m"] = regime.m;
  j["constraints"] = regime.constraints;
  json scheds = json::array();
  for (const auto& s : regime.schedules) {
    json js;
    js["t_not"] = "(" + format_double(s.slope) + " n + " + format_double(s.offset) + ") pi / omega";
    js["slope"] = s.slope;
    js["offset"] = s.offset;
    js["class"] = class_kind_name(s.initial_class.kind);
    js["label"] = s.initial_class.label;
    if (!s.initial_class.phases.empty()) js["p0"] = s.initial_class.phases;
    scheds.push_back(std::move(js));
  }
  j["schedules"] = std::move(scheds);
  return j;
}

json to_json(const std::vector<NotRegime>& regimes) {
  json arr = json::array();
  for (const auto& r : regimes) arr.push_back(to_json(r));
  return arr;
}

std::string dump_json(const json& j) { return j.dump() + "\n"; }

}  // namespace qgyro

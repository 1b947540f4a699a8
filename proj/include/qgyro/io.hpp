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

// Deterministic text output: CSV tables with 17 significant digits and '\n'
// line endings, and JSON forms of field specifications and NOT regimes.

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgyro/analysis.hpp"
#include "qgyro/dynamics.hpp"
#include "qgyro/fields.hpp"
#include "qgyro/notgate.hpp"
#include "qgyro/strobe.hpp"

namespace qgyro {

/// General notation with 17 significant digits; -0 prints as 0.
std::string format_double(double x);

/// t,s1,s2,s3,q,p,H
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// ic_index,k,t,q,p,H
void write_map_csv(std::ostream& os, const StroboscopicMap& map);
/// level,q,p
void write_contour_csv(std::ostream& os, std::span<const ContourCurve> curves);
/// omega,gamma_fit,gamma_pred,rel_err
void write_sweep_csv(std::ostream& os, std::span<const GammaSweepRow> rows);
/// k,f_avg,flagged
void write_average_csv(std::ostream& os, const AverageSeries& series);
/// t,overlap
void write_detection_csv(std::ostream& os, const NotDetection& detection);

/// {"variant": ..., "b0": ..., "b3": ..., "omega": ..., "phi": ..., "vector": [..]}
/// with only the members meaningful for the variant.
nlohmann::json to_json(const FieldSpec& spec);
/// Inverse of to_json. Throws PreconditionError on an unknown variant or
/// missing members.
FieldSpec field_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NotRegime& regime);
nlohmann::json to_json(const std::vector<NotRegime>& regimes);

/// Compact JSON with keys in sorted order, then '\n'.
std::string dump_json(const nlohmann::json& j);

}  // namespace qgyro

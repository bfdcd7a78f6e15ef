// Copyright 2026 The qmux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Text formats shared by the library and the command-line tool. JSON is
// used for configuration and summaries, CSV for bulk tables. Every CSV
// writer here has a matching reader.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmux/core_model.hpp"
#include "qmux/link_model.hpp"
#include "qmux/phase_matching.hpp"
#include "qmux/quantum_stats.hpp"
#include "qmux/trial_engine.hpp"

namespace qmux {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Reads the object over `base`: missing keys keep their base value,
/// unknown keys are a ConfigError. tau_c also accepts the string "inf".
ExperimentConfig parse_experiment_config(std::string_view json, const ExperimentConfig& base = {});
std::string to_json(const ExperimentConfig& config);

/// Run plan document:
///   {"config": {...}, "tau": 0.7, "settings": "chsh" | "tomography" | "hv" |
///    [["0", "22.5"], ...], "n_trials": N, "seed": S, "m_values": [1, 2, ...]}
/// Only "config" keys and "m_values" are optional.
struct RunPlanDocument {
    RunPlan plan;
    std::vector<int> m_values;  // empty: run plan.config.m only
};

RunPlanDocument parse_run_plan(std::string_view json);

struct GeometryDocument {
    BeamGeometry geometry;
    double tolerance = kDefaultPmcTolerance;
};

/// {"write_angles": [...], "stokes_angle": 0, "tolerance": 1e-5} or a bare
/// array of write angles.
GeometryDocument parse_geometry(std::string_view json);

struct LinkDocument {
    LinkSweep sweep;
    std::optional<FeedbackConfig> feedback;  // N is taken from each m
};

/// Axes "L0", "m", "p1" take a number, an array, or {"from", "to", "step"}.
LinkDocument parse_link_sweep(std::string_view json);

// Coincidence CSV -------------------------------------------------------------

/// One table, optionally tagged with the mode count of a sweep.
struct TaggedTable {
    std::optional<int> m;
    CoincidenceTable table;
};

/// Header: [m,]theta_s,theta_a,C_D1T1,C_D1T2,C_D2T1,C_D2T2,N_D1,N_D2,N_total.
/// The m column is written when any table is tagged.
std::string write_coincidence_csv(std::span<const TaggedTable> tables);
std::vector<TaggedTable> read_coincidence_csv(std::string_view text);

std::string batch_summary_json(const BatchResult& result, const RunPlan& plan);

// Statistics ------------------------------------------------------------------

/// {"basis": ["HH","HV","VH","VV"], "entries": [[re, im] x 16 row-major]}.
std::string density_json(const Matrix4c& rho);
Matrix4c parse_density_json(std::string_view json);

std::string decay_fit_json(const DecayFit& fit);

/// Header: tau_us,S,S_err (S_err optional).
std::vector<DecayPoint> read_decay_csv(std::string_view text);
std::string write_decay_csv(std::span<const DecayPoint> points);

std::string residual_csv(const GeometryScan& scan);
/// Parses the matrix written by residual_csv.
Eigen::MatrixXd read_residual_csv(std::string_view text);

std::string link_sweep_csv(std::span<const LinkSweepRow> rows);

}  // namespace qmux

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

#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qmux {

// Planar wavevector geometry of four-wave mixing in the memory. All beams
// share one optical frequency, so wavevectors are in units of |k| = w / c.
// Angles are in degrees from the z axis (the collected Stokes mode).

/// k_As = k_w + k_R - k_s with k_w = (cos w, sin w), k_R = -(cos r, sin r)
/// and k_s = (cos s, sin s); returned as (z, x).
Eigen::Vector2d anti_stokes_wavevector(double theta_write_deg, double theta_read_deg,
                                       double theta_stokes_deg);

/// ||k_As|| - 1: zero when the emission is phase matched.
double pmc_signed_residual(double theta_write_deg, double theta_read_deg,
                           double theta_stokes_deg);

double pmc_residual(double theta_write_deg, double theta_read_deg, double theta_stokes_deg);

inline constexpr double kDefaultPmcTolerance = 1e-5;

/// Write-beam fan. Read beam i runs antiparallel to write beam i, so its
/// angle equals the write angle.
struct BeamGeometry {
    std::vector<double> write_angles_deg;
    double stokes_angle_deg = 0.0;
};

/// Throws InputError for an empty fan, angles outside (-90, 90) or repeated
/// write angles.
void validate(const BeamGeometry& geometry);

struct GeometryScan {
    /// residual(k, l): spin wave written by beam k, read by beam l.
    Eigen::MatrixXd residual;
    double tolerance = kDefaultPmcTolerance;
    /// Off-diagonal (k, l) pairs within tolerance of phase matching. These
    /// are unwanted modes that nonetheless emit into a directional mode.
    std::vector<std::pair<int, int>> directional_cross_terms;
    int nondirectional_count = 0;
    double directional_fraction = 0.0;
};

GeometryScan scan_geometry(const BeamGeometry& geometry,
                           double tolerance = kDefaultPmcTolerance);

/// General form with independent write and read angle lists.
GeometryScan scan_beams(const std::vector<double>& write_deg, const std::vector<double>& read_deg,
                        double stokes_deg, double tolerance = kDefaultPmcTolerance);

}  // namespace qmux

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

#include "qmux/phase_matching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmux/core_model.hpp"

namespace qmux {

Eigen::Vector2d anti_stokes_wavevector(double theta_write_deg, double theta_read_deg,
                                       double theta_stokes_deg) {
    const double w = deg_to_rad(theta_write_deg);
    const double r = deg_to_rad(theta_read_deg);
    const double s = deg_to_rad(theta_stokes_deg);
    return {std::cos(w) - std::cos(r) - std::cos(s), std::sin(w) - std::sin(r) - std::sin(s)};
}

double pmc_signed_residual(double theta_write_deg, double theta_read_deg,
                           double theta_stokes_deg) {
    const Eigen::Vector2d k = anti_stokes_wavevector(theta_write_deg, theta_read_deg, theta_stokes_deg);
    return std::hypot(k(0), k(1)) - 1.0;
}

double pmc_residual(double theta_write_deg, double theta_read_deg, double theta_stokes_deg) {
    return std::abs(pmc_signed_residual(theta_write_deg, theta_read_deg, theta_stokes_deg));
}

void validate(const BeamGeometry& geometry) {
    const auto& w = geometry.write_angles_deg;
    if (w.empty()) throw InputError("beam geometry needs at least one write beam");
    for (double a : w) {
        if (!(std::isfinite(a) && a > -90.0 && a < 90.0)) {
            throw InputError("write angle " + std::to_string(a) + " outside (-90, 90) degrees");
        }
    }
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("write angles must be pairwise distinct");
    }
    if (!std::isfinite(geometry.stokes_angle_deg)) {
        throw InputError("stokes angle must be finite");
    }
}

GeometryScan scan_beams(const std::vector<double>& write_deg, const std::vector<double>& read_deg,
                        double stokes_deg, double tolerance) {
    if (write_deg.size() != read_deg.size()) {
        throw InputError("write and read angle lists differ in length");
    }
    const auto m = static_cast<Eigen::Index>(write_deg.size());
    GeometryScan scan;
    scan.tolerance = tolerance;
    scan.residual.resize(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index l = 0; l < m; ++l) {
            const double r = pmc_residual(write_deg[k], read_deg[l], stokes_deg);
            scan.residual(k, l) = r;
            if (k == l) continue;
            if (r > tolerance) {
                ++scan.nondirectional_count;
            } else {
                scan.directional_cross_terms.emplace_back(static_cast<int>(k), static_cast<int>(l));
            }
        }
    }
    const auto cross = m * (m - 1);
    scan.directional_fraction =
        cross > 0 ? static_cast<double>(scan.directional_cross_terms.size()) /
                        static_cast<double>(cross)
                  : 0.0;
    return scan;
}

GeometryScan scan_geometry(const BeamGeometry& geometry, double tolerance) {
    validate(geometry);
    return scan_beams(geometry.write_angles_deg, geometry.write_angles_deg,
                      geometry.stokes_angle_deg, tolerance);
}

}  // namespace qmux

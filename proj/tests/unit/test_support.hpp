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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qmux/core_model.hpp"

namespace qmux::testing {

/// Random full-rank density matrix G G^dagger / Tr from a complex Ginibre
/// matrix. `rank` < 4 zeroes trailing columns of G.
inline Matrix4c random_density(std::mt19937_64& rng, int rank = 4) {
    std::normal_distribution<double> n;
    Matrix4c g = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < rank; ++k) g(i, k) = Complex(n(rng), n(rng));
    }
    Matrix4c rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
}

/// Transmitted or reflected polarization ket written out by hand.
inline Eigen::Vector2cd analyzer_ket(const AnalyzerSetting& s, Port port) {
    const double r = 1.0 / std::numbers::sqrt2;
    Eigen::Vector2cd k;
    switch (s.kind()) {
        case AnalyzerSetting::Kind::Linear: {
            const double t = s.angle_deg() * std::numbers::pi / 180.0;
            if (port == Port::Transmit) {
                k << std::cos(t), std::sin(t);
            } else {
                k << -std::sin(t), std::cos(t);
            }
            break;
        }
        case AnalyzerSetting::Kind::CircularR:
            k << r, (port == Port::Transmit ? Complex(0, r) : Complex(0, -r));
            break;
        case AnalyzerSetting::Kind::CircularL:
            k << r, (port == Port::Transmit ? Complex(0, -r) : Complex(0, r));
            break;
    }
    return k;
}

/// <psi_s psi_a| rho |psi_s psi_a> with an explicit product ket.
inline double oracle_probability(const Matrix4c& rho, const SettingPair& pair, Port ps, Port pa) {
    const auto a = analyzer_ket(pair.stokes, ps);
    const auto b = analyzer_ket(pair.anti_stokes, pa);
    Vector4c psi;
    psi << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return (psi.adjoint() * rho * psi)(0, 0).real();
}

inline AnalyzerSetting random_setting(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    const int k = kind(rng);
    if (k == 4) return AnalyzerSetting::circular_r();
    if (k == 5) return AnalyzerSetting::circular_l();
    return AnalyzerSetting::linear(angle(rng));
}

}  // namespace qmux::testing

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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmux/core_model.hpp"

namespace qmux {

/// Outcome weights for one setting pair, ordered (D1T1, D1T2, D2T1, D2T2).
/// Either integer counts or exact probabilities.
struct OutcomeWeights {
    SettingPair settings;
    std::array<double, 4> w{};

    double total() const { return w[0] + w[1] + w[2] + w[3]; }
};

OutcomeWeights to_weights(const SettingPair& settings, const CoincidenceCounts& counts);
std::vector<OutcomeWeights> to_weights(const CoincidenceTable& table);

/// Born-rule outcome probabilities of `rho` for each pair.
std::vector<OutcomeWeights> exact_outcome_weights(const DensityMatrix& rho,
                                                  std::span<const SettingPair> pairs);

struct Correlation {
    double value = 0.0;
    double std_error = 0.0;
};

/// E = (C11 + C22 - C12 - C21) / (C11 + C12 + C21 + C22) with binomial
/// standard error sqrt((1 - E^2) / N). Throws EstimationError on an empty row.
Correlation correlation_E(const CoincidenceCounts& counts);
Correlation correlation_E(const OutcomeWeights& weights);

struct BellSettings {
    double s = 0.0;
    double s_prime = 45.0;
    double a = 22.5;
    double a_prime = 67.5;

    /// (s, a), (s, a'), (s', a), (s', a').
    std::array<SettingPair, 4> pairs() const;
};

struct BellResult {
    double S = 0.0;
    double std_error = 0.0;
    std::array<Correlation, 4> E{};
};

/// S = |E(s, a) - E(s, a') + E(s', a) + E(s', a')|, errors added in
/// quadrature. Throws InputError when a pair is missing.
BellResult bell_S(const CoincidenceTable& table, const BellSettings& settings = {});
BellResult bell_S(std::span<const OutcomeWeights> weights, const BellSettings& settings = {});

/// Linear-inversion estimate from the nine {H/V, D/A, R/L}^2 setting pairs.
/// Hermitian with unit trace by construction; may have negative eigenvalues.
Matrix4c tomo_reconstruct(std::span<const OutcomeWeights> weights);
Matrix4c tomo_reconstruct(const CoincidenceTable& table);

/// Clears negative eigenvalues one at a time, spreading each deficit evenly
/// over the remaining positive eigenvalues, then renormalizes the trace.
DensityMatrix project_physical(const Matrix4c& rho_raw);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// <phi|rho|phi> for a normalized pure state.
double fidelity_pure(const DensityMatrix& rho, const Vector4c& phi);

struct DecayPoint {
    double tau = 0.0;      // microseconds
    double s = 0.0;        // Bell parameter
    double s_error = 0.0;  // 0 means unweighted
};

struct DecayFit {
    double tau_c = 0.0;    // +inf when the data do not decay
    double v_ref = 0.0;    // visibility at tau_ref
    double tau_ref = 0.0;
    double lifetime_chsh = 0.0;  // tau where 2 sqrt(2) V(tau) = 2
    /// Covariance of (tau_c, v_ref); zero when no errors were supplied
    /// and the data determine the model exactly.
    std::array<std::array<double, 2>, 2> covariance{};
    std::vector<std::string> warnings;
};

/// Weighted least squares of ln(S / 2 sqrt 2) = ln v_ref - (tau - tau_ref) / tau_c.
DecayFit fit_decay(std::span<const DecayPoint> points, double tau_ref = 0.7);

}  // namespace qmux

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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmux/core_model.hpp"
#include "qmux/quantum_stats.hpp"
#include "qmux/trial_engine.hpp"

namespace qmux::cli {

/// Fixed default seed so that reproduced tables are identical across machines.
inline constexpr std::uint64_t kDefaultSeed = 0x5157'5045'2019ULL;

class CalibrationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

bool all_pass(const std::vector<Check>& checks);

/// Seed for the index-th independent run derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Unit heralding and retrieval efficiencies, no dark counts. Bell and
/// tomography statistics depend only on the pair state, so this reaches a
/// coincidence target with far fewer trials.
ExperimentConfig idealized_detection(ExperimentConfig config);

struct ChshPoint {
    int m = 1;
    double tau = 0.0;
    BellResult bell;
    double s_model = 0.0;  // 2 sqrt(2) V(m, tau)
    std::uint64_t trials_per_setting = 0;
    CoincidenceTable table;
};

/// Runs the four canonical setting pairs with enough trials to expect
/// `coincidences` coincidences per pair.
ChshPoint simulate_chsh(const ExperimentConfig& config, int m, double tau,
                        std::uint64_t coincidences, std::uint64_t seed, unsigned threads);

/// Trials needed to expect `target` events at per-trial probability p.
std::uint64_t trials_for(double target, double p);

// Calibration -----------------------------------------------------------------

struct CalibrationTargets {
    double s1 = 2.65;      // m = 1 at tau_ref
    double s_high = 2.30;  // m = m_high at tau_ref
    double s_late = 2.03;  // m = m_high at tau_late
    int m_high = 19;
    double tau_ref = 0.7;
    double tau_late = 30.0;
};

struct Calibration {
    double v1 = 0.0;
    double beta = 0.0;
    double tau_c = 0.0;  // +inf when S does not decay
};

/// Closed-form inversion of the visibility model. Throws CalibrationError
/// for targets that break monotonicity in m or tau or exceed 2 sqrt 2.
Calibration calibrate(const CalibrationTargets& targets, double chi);

ExperimentConfig apply_calibration(ExperimentConfig config, const Calibration& cal,
                                   double tau_ref);

std::string calibration_patch_json(const Calibration& cal);

struct CalibrationCheck {
    std::vector<ChshPoint> points;  // (1, ref), (m_high, ref), (m_high, late)
    std::vector<double> targets;
    std::vector<Check> checks;
};

/// Re-simulates the three calibration points and compares with the targets.
CalibrationCheck verify_calibration(const ExperimentConfig& calibrated,
                                    const CalibrationTargets& targets, std::uint64_t coincidences,
                                    std::uint64_t seed, unsigned threads);

// Figure pipelines -------------------------------------------------------------

struct HeraldRow {
    int m = 0;
    std::uint64_t trials = 0;
    std::uint64_t heralds = 0;
    double p_s_hat = 0.0;
    double std_error = 0.0;
    double p_s_exact = 0.0;
    double p_s_linear = 0.0;
};

struct Fig2Result {
    std::vector<HeraldRow> rows;
    std::vector<Check> checks;
};

Fig2Result reproduce_fig2(const ExperimentConfig& config, std::uint64_t trials_per_m,
                          std::uint64_t seed, unsigned threads);

struct Fig3Result {
    std::vector<ChshPoint> points;
    DecayFit fit;
    std::vector<Check> checks;
};

Fig3Result reproduce_fig3(const ExperimentConfig& config, const std::vector<double>& taus,
                          std::uint64_t coincidences, std::uint64_t seed, unsigned threads);

struct Fig4Result {
    Matrix4c raw;
    Matrix4c physical;
    double fidelity = 0.0;
    double fidelity_model = 0.0;  // (1 + 3V) / 4 for the balanced state
    CoincidenceTable table;
    std::vector<Check> checks;
};

Fig4Result reproduce_fig4(const ExperimentConfig& config, std::uint64_t coincidences,
                          std::uint64_t seed, unsigned threads);

struct CoincidenceRateRow {
    int m = 0;
    std::uint64_t trials = 0;
    std::uint64_t coincidences = 0;
    double p_sas_hat = 0.0;
    double std_error = 0.0;
};

struct Fig5Result {
    std::vector<ChshPoint> bell;
    std::vector<CoincidenceRateRow> rates;
    double rate_ratio = 0.0;
    double r_squared = 0.0;
    std::vector<Check> checks;
};

struct Fig5Options {
    std::uint64_t chsh_coincidences = 1'000'000;
    std::uint64_t rate_coincidences_endpoints = 300'000;
    std::uint64_t rate_coincidences_interior = 20'000;
};

Fig5Result reproduce_fig5(const ExperimentConfig& config, const Fig5Options& options,
                          std::uint64_t seed, unsigned threads);

/// Coefficient of determination of an ordinary least-squares line.
double linear_r_squared(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qmux::cli

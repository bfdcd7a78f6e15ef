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
#include <string>
#include <vector>

#include "qmux/core_model.hpp"
#include "qmux/rng.hpp"

namespace qmux {

/// Effective two-photon visibility for an m-mode train read out after
/// `tau` microseconds:
///
///   V(m, tau) = v1 / (1 + beta (m - 1) chi) * exp(-(tau - tau_ref) / tau_c)
///
/// clamped to [0, 1]. The first factor models polarization-uniform light
/// from unwanted spin waves; the second models memory dephasing.
double visibility(const ExperimentConfig& config, int m, double tau);

DensityMatrix effective_pair_state(const ExperimentConfig& config, int m, double tau);

struct HeraldProbability {
    double exact = 0.0;   // 1 - (1 - chi eta_d)^m
    double linear = 0.0;  // m chi eta_d
};

HeraldProbability analytic_p_s(const ExperimentConfig& config, int m);

/// Per-(config, tau, setting pair) constants for the trial state machine.
///
/// Random variables of a trial live at fixed stream slots, in protocol
/// order: excitation+detection of the first true Stokes click, detector
/// identity, dark counts on D1 and D2, readout success, anti-Stokes
/// detector. A slot is only evaluated when the protocol reaches it.
class TrialKernel {
   public:
    enum Slot : std::uint64_t {
        kFirstTrueClick = 0,
        kStokesDetector = 1,
        kDarkD1 = 2,
        kDarkD2 = 3,
        kReadout = 4,
        kAntiStokesDetector = 5,
    };

    TrialKernel(const ExperimentConfig& config, double tau, const SettingPair& pair);

    TrialRecord run(const CounterStream& stream, std::uint64_t trial_index) const;

    double p_click_per_bin() const { return p_click_; }
    double p_readout() const { return p_readout_; }
    double p_accidental() const { return p_accidental_; }
    double p_d1() const { return p_d1_; }
    double p_t1_given_d1() const { return p_t1_given_d1_; }
    double p_t1_given_d2() const { return p_t1_given_d2_; }

   private:
    // Returns m + 1 when the geometric draw lands past the last bin.
    int first_bin(double u, double p, double log_q, double no_click) const;

    int m_;
    double tau_;
    double p_click_;
    double log_q_click_;
    double none_click_;  // (1 - p_click)^m
    double p_dark_;
    double log_q_dark_;
    double none_dark_;
    double p_d1_;
    double p_t1_given_d1_;
    double p_t1_given_d2_;
    double p_readout_;
    double p_accidental_;
};

/// One write-clean cycle. `stream` must be exclusive to this trial.
TrialRecord run_trial(const ExperimentConfig& config, double tau, const SettingPair& pair,
                      const CounterStream& stream, std::uint64_t trial_index = 0);

struct RunPlan {
    ExperimentConfig config;
    double tau = 0.7;
    std::vector<SettingPair> settings;
    std::uint64_t n_trials = 0;  // per setting pair
    std::uint64_t seed = 0;
};

std::vector<std::string> plan_violations(const RunPlan& plan);

struct BatchResult {
    CoincidenceTable coincidences;
    std::uint64_t trials = 0;
    std::uint64_t heralds = 0;
    std::uint64_t dark_heralds = 0;
    double p_s_hat = 0.0;
    double p_sas_hat = 0.0;
    /// Same-detector coincidences (D1T1 + D2T2) per trial, same basis.
    double p_sas_correlated_hat = 0.0;
    /// "H-V" when the (0, 0) setting pair was run, otherwise "all".
    std::string p_sas_basis;
    std::vector<std::uint64_t> herald_bin_histogram;  // index 0 is bin 1
};

struct ExecutionOptions {
    unsigned threads = 1;
};

/// Runs n_trials per setting pair. Trial streams are keyed by
/// (seed, setting index, trial index) and partial tables merge by integer
/// addition, so the result is bitwise independent of `options.threads`.
/// Throws InputError for an invalid plan.
BatchResult run_batch(const RunPlan& plan, const ExecutionOptions& options = {});

/// Canonical CHSH setting pairs: (0, 22.5), (0, 67.5), (45, 22.5), (45, 67.5).
std::vector<SettingPair> chsh_setting_pairs();

/// The nine analyzer pairs {H/V, D/A, R/L}^2 used for tomography.
std::vector<SettingPair> tomography_setting_pairs();

SettingPair hv_setting_pair();

}  // namespace qmux

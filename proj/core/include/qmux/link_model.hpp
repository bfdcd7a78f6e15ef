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

namespace qmux {

/// 1 - (1 - p)^n, evaluated without cancellation for small p. Shared by the
/// multiplexed-link and feedback-protocol models.
double geometric_success(double p, double n);

struct LinkConfig {
    double L0 = 60.0;           // km
    double c_fiber = 2.0e5;     // km/s
    double p_link_single = 1e-3;
    int m = 19;
    double p_bsm = 1.0;
    bool apply_bsm_separately = false;
    // Write and clean durations, only counted in strict timing mode.
    double delta_t_write = 0.0;  // us
    double delta_t_clean = 0.0;  // us
    bool strict_timing = false;

    /// P_L^(1), including the BSM factor when applied separately.
    double effective_p1() const;
};

std::vector<std::string> link_violations(const LinkConfig& link);

double communication_time_us(const LinkConfig& link);

struct LinkProbability {
    double exact = 0.0;
    double linear = 0.0;  // m p1, may exceed 1
};

LinkProbability p_link_multiplexed(double p1, int m);

struct EntanglementTime {
    double single_us = 0.0;
    double multiplexed_linear_us = 0.0;  // (L0/c) / (m p1)
    double multiplexed_exact_us = 0.0;   // (L0/c) / (1 - (1 - p1)^m)
    double speedup_linear = 0.0;
    double speedup_exact = 0.0;
    std::vector<std::string> diagnostics;
};

/// Mean time to herald link entanglement. Overflowing expectations are
/// reported as +inf with a diagnostic.
EntanglementTime avg_entanglement_time(const LinkConfig& link);

/// Monte Carlo estimate of the multiplexed mean time: the number of trials
/// to first success is sampled per run by inverting the geometric CDF.
double simulate_mean_link_time(const LinkConfig& link, std::uint64_t runs, std::uint64_t seed);

struct FeedbackConfig {
    double eta = 0.1;
    double chi = 0.01;
    int N = 19;
    double delta_t = 0.3;  // us, one write/clean period
};

struct FeedbackResult {
    double exact = 0.0;   // 1 - (1 - eta chi)^N
    double linear = 0.0;  // N eta chi
    double memory_time_us = 0.0;     // T = N delta_t
    double deterministic_trials = 0.0;  // 1 / (eta chi)
};

FeedbackResult feedback_success(const FeedbackConfig& fb);

struct StrategyComparison {
    int modes = 0;
    double feedback_probability = 0.0;
    double multiplexed_probability = 0.0;
    double feedback_time_us = 0.0;
    double multiplexed_time_us = 0.0;
    double feedback_memory_us = 0.0;
    double multiplexed_memory_us = 0.0;
    bool probabilities_equal = false;
    bool times_equal = false;
};

/// Single-mode feedback with N trials against an N-mode write train, both
/// at the same per-attempt success eta chi, taking the train period as
/// N delta_t. Throws InputError when fb.N differs from config.m.
StrategyComparison feedback_vs_multiplexed_report(const FeedbackConfig& fb,
                                                  const ExperimentConfig& config);

struct LinkSweep {
    std::vector<double> L0;
    std::vector<int> m;
    std::vector<double> p1;
    LinkConfig base;
};

struct LinkSweepRow {
    double L0 = 0.0;
    int m = 0;
    double p1 = 0.0;
    double comm_time_us = 0.0;
    LinkProbability p_link;
    EntanglementTime time;
};

std::vector<LinkSweepRow> run_link_sweep(const LinkSweep& sweep);

}  // namespace qmux

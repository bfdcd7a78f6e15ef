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

#include "qmux/link_model.hpp"

#include <cmath>
#include <limits>

#include "qmux/rng.hpp"

namespace qmux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_valid(const LinkConfig& link) {
    auto problems = link_violations(link);
    if (problems.empty()) return;
    std::string msg = "invalid link config:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InputError(msg);
}

double trial_time_us(const LinkConfig& link, int m) {
    double t = communication_time_us(link);
    if (link.strict_timing) t += static_cast<double>(m) * link.delta_t_write + link.delta_t_clean;
    return t;
}

double safe_ratio(double num, double den, std::vector<std::string>& diag, const char* what) {
    const double r = num / den;
    if (!std::isfinite(r)) {
        diag.push_back(std::string(what) + " overflows; reported as +inf");
        return kInf;
    }
    return r;
}

}  // namespace

double geometric_success(double p, double n) { return -std::expm1(n * std::log1p(-p)); }

double LinkConfig::effective_p1() const {
    return apply_bsm_separately ? p_link_single * p_bsm : p_link_single;
}

std::vector<std::string> link_violations(const LinkConfig& link) {
    std::vector<std::string> out;
    if (!(std::isfinite(link.L0) && link.L0 > 0.0)) out.push_back("L0 must be > 0");
    if (!(std::isfinite(link.c_fiber) && link.c_fiber > 0.0)) out.push_back("c_fiber must be > 0");
    if (!(link.p_link_single > 0.0 && link.p_link_single <= 1.0)) {
        out.push_back("p_link_single must lie in (0, 1]");
    }
    if (!(link.p_bsm > 0.0 && link.p_bsm <= 1.0)) out.push_back("p_bsm must lie in (0, 1]");
    if (link.m < 1) out.push_back("m must be >= 1");
    if (!(link.delta_t_write >= 0.0 && link.delta_t_clean >= 0.0)) {
        out.push_back("write/clean durations must be >= 0");
    }
    return out;
}

double communication_time_us(const LinkConfig& link) { return link.L0 * 1e6 / link.c_fiber; }

LinkProbability p_link_multiplexed(double p1, int m) {
    if (!(p1 > 0.0 && p1 <= 1.0)) throw InputError("p1 must lie in (0, 1]");
    if (m < 1) throw InputError("m must be >= 1");
    return {geometric_success(p1, m), static_cast<double>(m) * p1};
}

EntanglementTime avg_entanglement_time(const LinkConfig& link) {
    require_valid(link);
    const double p1 = link.effective_p1();
    const auto p = p_link_multiplexed(p1, link.m);
    EntanglementTime out;
    const double t1 = trial_time_us(link, 1);
    const double tm = trial_time_us(link, link.m);
    out.single_us = safe_ratio(t1, p1, out.diagnostics, "single-mode expected time");
    out.multiplexed_linear_us = safe_ratio(tm, p.linear, out.diagnostics, "linearized expected time");
    out.multiplexed_exact_us = safe_ratio(tm, p.exact, out.diagnostics, "exact expected time");
    out.speedup_linear = out.single_us / out.multiplexed_linear_us;
    out.speedup_exact = out.single_us / out.multiplexed_exact_us;
    if (std::isnan(out.speedup_linear) || std::isnan(out.speedup_exact)) {
        out.diagnostics.push_back("speedup undefined for infinite times");
    }
    return out;
}

double simulate_mean_link_time(const LinkConfig& link, std::uint64_t runs, std::uint64_t seed) {
    require_valid(link);
    if (runs == 0) throw InputError("runs must be >= 1");
    const double p = geometric_success(link.effective_p1(), link.m);
    const double log_q = std::log1p(-p);
    double sum_trials = 0.0;
    for (std::uint64_t i = 0; i < runs; ++i) {
        const double u = CounterStream::for_trial(seed, 0, i).uniform_open0(0);
        // P(trials > k) = (1 - p)^k
        const double trials = p >= 1.0 ? 1.0 : std::floor(std::log(u) / log_q) + 1.0;
        sum_trials += trials;
    }
    return sum_trials / static_cast<double>(runs) * trial_time_us(link, link.m);
}

FeedbackResult feedback_success(const FeedbackConfig& fb) {
    if (!(fb.eta >= 0.0 && fb.eta <= 1.0 && fb.chi >= 0.0 && fb.chi <= 1.0)) {
        throw InputError("eta and chi must be probabilities");
    }
    if (fb.N < 1) throw InputError("N must be >= 1");
    if (!(fb.delta_t > 0.0)) throw InputError("delta_t must be > 0");
    const double p = fb.eta * fb.chi;
    FeedbackResult out;
    out.exact = geometric_success(p, fb.N);
    out.linear = static_cast<double>(fb.N) * p;
    out.memory_time_us = static_cast<double>(fb.N) * fb.delta_t;
    out.deterministic_trials = p > 0.0 ? 1.0 / p : kInf;
    return out;
}

StrategyComparison feedback_vs_multiplexed_report(const FeedbackConfig& fb,
                                                  const ExperimentConfig& config) {
    if (fb.N != config.m) {
        throw InputError("feedback trial count N must equal the mode count m");
    }
    const auto feedback = feedback_success(fb);
    StrategyComparison out;
    out.modes = config.m;
    out.feedback_probability = feedback.exact;
    out.multiplexed_probability = geometric_success(fb.eta * fb.chi, config.m);
    out.feedback_time_us = static_cast<double>(fb.N) * fb.delta_t;
    // A train of m write pulses lasts about m single-mode write periods.
    out.multiplexed_time_us = static_cast<double>(config.m) * fb.delta_t;
    out.feedback_memory_us = feedback.memory_time_us;
    out.multiplexed_memory_us = out.multiplexed_time_us;
    out.probabilities_equal = out.feedback_probability == out.multiplexed_probability;
    out.times_equal = out.feedback_time_us == out.multiplexed_time_us;
    return out;
}

std::vector<LinkSweepRow> run_link_sweep(const LinkSweep& sweep) {
    std::vector<LinkSweepRow> rows;
    for (double L0 : sweep.L0) {
        for (int m : sweep.m) {
            for (double p1 : sweep.p1) {
                LinkConfig link = sweep.base;
                link.L0 = L0;
                link.m = m;
                link.p_link_single = p1;
                LinkSweepRow row;
                row.L0 = L0;
                row.m = m;
                row.p1 = p1;
                row.comm_time_us = communication_time_us(link);
                row.p_link = p_link_multiplexed(link.effective_p1(), m);
                row.time = avg_entanglement_time(link);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace qmux

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

#include "qmux/trial_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace qmux {

double visibility(const ExperimentConfig& config, int m, double tau) {
    const double mixing = 1.0 + config.beta * static_cast<double>(m - 1) * config.chi;
    double v = config.v1 / mixing;
    if (std::isfinite(config.tau_c)) v *= std::exp(-(tau - config.tau_ref) / config.tau_c);
    return std::clamp(v, 0.0, 1.0);
}

DensityMatrix effective_pair_state(const ExperimentConfig& config, int m, double tau) {
    return werner_state(config.theta, visibility(config, m, tau));
}

HeraldProbability analytic_p_s(const ExperimentConfig& config, int m) {
    const double p = config.chi * config.eta_d;
    HeraldProbability out;
    out.exact = -std::expm1(static_cast<double>(m) * std::log1p(-p));
    out.linear = static_cast<double>(m) * p;
    return out;
}

// TrialKernel ---------------------------------------------------------------------

TrialKernel::TrialKernel(const ExperimentConfig& config, double tau, const SettingPair& pair)
    : m_(config.m), tau_(tau) {
    validate(config);
    if (!(std::isfinite(tau) && tau >= 0.0)) {
        throw InputError("storage time must be finite and >= 0");
    }
    p_click_ = config.chi * config.eta_d;
    log_q_click_ = std::log1p(-p_click_);
    none_click_ = std::exp(static_cast<double>(m_) * log_q_click_);
    p_dark_ = config.dark_rate;
    log_q_dark_ = std::log1p(-p_dark_);
    none_dark_ = std::exp(static_cast<double>(m_) * log_q_dark_);

    const DensityMatrix rho = effective_pair_state(config, m_, tau);
    p_d1_ = std::clamp(stokes_marginal(rho, pair.stokes, Port::Transmit), 0.0, 1.0);
    const double p_d1_t1 = joint_probability(rho, pair, Port::Transmit, Port::Transmit);
    const double p_d2_t1 = joint_probability(rho, pair, Port::Reflect, Port::Transmit);
    p_t1_given_d1_ = p_d1_ > 0.0 ? std::clamp(p_d1_t1 / p_d1_, 0.0, 1.0) : 0.5;
    p_t1_given_d2_ = p_d1_ < 1.0 ? std::clamp(p_d2_t1 / (1.0 - p_d1_), 0.0, 1.0) : 0.5;

    p_readout_ = config.gamma * config.eta_as;
    const double background =
        config.beta * static_cast<double>(m_ - 1) * config.chi * config.gamma * config.eta_as;
    p_accidental_ = std::min(1.0, config.dark_rate + background);
}

int TrialKernel::first_bin(double u, double p, double log_q, double no_click) const {
    if (p <= 0.0 || u <= no_click) return m_ + 1;
    const double k = std::floor(std::log(u) / log_q);
    if (!(k < static_cast<double>(m_))) return m_;
    return static_cast<int>(k) + 1;
}

TrialRecord TrialKernel::run(const CounterStream& stream, std::uint64_t trial_index) const {
    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.storage_time = tau_;

    const int true_bin =
        first_bin(stream.uniform_open0(kFirstTrueClick), p_click_, log_q_click_, none_click_);
    int dark_d1 = m_ + 1;
    int dark_d2 = m_ + 1;
    if (p_dark_ > 0.0) {
        dark_d1 = first_bin(stream.uniform_open0(kDarkD1), p_dark_, log_q_dark_, none_dark_);
        dark_d2 = first_bin(stream.uniform_open0(kDarkD2), p_dark_, log_q_dark_, none_dark_);
    }
    const int dark_bin = std::min(dark_d1, dark_d2);

    if (true_bin <= m_ && true_bin <= dark_bin) {
        const bool d1 = stream.uniform(kStokesDetector) < p_d1_;
        rec.herald = Herald{true_bin, d1 ? StokesDetector::D1 : StokesDetector::D2};
        if (stream.uniform(kReadout) < p_readout_) {
            const double p_t1 = d1 ? p_t1_given_d1_ : p_t1_given_d2_;
            rec.readout = stream.uniform(kAntiStokesDetector) < p_t1 ? AntiStokesDetector::T1
                                                                     : AntiStokesDetector::T2;
        }
    } else if (dark_bin <= m_) {
        rec.herald_was_dark = true;
        rec.herald =
            Herald{dark_bin, dark_d1 <= dark_d2 ? StokesDetector::D1 : StokesDetector::D2};
        if (stream.uniform(kReadout) < p_accidental_) {
            rec.readout = stream.uniform(kAntiStokesDetector) < 0.5 ? AntiStokesDetector::T1
                                                                    : AntiStokesDetector::T2;
        }
    }
    return rec;
}

TrialRecord run_trial(const ExperimentConfig& config, double tau, const SettingPair& pair,
                      const CounterStream& stream, std::uint64_t trial_index) {
    return TrialKernel(config, tau, pair).run(stream, trial_index);
}

// Batches -------------------------------------------------------------------------

std::vector<std::string> plan_violations(const RunPlan& plan) {
    std::vector<std::string> out = config_violations(plan.config);
    if (!(std::isfinite(plan.tau) && plan.tau >= 0.0)) out.push_back("tau must be >= 0");
    if (plan.settings.empty()) out.push_back("settings must not be empty");
    if (plan.n_trials < 1) out.push_back("n_trials must be >= 1");
    constexpr auto kLimit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (!plan.settings.empty() && plan.n_trials > kLimit / plan.settings.size()) {
        out.push_back("n_trials * settings exceeds 2^63");
    }
    return out;
}

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 18;

struct Partial {
    std::vector<CoincidenceCounts> per_setting;
    std::vector<std::uint64_t> histogram;
    std::uint64_t dark_heralds = 0;
};

void simulate_chunk(const TrialKernel& kernel, std::uint64_t seed, std::uint64_t setting,
                    std::uint64_t begin, std::uint64_t end, CoincidenceCounts& counts,
                    std::vector<std::uint64_t>& histogram, std::uint64_t& dark_heralds) {
    for (std::uint64_t t = begin; t < end; ++t) {
        const TrialRecord rec = kernel.run(CounterStream::for_trial(seed, setting, t), t);
        counts.record(rec);
        if (rec.herald) {
            ++histogram[static_cast<std::size_t>(rec.herald->bin - 1)];
            if (rec.herald_was_dark) ++dark_heralds;
        }
    }
}

}  // namespace

BatchResult run_batch(const RunPlan& plan, const ExecutionOptions& options) {
    if (auto problems = plan_violations(plan); !problems.empty()) {
        std::string msg = "invalid run plan:";
        for (const auto& p : problems) msg += " " + p + ";";
        throw InputError(msg);
    }

    std::vector<TrialKernel> kernels;
    kernels.reserve(plan.settings.size());
    for (const auto& pair : plan.settings) kernels.emplace_back(plan.config, plan.tau, pair);

    const std::uint64_t chunks_per_setting = (plan.n_trials + kChunk - 1) / kChunk;
    const std::uint64_t total_chunks = chunks_per_setting * plan.settings.size();
    const auto bins = static_cast<std::size_t>(plan.config.m);

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                            : options.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, total_chunks));

    std::vector<Partial> partials(threads);
    for (auto& p : partials) {
        p.per_setting.resize(plan.settings.size());
        p.histogram.assign(bins, 0);
    }

    std::atomic<std::uint64_t> next{0};
    auto worker = [&](Partial& part) {
        for (std::uint64_t c = next.fetch_add(1); c < total_chunks; c = next.fetch_add(1)) {
            const std::uint64_t setting = c / chunks_per_setting;
            const std::uint64_t begin = (c % chunks_per_setting) * kChunk;
            const std::uint64_t end = std::min(plan.n_trials, begin + kChunk);
            simulate_chunk(kernels[setting], plan.seed, setting, begin, end,
                           part.per_setting[setting], part.histogram, part.dark_heralds);
        }
    };

    if (threads <= 1) {
        worker(partials.front());
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, std::ref(partials[i]));
    }

    BatchResult result;
    result.herald_bin_histogram.assign(bins, 0);
    std::vector<CoincidenceCounts> merged(plan.settings.size());
    for (const auto& part : partials) {
        for (std::size_t s = 0; s < merged.size(); ++s) merged[s] += part.per_setting[s];
        for (std::size_t b = 0; b < bins; ++b) {
            result.herald_bin_histogram[b] =
                checked_add(result.herald_bin_histogram[b], part.histogram[b]);
        }
        result.dark_heralds = checked_add(result.dark_heralds, part.dark_heralds);
    }
    for (std::size_t s = 0; s < merged.size(); ++s) {
        result.coincidences.add(plan.settings[s], merged[s]);
    }

    std::uint64_t coincidences_all = 0;
    std::uint64_t correlated_all = 0;
    for (const auto& c : merged) {
        correlated_all = checked_add(correlated_all, checked_add(c.d1t1, c.d2t2));
        result.trials = checked_add(result.trials, c.n_total);
        result.heralds = checked_add(result.heralds, checked_add(c.n_d1, c.n_d2));
        coincidences_all = checked_add(coincidences_all, c.coincidences());
    }
    result.p_s_hat = static_cast<double>(result.heralds) / static_cast<double>(result.trials);
    if (const auto* hv = result.coincidences.find(hv_setting_pair())) {
        result.p_sas_basis = "H-V";
        result.p_sas_hat =
            static_cast<double>(hv->coincidences()) / static_cast<double>(hv->n_total);
        result.p_sas_correlated_hat =
            static_cast<double>(hv->d1t1 + hv->d2t2) / static_cast<double>(hv->n_total);
    } else {
        result.p_sas_basis = "all";
        result.p_sas_hat = static_cast<double>(coincidences_all) / static_cast<double>(result.trials);
        result.p_sas_correlated_hat =
            static_cast<double>(correlated_all) / static_cast<double>(result.trials);
    }
    return result;
}

std::vector<SettingPair> chsh_setting_pairs() {
    const auto s = AnalyzerSetting::linear(0.0);
    const auto s_prime = AnalyzerSetting::linear(45.0);
    const auto a = AnalyzerSetting::linear(22.5);
    const auto a_prime = AnalyzerSetting::linear(67.5);
    return {{s, a}, {s, a_prime}, {s_prime, a}, {s_prime, a_prime}};
}

std::vector<SettingPair> tomography_setting_pairs() {
    const std::array<AnalyzerSetting, 3> bases = {
        AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(45.0), AnalyzerSetting::circular_r()};
    std::vector<SettingPair> out;
    for (const auto& s : bases) {
        for (const auto& a : bases) out.push_back({s, a});
    }
    return out;
}

SettingPair hv_setting_pair() {
    return {AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(0.0)};
}

}  // namespace qmux

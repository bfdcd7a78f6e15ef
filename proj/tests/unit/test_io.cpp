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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qmux/io.hpp"
#include "test_support.hpp"

namespace qmux {
namespace {

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(300.0), "300");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        EXPECT_EQ(std::stod(format_number(x)), x);
    }
}

TEST(ConfigJson, RoundTrip) {
    ExperimentConfig c;
    c.m = 7;
    c.beta = 0.8454106280193238;
    c.tau_c = 234.63777275600935;
    EXPECT_EQ(parse_experiment_config(to_json(c)), c);
    c.tau_c = std::numeric_limits<double>::infinity();
    EXPECT_EQ(parse_experiment_config(to_json(c)), c);
}

TEST(ConfigJson, MissingKeysKeepBase) {
    ExperimentConfig base;
    base.m = 5;
    const auto c = parse_experiment_config(R"({"chi": 0.02})", base);
    EXPECT_EQ(c.m, 5);
    EXPECT_EQ(c.chi, 0.02);
}

TEST(ConfigJson, Errors) {
    EXPECT_NE(error_of([] { parse_experiment_config(R"({"chi": 0.01, "bogus": 1})"); })
                  .find("unknown field 'bogus'"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse_experiment_config("{\n  \"chi\": 0.01,\n  \"m\": ]\n}"); })
                  .find("line 3"),
              std::string::npos);
    EXPECT_THROW(parse_experiment_config(R"({"chi": "x"})"), ConfigError);
    EXPECT_THROW(parse_experiment_config(R"({"m": 1.5})"), ConfigError);
    EXPECT_THROW(parse_experiment_config(R"({"chi": 2.0})"), ConfigError);
    EXPECT_THROW(parse_experiment_config("[1, 2]"), ConfigError);
}

TEST(RunPlanJson, PresetsAndExplicitPairs) {
    const auto doc = parse_run_plan(R"({
        "config": {"m": 3}, "tau": 0.7, "settings": "chsh", "n_trials": 1000, "seed": 42,
        "m_values": [1, 2, 3]})");
    EXPECT_EQ(doc.plan.config.m, 3);
    EXPECT_EQ(doc.plan.settings, chsh_setting_pairs());
    EXPECT_EQ(doc.plan.seed, 42u);
    EXPECT_EQ(doc.m_values, (std::vector<int>{1, 2, 3}));

    const auto explicit_pairs = parse_run_plan(R"({
        "tau": 5, "settings": [[0, "22.5"], ["R", "L"]], "n_trials": 10, "seed": 1})");
    ASSERT_EQ(explicit_pairs.plan.settings.size(), 2u);
    EXPECT_EQ(explicit_pairs.plan.settings[1].anti_stokes, AnalyzerSetting::circular_l());
    EXPECT_EQ(explicit_pairs.plan.settings[0].anti_stokes, AnalyzerSetting::linear(22.5));
}

TEST(RunPlanJson, Errors) {
    EXPECT_THROW(parse_run_plan(R"({"tau": 0.7, "settings": "hv", "n_trials": 10})"), ConfigError);
    EXPECT_THROW(parse_run_plan(R"({"tau": 0.7, "settings": "xyz", "n_trials": 10, "seed": 1})"),
                 ConfigError);
    EXPECT_THROW(parse_run_plan(R"({"tau": 0.7, "settings": "hv", "n_trials": -1, "seed": 1})"),
                 ConfigError);
    EXPECT_THROW(parse_run_plan(R"({"tau": 0.7, "settings": "hv", "n_trials": 1, "seed": 1,
                                   "m_values": [0]})"),
                 ConfigError);
}

CoincidenceTable sample_table() {
    CoincidenceTable t;
    std::uint64_t k = 1;
    for (const auto& p : tomography_setting_pairs()) {
        CoincidenceCounts c;
        c.d1t1 = 10 * k;
        c.d1t2 = k;
        c.d2t1 = 2 * k;
        c.d2t2 = 9 * k;
        c.n_d1 = c.d1t1 + c.d1t2 + k;
        c.n_d2 = c.d2t1 + c.d2t2;
        c.n_total = 1000 * k;
        t.add(p, c);
        ++k;
    }
    return t;
}

TEST(CoincidenceCsv, RoundTrip) {
    const std::vector<TaggedTable> one = {{std::nullopt, sample_table()}};
    const std::string text = write_coincidence_csv(one);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "theta_s,theta_a,C_D1T1,C_D1T2,C_D2T1,C_D2T2,N_D1,N_D2,N_total");
    const auto back = read_coincidence_csv(text);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_FALSE(back[0].m.has_value());
    EXPECT_EQ(back[0].table, one[0].table);
    EXPECT_EQ(write_coincidence_csv(back), text);
}

TEST(CoincidenceCsv, TaggedRoundTrip) {
    const std::vector<TaggedTable> tables = {{1, sample_table()}, {19, sample_table()}};
    const auto back = read_coincidence_csv(write_coincidence_csv(tables));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].m, 19);
    EXPECT_EQ(back[1].table, tables[1].table);
}

TEST(CoincidenceCsv, Errors) {
    const std::string header = "theta_s,theta_a,C_D1T1,C_D1T2,C_D2T1,C_D2T2,N_D1,N_D2,N_total\n";
    EXPECT_THROW(read_coincidence_csv(""), InputError);
    EXPECT_THROW(read_coincidence_csv("a,b\n"), InputError);
    EXPECT_NE(error_of([&] { read_coincidence_csv(header + "0,22.5,1,2,3\n"); }).find("line 2"),
              std::string::npos);
    EXPECT_THROW(read_coincidence_csv(header + "0,22.5,-1,0,0,0,0,0,10\n"), InputError);
    EXPECT_THROW(read_coincidence_csv(header + "0,Q,1,0,0,0,1,0,10\n"), InputError);
    // More coincidences than heralds.
    EXPECT_THROW(read_coincidence_csv(header + "0,22.5,5,0,0,0,1,0,10\n"), InputError);
}

TEST(CoincidenceCsv, CommentsAndBlankLinesIgnored) {
    const std::string text =
        "# counts\ntheta_s,theta_a,C_D1T1,C_D1T2,C_D2T1,C_D2T2,N_D1,N_D2,N_total\n\n"
        "0, 22.5, 1,0,0,1,1,1,10\n";
    const auto t = read_coincidence_csv(text);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].table.rows().size(), 1u);
}

TEST(DensityJson, RoundTrip) {
    std::mt19937_64 rng(82);
    const Matrix4c rho = testing::random_density(rng);
    EXPECT_EQ(parse_density_json(density_json(rho)), rho);
    EXPECT_THROW(parse_density_json(R"({"entries": [[1, 0]]})"), ConfigError);
}

TEST(DecayCsv, RoundTrip) {
    const std::vector<DecayPoint> pts = {{0.7, 2.3, 0.01}, {30.0, 2.03, 0.02}};
    const auto back = read_decay_csv(write_decay_csv(pts));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].tau, 30.0);
    EXPECT_EQ(back[1].s_error, 0.02);
    const auto no_err = read_decay_csv("tau_us,S\n0.7,2.30\n30,2.03\n");
    EXPECT_EQ(no_err[0].s_error, 0.0);
    EXPECT_THROW(read_decay_csv("tau,S\n1,2\n"), InputError);
}

TEST(DecayFitJson, InfiniteSentinel) {
    DecayFit fit;
    fit.tau_c = std::numeric_limits<double>::infinity();
    EXPECT_NE(decay_fit_json(fit).find("\"tau_c\": \"inf\""), std::string::npos);
}

TEST(ResidualCsv, RoundTrip) {
    const auto scan = scan_geometry({{-1.5, 0.5, 2.5}, 0.0});
    const auto back = read_residual_csv(residual_csv(scan));
    EXPECT_EQ(back, scan.residual);
}

TEST(GeometryJson, ObjectAndArrayForms) {
    const auto a = parse_geometry(R"({"write_angles": [1, 2, 3], "stokes_angle": 0.5,
                                      "tolerance": 1e-6})");
    EXPECT_EQ(a.geometry.write_angles_deg.size(), 3u);
    EXPECT_EQ(a.geometry.stokes_angle_deg, 0.5);
    EXPECT_EQ(a.tolerance, 1e-6);
    EXPECT_EQ(parse_geometry("[1, -1]").geometry.write_angles_deg.size(), 2u);
    EXPECT_THROW(parse_geometry("[1, 1]"), ConfigError);
    EXPECT_THROW(parse_geometry(R"({"write_angles": [1], "extra": 0})"), ConfigError);
}

TEST(LinkJson, AxesAndFeedback) {
    const auto doc = parse_link_sweep(R"({
        "L0": {"from": 20, "to": 100, "step": 20}, "m": [1, 19], "p1": 1e-3,
        "feedback": {"eta": 0.1, "chi": 0.01, "delta_t": 0.3}})");
    EXPECT_EQ(doc.sweep.L0, (std::vector<double>{20, 40, 60, 80, 100}));
    EXPECT_EQ(doc.sweep.m, (std::vector<int>{1, 19}));
    ASSERT_TRUE(doc.feedback.has_value());
    EXPECT_EQ(doc.feedback->delta_t, 0.3);
    EXPECT_EQ(run_link_sweep(doc.sweep).size(), 10u);
    EXPECT_THROW(parse_link_sweep(R"({"m": [0]})"), ConfigError);
    EXPECT_THROW(parse_link_sweep(R"({"p1": 2})"), ConfigError);
    EXPECT_THROW(parse_link_sweep(R"({"speed": 1})"), ConfigError);
}

TEST(LinkCsv, OneRowPerGridPoint) {
    LinkSweep sweep;
    sweep.L0 = {60.0};
    sweep.m = {1, 19};
    sweep.p1 = {1e-3};
    const std::string csv = link_sweep_csv(run_link_sweep(sweep));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
    EXPECT_NE(csv.find("60,19,0.001,300,"), std::string::npos);
}

TEST(BatchSummary, ContainsRates) {
    RunPlan plan;
    plan.settings = {hv_setting_pair()};
    plan.n_trials = 1000;
    const auto summary = batch_summary_json(run_batch(plan), plan);
    for (const char* key : {"p_s_hat", "p_sas_hat", "p_s_analytic", "herald_bin_histogram"}) {
        EXPECT_NE(summary.find(key), std::string::npos) << key;
    }
}

}  // namespace
}  // namespace qmux

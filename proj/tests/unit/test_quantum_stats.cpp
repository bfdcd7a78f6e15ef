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
#include <random>

#include "qmux/quantum_stats.hpp"
#include "qmux/trial_engine.hpp"
#include "test_support.hpp"

namespace qmux {
namespace {

std::vector<OutcomeWeights> oracle_weights(const Matrix4c& rho,
                                           const std::vector<SettingPair>& pairs) {
    std::vector<OutcomeWeights> out;
    for (const auto& p : pairs) {
        OutcomeWeights w{p, {}};
        w.w[0] = testing::oracle_probability(rho, p, Port::Transmit, Port::Transmit);
        w.w[1] = testing::oracle_probability(rho, p, Port::Transmit, Port::Reflect);
        w.w[2] = testing::oracle_probability(rho, p, Port::Reflect, Port::Transmit);
        w.w[3] = testing::oracle_probability(rho, p, Port::Reflect, Port::Reflect);
        out.push_back(w);
    }
    return out;
}

/// Multinomial sample of `n` coincidences per setting pair.
std::vector<OutcomeWeights> sample_counts(const std::vector<OutcomeWeights>& probs,
                                          std::uint64_t n, std::mt19937_64& rng) {
    std::vector<OutcomeWeights> out;
    for (const auto& p : probs) {
        std::discrete_distribution<int> d(p.w.begin(), p.w.end());
        OutcomeWeights c{p.settings, {}};
        for (std::uint64_t i = 0; i < n; ++i) c.w[static_cast<std::size_t>(d(rng))] += 1.0;
        out.push_back(c);
    }
    return out;
}

TEST(Correlation, CountsExample) {
    CoincidenceCounts c;
    c.d1t1 = 40;
    c.d1t2 = 10;
    c.d2t1 = 10;
    c.d2t2 = 40;
    c.n_d1 = 50;
    c.n_d2 = 50;
    c.n_total = 1000;
    const auto e = correlation_E(c);
    EXPECT_NEAR(e.value, 0.6, 1e-15);
    EXPECT_NEAR(e.std_error, 0.08, 1e-15);
    EXPECT_THROW(correlation_E(CoincidenceCounts{}), EstimationError);
}

TEST(Chsh, IdealBellStateReachesTsirelson) {
    const auto w = exact_outcome_weights(bell_state(45.0), BellSettings{}.pairs());
    const auto r = bell_S(w);
    EXPECT_NEAR(r.S, 2.0 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(r.S, 2.8284, 1e-4);
}

TEST(Chsh, WernerStateScalesWithVisibility) {
    for (double v : {0.0, 0.5, 0.8127, 0.937}) {
        const auto w = exact_outcome_weights(werner_state(45.0, v), BellSettings{}.pairs());
        EXPECT_NEAR(bell_S(w).S, kTsirelson * v, 1e-12) << v;
    }
}

TEST(Chsh, ExactWeightsMatchExplicitKets) {
    std::mt19937_64 rng(21);
    const auto pairs = tomography_setting_pairs();
    for (int i = 0; i < 20; ++i) {
        const Matrix4c rho = testing::random_density(rng);
        const auto a = exact_outcome_weights(DensityMatrix::from_matrix(rho), pairs);
        const auto b = oracle_weights(rho, pairs);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            for (int j = 0; j < 4; ++j) EXPECT_NEAR(a[k].w[j], b[k].w[j], 1e-14);
        }
    }
}

TEST(Chsh, NeverExceedsTsirelsonBound) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    std::uniform_int_distribution<int> rank(1, 4);
    for (int i = 0; i < 1000; ++i) {
        const Matrix4c rho = testing::random_density(rng, rank(rng));
        BellSettings s{angle(rng), angle(rng), angle(rng), angle(rng)};
        if (i % 2 == 0) s = BellSettings{};
        const auto pairs = s.pairs();
        const auto w = oracle_weights(rho, {pairs.begin(), pairs.end()});
        EXPECT_LE(bell_S(w, s).S, kTsirelson + 1e-12);
    }
}

TEST(Chsh, MissingPairIsAnError) {
    auto w = exact_outcome_weights(bell_state(45.0), BellSettings{}.pairs());
    w.pop_back();
    EXPECT_THROW(bell_S(w), InputError);
}

TEST(Tomography, ExactProbabilitiesReproduceState) {
    std::mt19937_64 rng(31);
    const auto pairs = tomography_setting_pairs();
    for (int i = 0; i < 100; ++i) {
        const Matrix4c rho = testing::random_density(rng, 1 + i % 4);
        const Matrix4c est = tomo_reconstruct(oracle_weights(rho, pairs));
        EXPECT_LT((est - rho).cwiseAbs().maxCoeff(), 1e-10) << i;
    }
}

TEST(Tomography, SyntheticCountsReachHighFidelity) {
    std::mt19937_64 rng(32);
    const auto pairs = tomography_setting_pairs();
    int good = 0;
    for (int i = 0; i < 100; ++i) {
        const Matrix4c rho = testing::random_density(rng, 1 + i % 4);
        const auto counts = sample_counts(oracle_weights(rho, pairs), 10'000, rng);
        const auto est = project_physical(tomo_reconstruct(counts));
        if (fidelity(est, DensityMatrix::from_matrix(rho)) >= 0.99) ++good;
    }
    EXPECT_GE(good, 95);
}

TEST(Tomography, RequiresAllNinePairs) {
    auto w = oracle_weights(bell_state(45.0).matrix(), tomography_setting_pairs());
    auto dup = w;
    dup[8] = dup[0];
    EXPECT_THROW(tomo_reconstruct(dup), InputError);
    w.pop_back();
    EXPECT_THROW(tomo_reconstruct(w), InputError);
}

TEST(Projection, SpreadsDeficitOverPositiveEigenvalues) {
    Matrix4c rho = Matrix4c::Zero();
    rho.diagonal() << 0.6, 0.5, 0.0, -0.1;
    const Matrix4c p = project_physical(rho).matrix();
    EXPECT_NEAR(p(0, 0).real(), 0.55, 1e-15);
    EXPECT_NEAR(p(1, 1).real(), 0.45, 1e-15);
    EXPECT_NEAR(p(2, 2).real(), 0.0, 1e-15);
    EXPECT_NEAR(p(3, 3).real(), 0.0, 1e-15);
}

TEST(Projection, CascadesUntilNonNegative) {
    Matrix4c rho = Matrix4c::Zero();
    // Spreading -0.3 over three positives drives 0.05 negative in turn.
    rho.diagonal() << 0.9, 0.35, 0.05, -0.3;
    const Eigen::SelfAdjointEigenSolver<Matrix4c> eig(project_physical(rho).matrix());
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-15);
    EXPECT_NEAR(eig.eigenvalues().sum(), 1.0, 1e-14);
}

TEST(Projection, IdempotentAndFixesPhysicalStates) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> n(0.0, 0.05);
    for (int i = 0; i < 50; ++i) {
        const Matrix4c rho = testing::random_density(rng, 1 + i % 4);
        EXPECT_LT((project_physical(rho).matrix() - rho).norm(), 1e-12);
        Matrix4c noisy = rho;
        for (int a = 0; a < 4; ++a) {
            for (int b = a; b < 4; ++b) {
                const Complex z(n(rng), a == b ? 0.0 : n(rng));
                noisy(a, b) += z;
                if (a != b) noisy(b, a) += std::conj(z);
            }
        }
        noisy /= noisy.trace().real();
        const auto once = project_physical(noisy);
        const auto twice = project_physical(once.matrix());
        EXPECT_LT((twice.matrix() - once.matrix()).norm(), 1e-12);
    }
}

TEST(Projection, RejectsNonHermitianInput) {
    Matrix4c rho = bell_state(45.0).matrix();
    rho(0, 1) = Complex(0.2, 0.0);
    EXPECT_THROW(project_physical(rho), InputError);
}

TEST(Fidelity, WernerAgainstBell) {
    for (double v : {0.0, 0.5, 0.8127, 1.0}) {
        EXPECT_NEAR(fidelity(werner_state(45.0, v), bell_state(45.0)), (1.0 + 3.0 * v) / 4.0, 1e-10);
        EXPECT_NEAR(fidelity_pure(werner_state(45.0, v), bell_vector(45.0)), (1.0 + 3.0 * v) / 4.0,
                    1e-14);
    }
}

TEST(Fidelity, SymmetricAndBounded) {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 100; ++i) {
        const auto a = DensityMatrix::from_matrix(testing::random_density(rng, 1 + i % 4));
        const auto b = DensityMatrix::from_matrix(testing::random_density(rng, 1 + (i / 4) % 4));
        const double fab = fidelity(a, b);
        EXPECT_NEAR(fab, fidelity(b, a), 1e-8);
        EXPECT_GE(fab, -1e-12);
        EXPECT_LE(fab, 1.0 + 1e-12);
        EXPECT_NEAR(fidelity(a, a), 1.0, 1e-8);
    }
}

TEST(DecayFit, TwoPointsDetermineTheModel) {
    const std::vector<DecayPoint> pts = {{0.7, 2.30, 0.0}, {30.0, 2.03, 0.0}};
    const auto fit = fit_decay(pts);
    const double tau_c = 29.3 / std::log(2.30 / 2.03);
    const double v_ref = 2.30 / kTsirelson;
    EXPECT_NEAR(fit.tau_c, tau_c, 1e-9);
    EXPECT_NEAR(fit.tau_c, 234.6, 0.1);
    EXPECT_NEAR(fit.v_ref, v_ref, 1e-12);
    EXPECT_NEAR(fit.lifetime_chsh, 0.7 + tau_c * std::log(std::sqrt(2.0) * v_ref), 1e-9);
    EXPECT_GE(fit.lifetime_chsh, 25.0);
    EXPECT_LE(fit.lifetime_chsh, 40.0);
}

TEST(DecayFit, WeightedFitRecoversExponential) {
    std::vector<DecayPoint> pts;
    for (double tau : {0.7, 10.0, 20.0, 30.0, 50.0}) {
        pts.push_back({tau, 2.5 * std::exp(-(tau - 0.7) / 120.0), 0.01});
    }
    const auto fit = fit_decay(pts);
    EXPECT_NEAR(fit.tau_c, 120.0, 1e-8);
    EXPECT_NEAR(fit.v_ref * kTsirelson, 2.5, 1e-12);
    EXPECT_GT(fit.covariance[0][0], 0.0);
    EXPECT_GT(fit.covariance[1][1], 0.0);
}

TEST(DecayFit, FlatDataGiveInfiniteCoherence) {
    const std::vector<DecayPoint> pts = {{0.7, 2.4, 0.0}, {30.0, 2.45, 0.0}};
    const auto fit = fit_decay(pts);
    EXPECT_TRUE(std::isinf(fit.tau_c));
    EXPECT_FALSE(fit.warnings.empty());
}

TEST(DecayFit, NeedsTwoDistinctTimes) {
    const std::vector<DecayPoint> one = {{0.7, 2.3, 0.0}};
    EXPECT_THROW(fit_decay(one), InputError);
    const std::vector<DecayPoint> same = {{0.7, 2.3, 0.0}, {0.7, 2.2, 0.0}};
    EXPECT_THROW(fit_decay(same), InputError);
}

}  // namespace
}  // namespace qmux

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

#include "qmux/quantum_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace qmux {

namespace {

// Pauli index of the transmit-port observable: 1 = D/A, 2 = R/L, 3 = H/V.
std::optional<int> tomography_axis(const AnalyzerSetting& s) {
    switch (s.kind()) {
        case AnalyzerSetting::Kind::CircularR:
            return 2;
        case AnalyzerSetting::Kind::CircularL:
            return std::nullopt;
        case AnalyzerSetting::Kind::Linear:
            break;
    }
    if (s.angle_deg() == 0.0) return 3;
    if (s.angle_deg() == 45.0) return 1;
    return std::nullopt;
}

std::array<Matrix2c, 4> pauli_basis() {
    std::array<Matrix2c, 4> p;
    p[0] = Matrix2c::Identity();
    p[1] << 0.0, 1.0, 1.0, 0.0;
    p[2] << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    p[3] << 1.0, 0.0, 0.0, -1.0;
    return p;
}

const OutcomeWeights* find_weights(std::span<const OutcomeWeights> weights,
                                   const SettingPair& pair) {
    for (const auto& w : weights) {
        if (w.settings == pair) return &w;
    }
    return nullptr;
}

Matrix4c hermitian_part(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

// Eigenvalues below this fraction of the largest are indistinguishable from
// rounding noise of a 4x4 Hermitian eigensolve.
constexpr double kSpectralFloor = 64.0 * std::numeric_limits<double>::epsilon();

Matrix4c psd_sqrt(const Matrix4c& h) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(h);
    Eigen::Vector4d ev = eig.eigenvalues();
    const double floor = kSpectralFloor * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < 4; ++i) ev(i) = ev(i) > floor ? std::sqrt(ev(i)) : 0.0;
    return eig.eigenvectors() * ev.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

OutcomeWeights to_weights(const SettingPair& settings, const CoincidenceCounts& c) {
    return {settings,
            {static_cast<double>(c.d1t1), static_cast<double>(c.d1t2),
             static_cast<double>(c.d2t1), static_cast<double>(c.d2t2)}};
}

std::vector<OutcomeWeights> to_weights(const CoincidenceTable& table) {
    std::vector<OutcomeWeights> out;
    out.reserve(table.rows().size());
    for (const auto& row : table.rows()) out.push_back(to_weights(row.settings, row.counts));
    return out;
}

std::vector<OutcomeWeights> exact_outcome_weights(const DensityMatrix& rho,
                                                  std::span<const SettingPair> pairs) {
    std::vector<OutcomeWeights> out;
    out.reserve(pairs.size());
    for (const auto& pair : pairs) {
        out.push_back({pair,
                       {joint_probability(rho, pair, Port::Transmit, Port::Transmit),
                        joint_probability(rho, pair, Port::Transmit, Port::Reflect),
                        joint_probability(rho, pair, Port::Reflect, Port::Transmit),
                        joint_probability(rho, pair, Port::Reflect, Port::Reflect)}});
    }
    return out;
}

Correlation correlation_E(const OutcomeWeights& weights) {
    const auto& w = weights.w;
    const double total = weights.total();
    if (!(total > 0.0)) {
        throw EstimationError("correlation undefined: no coincidences at (" +
                              weights.settings.stokes.label() + ", " +
                              weights.settings.anti_stokes.label() + ")");
    }
    Correlation c;
    c.value = std::clamp((w[0] + w[3] - w[1] - w[2]) / total, -1.0, 1.0);
    c.std_error = std::sqrt(std::max(0.0, 1.0 - c.value * c.value) / total);
    return c;
}

Correlation correlation_E(const CoincidenceCounts& counts) {
    const SettingPair unlabeled{AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(0.0)};
    return correlation_E(to_weights(unlabeled, counts));
}

std::array<SettingPair, 4> BellSettings::pairs() const {
    const auto ls = AnalyzerSetting::linear(s);
    const auto ls_prime = AnalyzerSetting::linear(s_prime);
    const auto la = AnalyzerSetting::linear(a);
    const auto la_prime = AnalyzerSetting::linear(a_prime);
    return {SettingPair{ls, la}, SettingPair{ls, la_prime}, SettingPair{ls_prime, la},
            SettingPair{ls_prime, la_prime}};
}

BellResult bell_S(std::span<const OutcomeWeights> weights, const BellSettings& settings) {
    const auto pairs = settings.pairs();
    BellResult out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto* w = find_weights(weights, pairs[i]);
        if (w == nullptr) {
            throw InputError("CHSH setting pair (" + pairs[i].stokes.label() + ", " +
                             pairs[i].anti_stokes.label() + ") missing");
        }
        out.E[i] = correlation_E(*w);
    }
    out.S = std::abs(out.E[0].value - out.E[1].value + out.E[2].value + out.E[3].value);
    double var = 0.0;
    for (const auto& e : out.E) var += e.std_error * e.std_error;
    out.std_error = std::sqrt(var);
    return out;
}

BellResult bell_S(const CoincidenceTable& table, const BellSettings& settings) {
    const auto weights = to_weights(table);
    return bell_S(std::span<const OutcomeWeights>(weights), settings);
}

Matrix4c tomo_reconstruct(std::span<const OutcomeWeights> weights) {
    // s[j][k] = <sigma_j x sigma_k>; single-qubit terms pool every row that
    // fixes the relevant analyzer.
    std::array<std::array<double, 4>, 4> s{};
    std::array<double, 4> stokes_num{}, stokes_den{}, anti_num{}, anti_den{};
    std::array<std::array<bool, 4>, 4> seen{};

    for (const auto& w : weights) {
        const auto j = tomography_axis(w.settings.stokes);
        const auto k = tomography_axis(w.settings.anti_stokes);
        if (!j || !k) continue;
        if (seen[*j][*k]) throw InputError("duplicate tomography setting pair");
        const double total = w.total();
        if (!(total > 0.0)) {
            throw InputError("tomography setting pair (" + w.settings.stokes.label() + ", " +
                             w.settings.anti_stokes.label() + ") has zero total");
        }
        seen[*j][*k] = true;
        s[*j][*k] = (w.w[0] + w.w[3] - w.w[1] - w.w[2]) / total;
        stokes_num[*j] += w.w[0] + w.w[1] - w.w[2] - w.w[3];
        stokes_den[*j] += total;
        anti_num[*k] += w.w[0] + w.w[2] - w.w[1] - w.w[3];
        anti_den[*k] += total;
    }
    for (int j = 1; j < 4; ++j) {
        for (int k = 1; k < 4; ++k) {
            if (!seen[j][k]) {
                throw InputError("tomography needs all nine {0, 45, R} x {0, 45, R} setting pairs");
            }
        }
    }
    s[0][0] = 1.0;
    for (int j = 1; j < 4; ++j) {
        s[j][0] = stokes_num[j] / stokes_den[j];
        s[0][j] = anti_num[j] / anti_den[j];
    }

    const auto pauli = pauli_basis();
    Matrix4c rho = Matrix4c::Zero();
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) rho += (0.25 * s[j][k]) * kron(pauli[j], pauli[k]);
    }
    return rho;
}

Matrix4c tomo_reconstruct(const CoincidenceTable& table) {
    const auto weights = to_weights(table);
    return tomo_reconstruct(std::span<const OutcomeWeights>(weights));
}

DensityMatrix project_physical(const Matrix4c& rho_raw) {
    if (!rho_raw.allFinite()) throw InputError("matrix has non-finite entries");
    if ((rho_raw - rho_raw.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
        throw InputError("physical projection needs a Hermitian matrix");
    }
    const double trace = rho_raw.trace().real();
    if (!(trace > 0.0)) throw InputError("physical projection needs a positive trace");

    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(hermitian_part(rho_raw) / trace);
    std::array<double, 4> ev{};
    for (int i = 0; i < 4; ++i) ev[i] = eig.eigenvalues()(i);

    for (;;) {
        const auto it = std::min_element(ev.begin(), ev.end());
        if (*it >= 0.0) break;
        const double deficit = *it;
        *it = 0.0;
        const auto positive = std::count_if(ev.begin(), ev.end(), [](double x) { return x > 0.0; });
        if (positive == 0) break;
        for (auto& x : ev) {
            if (x > 0.0) x += deficit / static_cast<double>(positive);
        }
    }

    Eigen::Vector4cd diag;
    for (int i = 0; i < 4; ++i) diag(i) = ev[i];
    Matrix4c out = eig.eigenvectors() * diag.asDiagonal() * eig.eigenvectors().adjoint();
    out = hermitian_part(out);
    out /= out.trace().real();
    return DensityMatrix::from_matrix(out);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    const Matrix4c root = psd_sqrt(rho.matrix());
    const Matrix4c inner = hermitian_part(root * sigma.matrix() * root);
    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(inner, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double floor = kSpectralFloor * std::max(1.0, ev.cwiseAbs().maxCoeff());
    double trace_root = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (ev(i) > floor) trace_root += std::sqrt(ev(i));
    }
    return std::clamp(trace_root * trace_root, 0.0, 1.0);
}

double fidelity_pure(const DensityMatrix& rho, const Vector4c& phi) {
    const double norm = phi.squaredNorm();
    if (std::abs(norm - 1.0) > 1e-12) throw InputError("pure state must be normalized");
    return std::clamp((phi.adjoint() * rho.matrix() * phi)(0).real(), 0.0, 1.0);
}

DecayFit fit_decay(std::span<const DecayPoint> points, double tau_ref) {
    if (points.size() < 2) throw InputError("decay fit needs at least two points");
    bool weighted = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(std::isfinite(p.tau) && std::isfinite(p.s) && p.s > 0.0)) {
            throw InputError("decay points need finite tau and S > 0");
        }
        if (i > 0 && !(p.tau > points[i - 1].tau)) {
            throw InputError("decay points must have strictly increasing tau");
        }
        if (!(p.s_error > 0.0)) weighted = false;
    }

    DecayFit fit;
    fit.tau_ref = tau_ref;

    // Straight line y = a + b x with x = tau - tau_ref, y = ln(S / 2 sqrt 2).
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs, ys, ws;
    bool all_above = true;
    for (const auto& p : points) {
        const double x = p.tau - tau_ref;
        const double y = std::log(p.s / kTsirelson);
        const double sigma_y = weighted ? p.s_error / p.s : 1.0;
        const double w = 1.0 / (sigma_y * sigma_y);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        xs.push_back(x);
        ys.push_back(y);
        ws.push_back(w);
        if (p.s < kTsirelson) all_above = false;
    }
    const double det = sw * sxx - sx * sx;
    const double b = (sw * sxy - sx * sy) / det;
    const double a = (sy - b * sx) / sw;

    // Parameter covariance: (X^T W X)^-1, scaled by the residual variance
    // when no measurement errors were supplied.
    double var_a = sxx / det;
    double var_b = sw / det;
    double cov_ab = -sx / det;
    if (!weighted) {
        const auto n = static_cast<double>(points.size());
        double rss = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (a + b * xs[i]);
            rss += ws[i] * r * r;
        }
        const double scale = points.size() > 2 ? rss / (n - 2.0) : 0.0;
        var_a *= scale;
        var_b *= scale;
        cov_ab *= scale;
    }

    fit.v_ref = std::exp(a);
    if (all_above) fit.warnings.push_back("every S is at or above 2 sqrt(2)");
    if (!(b < 0.0)) {
        fit.warnings.push_back("S does not decrease with tau; tau_c set to +inf");
        fit.tau_c = std::numeric_limits<double>::infinity();
        fit.lifetime_chsh = fit.v_ref * kTsirelson > 2.0 ? std::numeric_limits<double>::infinity()
                                                          : 0.0;
        fit.covariance = {{{0.0, 0.0}, {0.0, fit.v_ref * fit.v_ref * var_a}}};
        return fit;
    }
    fit.tau_c = -1.0 / b;
    // Jacobian of (tau_c, v_ref) with respect to (a, b).
    const double dtau_db = 1.0 / (b * b);
    const double dv_da = fit.v_ref;
    fit.covariance[0][0] = dtau_db * dtau_db * var_b;
    fit.covariance[1][1] = dv_da * dv_da * var_a;
    fit.covariance[0][1] = fit.covariance[1][0] = dtau_db * dv_da * cov_ab;

    const double log_margin = std::log(fit.v_ref * std::numbers::sqrt2);
    fit.lifetime_chsh = tau_ref + fit.tau_c * log_margin;
    if (fit.lifetime_chsh <= 0.0) {
        fit.warnings.push_back("no CHSH violation at tau >= 0");
        fit.lifetime_chsh = 0.0;
    }
    return fit;
}

}  // namespace qmux

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

#include "qmux/core_model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace qmux {

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), end);
}

Matrix2c pauli_dot(const std::array<double, 3>& n) {
    Matrix2c s;
    s << Complex(n[2], 0.0), Complex(n[0], -n[1]), Complex(n[0], n[1]), Complex(-n[2], 0.0);
    return s;
}

}  // namespace

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

std::vector<std::string> config_violations(const ExperimentConfig& c) {
    std::vector<std::string> out;
    auto need_prob = [&](const char* name, double value) {
        if (!is_probability(value)) {
            out.push_back(std::string(name) + " must be a probability in [0, 1], got " +
                          format_double(value));
        }
    };
    if (c.m < 1) out.push_back("m must be >= 1, got " + std::to_string(c.m));
    need_prob("chi", c.chi);
    need_prob("eta_d", c.eta_d);
    need_prob("eta_as", c.eta_as);
    need_prob("gamma", c.gamma);
    need_prob("dark_rate", c.dark_rate);
    if (!(std::isfinite(c.theta) && c.theta >= 0.0 && c.theta <= 90.0)) {
        out.push_back("theta must lie in [0, 90] degrees, got " + format_double(c.theta));
    }
    if (!(std::isfinite(c.v1) && c.v1 > 0.0 && c.v1 <= 1.0)) {
        out.push_back("v1 must lie in (0, 1], got " + format_double(c.v1));
    }
    if (!(std::isfinite(c.beta) && c.beta >= 0.0)) {
        out.push_back("beta must be >= 0, got " + format_double(c.beta));
    }
    // tau_c = +inf is the no-decay sentinel.
    if (!(c.tau_c > 0.0) || std::isnan(c.tau_c)) {
        out.push_back("tau_c must be > 0, got " + format_double(c.tau_c));
    }
    if (!(std::isfinite(c.tau_ref) && c.tau_ref >= 0.0)) {
        out.push_back("tau_ref must be >= 0, got " + format_double(c.tau_ref));
    }
    if (!(std::isfinite(c.delta_t_train) && c.delta_t_train > 0.0)) {
        out.push_back("delta_t_train must be > 0, got " + format_double(c.delta_t_train));
    }
    if (!(std::isfinite(c.rep_rate) && c.rep_rate > 0.0)) {
        out.push_back("rep_rate must be > 0, got " + format_double(c.rep_rate));
    }
    if (is_probability(c.chi) && is_probability(c.eta_d) && !(c.chi * c.eta_d < 1.0)) {
        out.push_back("chi * eta_d must be < 1");
    }
    return out;
}

void validate(const ExperimentConfig& config) {
    auto problems = config_violations(config);
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid experiment config:";
    for (const auto& p : problems) msg << "\n  " << p;
    throw ConfigError(msg.str());
}

// Density matrices ----------------------------------------------------------------

DensityMatrix DensityMatrix::from_matrix(const Matrix4c& rho) {
    auto problems = validate_density(rho);
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "not a valid density matrix:";
        for (const auto& p : problems) msg << " " << p << ";";
        throw InputError(msg.str());
    }
    return DensityMatrix(rho);
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

Vector4c bell_vector(double theta_deg) {
    if (!(std::isfinite(theta_deg) && theta_deg >= 0.0 && theta_deg <= 90.0)) {
        throw DomainError("entanglement angle must lie in [0, 90] degrees, got " +
                          format_double(theta_deg));
    }
    const double t = deg_to_rad(theta_deg);
    Vector4c psi = Vector4c::Zero();
    psi(kHH) = std::cos(t);
    psi(kVV) = std::sin(t);
    return psi;
}

DensityMatrix bell_state(double theta_deg) {
    const Vector4c psi = bell_vector(theta_deg);
    return DensityMatrix::from_matrix(psi * psi.adjoint());
}

DensityMatrix werner_state(double theta_deg, double v) {
    if (!is_probability(v)) {
        throw DomainError("visibility must lie in [0, 1], got " + format_double(v));
    }
    const Vector4c psi = bell_vector(theta_deg);
    Matrix4c rho = v * (psi * psi.adjoint()) + ((1.0 - v) / 4.0) * Matrix4c::Identity();
    return DensityMatrix::from_matrix(rho);
}

std::vector<std::string> validate_density(const Matrix4c& rho) {
    std::vector<std::string> out;
    if (!rho.allFinite()) {
        out.push_back("non-finite entries");
        return out;
    }
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) {
        out.push_back("not Hermitian (max |rho - rho^dag| = " + format_double(herm) + ")");
    }
    const Complex tr = rho.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
        out.push_back("trace " + format_double(tr.real()) + " differs from 1");
    }
    if (herm <= kHermitianTol) {
        const Matrix4c h = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix4c> eig(h, Eigen::EigenvaluesOnly);
        const double min_ev = eig.eigenvalues().minCoeff();
        if (min_ev < -kPsdTol) {
            out.push_back("not positive semidefinite (min eigenvalue " + format_double(min_ev) +
                          ")");
        }
    }
    return out;
}

Matrix4c permute_basis(const Matrix4c& rho, const std::array<int, 4>& perm) {
    Matrix4c out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) out(i, j) = rho(perm[i], perm[j]);
    }
    return out;
}

std::array<int, 4> inverse_permutation(const std::array<int, 4>& perm) {
    std::array<int, 4> inv{};
    for (int i = 0; i < 4; ++i) inv[perm[i]] = i;
    return inv;
}

Matrix4c swap_subsystems(const Matrix4c& rho) {
    return permute_basis(rho, {kHH, kVH, kHV, kVV});
}

Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
    return out;
}

// Analyzer settings ---------------------------------------------------------------

AnalyzerSetting AnalyzerSetting::linear(double angle_deg) {
    if (!(std::isfinite(angle_deg) && angle_deg >= 0.0 && angle_deg < 180.0)) {
        throw DomainError("linear analyzer angle must lie in [0, 180) degrees, got " +
                          format_double(angle_deg));
    }
    return AnalyzerSetting(Kind::Linear, angle_deg);
}

AnalyzerSetting AnalyzerSetting::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text == "R" || text == "r") return circular_r();
    if (text == "L" || text == "l") return circular_l();
    double angle = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), angle);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw InputError("cannot parse analyzer setting '" + std::string(text) + "'");
    }
    return linear(angle);
}

std::string AnalyzerSetting::label() const {
    switch (kind_) {
        case Kind::CircularR:
            return "R";
        case Kind::CircularL:
            return "L";
        case Kind::Linear:
            break;
    }
    return format_double(angle_deg_);
}

std::array<double, 3> AnalyzerSetting::bloch() const {
    switch (kind_) {
        case Kind::CircularR:
            return {0.0, 1.0, 0.0};
        case Kind::CircularL:
            return {0.0, -1.0, 0.0};
        case Kind::Linear:
            break;
    }
    const double two_t = 2.0 * deg_to_rad(angle_deg_);
    return {std::sin(two_t), 0.0, std::cos(two_t)};
}

Matrix2c projector(const AnalyzerSetting& setting, Port port) {
    const double sign = port == Port::Transmit ? 1.0 : -1.0;
    auto n = setting.bloch();
    for (auto& x : n) x *= sign;
    return 0.5 * (Matrix2c::Identity() + pauli_dot(n));
}

double joint_probability(const DensityMatrix& rho, const SettingPair& pair, Port stokes,
                         Port anti_stokes) {
    const Matrix4c op = kron(projector(pair.stokes, stokes), projector(pair.anti_stokes, anti_stokes));
    return (rho.matrix() * op).trace().real();
}

double stokes_marginal(const DensityMatrix& rho, const AnalyzerSetting& stokes, Port port) {
    const Matrix4c op = kron(projector(stokes, port), Matrix2c::Identity());
    return (rho.matrix() * op).trace().real();
}

// Coincidences -------------------------------------------------------------------

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("64-bit count overflow");
    }
    return out;
}

void CoincidenceCounts::record(const TrialRecord& trial) {
    n_total = checked_add(n_total, 1);
    if (!trial.herald) return;
    const bool d1 = trial.herald->detector == StokesDetector::D1;
    if (d1) {
        n_d1 = checked_add(n_d1, 1);
    } else {
        n_d2 = checked_add(n_d2, 1);
    }
    if (!trial.readout) return;
    const bool t1 = *trial.readout == AntiStokesDetector::T1;
    std::uint64_t& slot = d1 ? (t1 ? d1t1 : d1t2) : (t1 ? d2t1 : d2t2);
    slot = checked_add(slot, 1);
}

CoincidenceCounts& CoincidenceCounts::operator+=(const CoincidenceCounts& o) {
    d1t1 = checked_add(d1t1, o.d1t1);
    d1t2 = checked_add(d1t2, o.d1t2);
    d2t1 = checked_add(d2t1, o.d2t1);
    d2t2 = checked_add(d2t2, o.d2t2);
    n_d1 = checked_add(n_d1, o.n_d1);
    n_d2 = checked_add(n_d2, o.n_d2);
    n_total = checked_add(n_total, o.n_total);
    return *this;
}

std::uint64_t CoincidenceCounts::coincidences() const {
    return checked_add(checked_add(d1t1, d1t2), checked_add(d2t1, d2t2));
}

std::vector<std::string> CoincidenceCounts::violations() const {
    std::vector<std::string> out;
    // Written to avoid overflow in the sums.
    if (n_d1 > n_total || n_d2 > n_total || n_d1 > n_total - n_d2) {
        out.push_back("singles exceed trial count");
    }
    if (d1t1 > n_d1 || d1t2 > n_d1 || d1t1 > n_d1 - d1t2) {
        out.push_back("D1 coincidences exceed D1 singles");
    }
    if (d2t1 > n_d2 || d2t2 > n_d2 || d2t1 > n_d2 - d2t2) {
        out.push_back("D2 coincidences exceed D2 singles");
    }
    return out;
}

CoincidenceTable::CoincidenceTable(std::vector<CoincidenceRow> rows) {
    for (const auto& row : rows) add(row.settings, row.counts);
}

const CoincidenceCounts* CoincidenceTable::find(const SettingPair& pair) const {
    for (const auto& row : rows_) {
        if (row.settings == pair) return &row.counts;
    }
    return nullptr;
}

void CoincidenceTable::add(const SettingPair& pair, const CoincidenceCounts& counts) {
    for (auto& row : rows_) {
        if (row.settings == pair) {
            row.counts += counts;
            return;
        }
    }
    rows_.push_back({pair, counts});
}

std::vector<std::string> CoincidenceTable::violations() const {
    std::vector<std::string> out;
    for (const auto& row : rows_) {
        for (const auto& v : row.counts.violations()) {
            out.push_back("(" + row.settings.stokes.label() + ", " +
                          row.settings.anti_stokes.label() + "): " + v);
        }
    }
    return out;
}

}  // namespace qmux

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
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qmux {

class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

class InputError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

class EstimationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or out-of-range configuration documents.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

double deg_to_rad(double deg);

/// Physical parameters of one multiplexed source. Times are in microseconds.
struct ExperimentConfig {
    int m = 19;
    double chi = 0.01;
    double theta = 45.0;
    double eta_d = 0.1;
    double eta_as = 0.5;
    double gamma = 0.3;
    double v1 = 0.937;
    double beta = 0.85;
    double tau_c = 235.0;
    double tau_ref = 0.7;
    double dark_rate = 0.0;
    double delta_t_train = 7.0;
    double rep_rate = 4.6e4;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::vector<std::string> config_violations(const ExperimentConfig& config);

/// Throws ConfigError listing every violated invariant.
void validate(const ExperimentConfig& config);

// Basis order is (HH, HV, VH, VV) with the Stokes photon as the first
// factor: index = 2 * stokes + anti_stokes, H = 0, V = 1.
enum BasisIndex : int { kHH = 0, kHV = 1, kVH = 2, kVV = 3 };

/// A 4x4 matrix that satisfied every density-matrix invariant when built.
class DensityMatrix {
   public:
    /// Throws InputError when `rho` is not Hermitian, unit trace and PSD.
    static DensityMatrix from_matrix(const Matrix4c& rho);

    const Matrix4c& matrix() const { return rho_; }
    Complex operator()(int row, int col) const { return rho_(row, col); }
    double purity() const;

   private:
    explicit DensityMatrix(const Matrix4c& rho) : rho_(rho) {}
    Matrix4c rho_;
};

/// cos(theta)|HH> + sin(theta)|VV> as a pure state vector.
Vector4c bell_vector(double theta_deg);

DensityMatrix bell_state(double theta_deg);

/// v * bell_state(theta) + (1 - v) * I / 4.
DensityMatrix werner_state(double theta_deg, double v);

std::vector<std::string> validate_density(const Matrix4c& rho);

/// Reorders basis states: out(i, j) = rho(perm[i], perm[j]).
Matrix4c permute_basis(const Matrix4c& rho, const std::array<int, 4>& perm);
std::array<int, 4> inverse_permutation(const std::array<int, 4>& perm);

/// Exchanges the Stokes and anti-Stokes factors.
Matrix4c swap_subsystems(const Matrix4c& rho);

Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

// Measurement settings ------------------------------------------------------

enum class Port { Transmit, Reflect };

/// Polarization analyzer in front of a PBS. A linear setting at angle t
/// transmits cos(t)|H> + sin(t)|V>; CircularR transmits (|H> + i|V>)/sqrt(2)
/// and CircularL transmits (|H> - i|V>)/sqrt(2).
class AnalyzerSetting {
   public:
    enum class Kind { Linear, CircularR, CircularL };

    static AnalyzerSetting linear(double angle_deg);
    static AnalyzerSetting circular_r() { return AnalyzerSetting(Kind::CircularR, 0.0); }
    static AnalyzerSetting circular_l() { return AnalyzerSetting(Kind::CircularL, 0.0); }

    /// Accepts a decimal angle in degrees, "R" or "L".
    static AnalyzerSetting parse(std::string_view text);

    Kind kind() const { return kind_; }
    double angle_deg() const { return angle_deg_; }

    /// Shortest round-trip text form, accepted by parse().
    std::string label() const;

    /// Transmit-port Bloch vector (x = D/A, y = R/L, z = H/V).
    std::array<double, 3> bloch() const;

    friend bool operator==(const AnalyzerSetting&, const AnalyzerSetting&) = default;

   private:
    AnalyzerSetting(Kind kind, double angle) : kind_(kind), angle_deg_(angle) {}
    Kind kind_;
    double angle_deg_;
};

struct SettingPair {
    AnalyzerSetting stokes;
    AnalyzerSetting anti_stokes;

    friend bool operator==(const SettingPair&, const SettingPair&) = default;
};

Matrix2c projector(const AnalyzerSetting& setting, Port port);

/// Re Tr[rho (P_s x P_a)].
double joint_probability(const DensityMatrix& rho, const SettingPair& pair, Port stokes,
                         Port anti_stokes);

/// Re Tr[rho (P_s x I)].
double stokes_marginal(const DensityMatrix& rho, const AnalyzerSetting& stokes, Port port);

// Trial outcomes --------------------------------------------------------------

enum class StokesDetector : std::uint8_t { D1, D2 };
enum class AntiStokesDetector : std::uint8_t { T1, T2 };

struct Herald {
    int bin = 1;  // 1-based time-bin index
    StokesDetector detector = StokesDetector::D1;

    friend bool operator==(const Herald&, const Herald&) = default;
};

struct TrialRecord {
    std::uint64_t trial_index = 0;
    std::optional<Herald> herald;
    std::optional<AntiStokesDetector> readout;
    double storage_time = 0.0;
    bool herald_was_dark = false;
};

// Coincidence bookkeeping -----------------------------------------------------

/// Adds with a hard error on unsigned overflow.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

struct CoincidenceCounts {
    std::uint64_t d1t1 = 0;
    std::uint64_t d1t2 = 0;
    std::uint64_t d2t1 = 0;
    std::uint64_t d2t2 = 0;
    std::uint64_t n_d1 = 0;
    std::uint64_t n_d2 = 0;
    std::uint64_t n_total = 0;

    void record(const TrialRecord& trial);
    CoincidenceCounts& operator+=(const CoincidenceCounts& other);
    std::uint64_t coincidences() const;
    std::vector<std::string> violations() const;

    friend bool operator==(const CoincidenceCounts&, const CoincidenceCounts&) = default;
};

struct CoincidenceRow {
    SettingPair settings;
    CoincidenceCounts counts;

    friend bool operator==(const CoincidenceRow&, const CoincidenceRow&) = default;
};

class CoincidenceTable {
   public:
    CoincidenceTable() = default;
    explicit CoincidenceTable(std::vector<CoincidenceRow> rows);

    const std::vector<CoincidenceRow>& rows() const { return rows_; }
    const CoincidenceCounts* find(const SettingPair& pair) const;

    /// Merges counts into the row for `pair`, appending it when absent.
    void add(const SettingPair& pair, const CoincidenceCounts& counts);

    std::vector<std::string> violations() const;

    friend bool operator==(const CoincidenceTable&, const CoincidenceTable&) = default;

   private:
    std::vector<CoincidenceRow> rows_;
};

}  // namespace qmux

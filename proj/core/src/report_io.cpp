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

#include <cmath>

#include <json.hpp>

#include "detail/csv_util.hpp"
#include "detail/json_util.hpp"
#include "qmux/io.hpp"

namespace qmux {

using nlohmann::json;

namespace {

json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

std::string density_json(const Matrix4c& rho) {
    json entries = json::array();
    for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) entries.push_back({rho(i, k).real(), rho(i, k).imag()});
    }
    json j = {{"basis", {"HH", "HV", "VH", "VV"}}, {"entries", entries}};
    return j.dump(2);
}

Matrix4c parse_density_json(std::string_view text) {
    constexpr std::string_view ctx = "density matrix";
    const json j = detail::parse_document(text, ctx);
    detail::require_object(j, ctx);
    if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").size() != 16) {
        throw ConfigError("density matrix: 'entries' must hold 16 [re, im] pairs");
    }
    if (j.contains("basis") && j.at("basis") != json({"HH", "HV", "VH", "VV"})) {
        throw ConfigError("density matrix: basis must be [HH, HV, VH, VV]");
    }
    Matrix4c rho;
    const auto& e = j.at("entries");
    for (int n = 0; n < 16; ++n) {
        const auto& z = e[static_cast<std::size_t>(n)];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
            throw ConfigError("density matrix: entry " + std::to_string(n) +
                              " must be [re, im]");
        }
        rho(n / 4, n % 4) = Complex(z[0].get<double>(), z[1].get<double>());
    }
    return rho;
}

std::string decay_fit_json(const DecayFit& fit) {
    json j = json::object();
    j["tau_c"] = number_or_inf(fit.tau_c);
    j["v_ref"] = fit.v_ref;
    j["tau_ref"] = fit.tau_ref;
    j["lifetime_chsh"] = number_or_inf(fit.lifetime_chsh);
    // + 0.0 turns a negative zero into 0.
    j["covariance"] = {{fit.covariance[0][0] + 0.0, fit.covariance[0][1] + 0.0},
                       {fit.covariance[1][0] + 0.0, fit.covariance[1][1] + 0.0}};
    j["warnings"] = fit.warnings;
    return j.dump(2);
}

std::vector<DecayPoint> read_decay_csv(std::string_view text) {
    const auto records = detail::split_csv(text);
    if (records.empty()) throw InputError("decay CSV is empty");
    const auto& h = records.front().fields;
    const bool with_errors = h.size() == 3;
    if (!((h.size() == 2 || with_errors) && h[0] == "tau_us" && h[1] == "S" &&
          (!with_errors || h[2] == "S_err"))) {
        throw InputError("line " + std::to_string(records.front().line) +
                         ": expected header tau_us,S[,S_err]");
    }
    std::vector<DecayPoint> out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != h.size()) {
            throw InputError("line " + std::to_string(rec.line) + ": wrong number of fields");
        }
        DecayPoint p;
        p.tau = detail::parse_double_field(rec.fields[0], rec.line, "tau_us");
        p.s = detail::parse_double_field(rec.fields[1], rec.line, "S");
        if (with_errors) p.s_error = detail::parse_double_field(rec.fields[2], rec.line, "S_err");
        out.push_back(p);
    }
    return out;
}

std::string write_decay_csv(std::span<const DecayPoint> points) {
    std::string out = "tau_us,S,S_err\n";
    for (const auto& p : points) {
        out += format_number(p.tau) + ',' + format_number(p.s) + ',' + format_number(p.s_error) +
               '\n';
    }
    return out;
}

std::string residual_csv(const GeometryScan& scan) {
    std::string out = "write\\read";
    const auto m = scan.residual.rows();
    for (Eigen::Index l = 0; l < m; ++l) out += ",R" + std::to_string(l + 1);
    out += '\n';
    for (Eigen::Index k = 0; k < m; ++k) {
        out += "w" + std::to_string(k + 1);
        for (Eigen::Index l = 0; l < m; ++l) out += ',' + format_number(scan.residual(k, l));
        out += '\n';
    }
    return out;
}

Eigen::MatrixXd read_residual_csv(std::string_view text) {
    const auto records = detail::split_csv(text);
    if (records.empty()) throw InputError("residual CSV is empty");
    const auto m = static_cast<Eigen::Index>(records.front().fields.size()) - 1;
    if (m < 1 || static_cast<Eigen::Index>(records.size()) != m + 1) {
        throw InputError("residual CSV must hold a square matrix with a header row");
    }
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto& rec = records[static_cast<std::size_t>(k + 1)];
        if (static_cast<Eigen::Index>(rec.fields.size()) != m + 1) {
            throw InputError("line " + std::to_string(rec.line) + ": wrong number of fields");
        }
        for (Eigen::Index l = 0; l < m; ++l) {
            out(k, l) = detail::parse_double_field(rec.fields[static_cast<std::size_t>(l + 1)],
                                                   rec.line, "residual");
        }
    }
    return out;
}

std::string link_sweep_csv(std::span<const LinkSweepRow> rows) {
    std::string out =
        "L0_km,m,p1,comm_time_us,p_link_exact,p_link_linear,t_single_us,"
        "t_multiplexed_linear_us,t_multiplexed_exact_us,speedup_linear,speedup_exact\n";
    for (const auto& r : rows) {
        out += format_number(r.L0) + ',' + std::to_string(r.m) + ',' + format_number(r.p1) + ',' +
               format_number(r.comm_time_us) + ',' + format_number(r.p_link.exact) + ',' +
               format_number(r.p_link.linear) + ',' + format_number(r.time.single_us) + ',' +
               format_number(r.time.multiplexed_linear_us) + ',' +
               format_number(r.time.multiplexed_exact_us) + ',' +
               format_number(r.time.speedup_linear) + ',' + format_number(r.time.speedup_exact) +
               '\n';
    }
    return out;
}

}  // namespace qmux

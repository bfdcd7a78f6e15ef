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

#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "detail/json_util.hpp"
#include "qmux/io.hpp"

namespace qmux {

using nlohmann::json;

std::string format_number(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    std::array<char, 32> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), end);
}

namespace detail {

json parse_document(std::string_view text, std::string_view what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError(std::string(what) + ": JSON syntax error at line " +
                          std::to_string(line) + ", column " + std::to_string(column) + ": " +
                          e.what());
    }
}

void require_object(const json& j, std::string_view context) {
    if (!j.is_object()) throw ConfigError(std::string(context) + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view context) {
    for (const auto& [key, value] : j.items()) {
        bool found = false;
        for (auto k : known) found = found || key == k;
        if (!found) {
            throw ConfigError(std::string(context) + ": unknown field '" + key + "'");
        }
    }
}

double number_field(const json& j, std::string_view key, std::string_view context) {
    const auto& v = j.at(std::string(key));
    if (!v.is_number()) {
        throw ConfigError(std::string(context) + ": field '" + std::string(key) +
                          "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t unsigned_value(const json& v, std::string_view key, std::string_view context) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d < 0x1.0p64 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
    }
    throw ConfigError(std::string(context) + ": field '" + std::string(key) +
                      "' must be a non-negative integer");
}

int int_value(const json& v, std::string_view key, std::string_view context) {
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x >= std::numeric_limits<int>::min() && x <= std::numeric_limits<int>::max()) {
            return static_cast<int>(x);
        }
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 2e9) return static_cast<int>(d);
    }
    throw ConfigError(std::string(context) + ": field '" + std::string(key) +
                      "' must be an integer");
}

bool bool_field(const json& j, std::string_view key, std::string_view context) {
    const auto& v = j.at(std::string(key));
    if (!v.is_boolean()) {
        throw ConfigError(std::string(context) + ": field '" + std::string(key) +
                          "' must be true or false");
    }
    return v.get<bool>();
}

}  // namespace detail

using detail::bool_field;
using detail::int_value;
using detail::number_field;
using detail::parse_document;
using detail::reject_unknown;
using detail::require_object;
using detail::unsigned_value;

namespace {

constexpr std::string_view kConfigContext = "experiment config";

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base) {
    require_object(j, kConfigContext);
    reject_unknown(j,
                   {"m", "chi", "theta", "eta_d", "eta_as", "gamma", "v1", "beta", "tau_c",
                    "tau_ref", "dark_rate", "delta_t_train", "rep_rate"},
                   kConfigContext);
    ExperimentConfig c = base;
    auto read = [&](const char* key, double& field) {
        if (j.contains(key)) field = number_field(j, key, kConfigContext);
    };
    if (j.contains("m")) c.m = int_value(j.at("m"), "m", kConfigContext);
    read("chi", c.chi);
    read("theta", c.theta);
    read("eta_d", c.eta_d);
    read("eta_as", c.eta_as);
    read("gamma", c.gamma);
    read("v1", c.v1);
    read("beta", c.beta);
    if (j.contains("tau_c")) {
        const auto& v = j.at("tau_c");
        if (v.is_string() && v.get<std::string>() == "inf") {
            c.tau_c = std::numeric_limits<double>::infinity();
        } else {
            c.tau_c = number_field(j, "tau_c", kConfigContext);
        }
    }
    read("tau_ref", c.tau_ref);
    read("dark_rate", c.dark_rate);
    read("delta_t_train", c.delta_t_train);
    read("rep_rate", c.rep_rate);
    validate(c);
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j = json::object();
    j["m"] = c.m;
    j["chi"] = c.chi;
    j["theta"] = c.theta;
    j["eta_d"] = c.eta_d;
    j["eta_as"] = c.eta_as;
    j["gamma"] = c.gamma;
    j["v1"] = c.v1;
    j["beta"] = c.beta;
    if (std::isinf(c.tau_c)) {
        j["tau_c"] = "inf";
    } else {
        j["tau_c"] = c.tau_c;
    }
    j["tau_ref"] = c.tau_ref;
    j["dark_rate"] = c.dark_rate;
    j["delta_t_train"] = c.delta_t_train;
    j["rep_rate"] = c.rep_rate;
    return j;
}

AnalyzerSetting setting_from_json(const json& v, std::string_view context) {
    try {
        if (v.is_number()) return AnalyzerSetting::linear(v.get<double>());
        if (v.is_string()) return AnalyzerSetting::parse(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(std::string(context) + ": " + e.what());
    }
    throw ConfigError(std::string(context) + ": analyzer setting must be an angle or \"R\"/\"L\"");
}

std::vector<SettingPair> settings_from_json(const json& v) {
    constexpr std::string_view ctx = "run plan field 'settings'";
    if (v.is_string()) {
        const auto name = v.get<std::string>();
        if (name == "chsh") return chsh_setting_pairs();
        if (name == "tomography") return tomography_setting_pairs();
        if (name == "hv") return {hv_setting_pair()};
        throw ConfigError(std::string(ctx) + ": unknown preset '" + name +
                          "' (expected chsh, tomography or hv)");
    }
    if (!v.is_array()) throw ConfigError(std::string(ctx) + ": expected a preset name or array");
    std::vector<SettingPair> out;
    for (const auto& entry : v) {
        if (!entry.is_array() || entry.size() != 2) {
            throw ConfigError(std::string(ctx) + ": each entry must be [stokes, anti_stokes]");
        }
        out.push_back({setting_from_json(entry[0], ctx), setting_from_json(entry[1], ctx)});
    }
    return out;
}

std::vector<double> axis_values(const json& v, std::string_view key) {
    const std::string ctx = "link sweep field '" + std::string(key) + "'";
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError(ctx + ": array entries must be numbers");
            out.push_back(x.get<double>());
        }
        if (out.empty()) throw ConfigError(ctx + ": empty axis");
        return out;
    }
    if (v.is_object()) {
        reject_unknown(v, {"from", "to", "step"}, ctx);
        const double from = number_field(v, "from", ctx);
        const double to = number_field(v, "to", ctx);
        const double step = number_field(v, "step", ctx);
        if (!(step > 0.0) || to < from) throw ConfigError(ctx + ": need step > 0 and to >= from");
        std::vector<double> out;
        const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
        if (n > 1000000) throw ConfigError(ctx + ": range too long");
        for (long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
        return out;
    }
    throw ConfigError(ctx + ": expected a number, array, or {from, to, step}");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text, const ExperimentConfig& base) {
    return config_from_json(parse_document(text, kConfigContext), base);
}

std::string to_json(const ExperimentConfig& config) { return config_to_json(config).dump(2) + "\n"; }

RunPlanDocument parse_run_plan(std::string_view text) {
    constexpr std::string_view ctx = "run plan";
    const json j = parse_document(text, ctx);
    require_object(j, ctx);
    reject_unknown(j, {"config", "tau", "settings", "n_trials", "seed", "m_values"}, ctx);
    for (const char* key : {"tau", "settings", "n_trials", "seed"}) {
        if (!j.contains(key)) {
            throw ConfigError(std::string(ctx) + ": missing field '" + key + "'");
        }
    }
    RunPlanDocument doc;
    if (j.contains("config")) doc.plan.config = config_from_json(j.at("config"), {});
    doc.plan.tau = number_field(j, "tau", ctx);
    doc.plan.settings = settings_from_json(j.at("settings"));
    doc.plan.n_trials = unsigned_value(j.at("n_trials"), "n_trials", ctx);
    doc.plan.seed = unsigned_value(j.at("seed"), "seed", ctx);
    if (j.contains("m_values")) {
        const auto& mv = j.at("m_values");
        if (!mv.is_array() || mv.empty()) {
            throw ConfigError("run plan: field 'm_values' must be a non-empty array");
        }
        for (const auto& v : mv) {
            const int m = int_value(v, "m_values", ctx);
            if (m < 1) throw ConfigError("run plan: m_values entries must be >= 1");
            doc.m_values.push_back(m);
        }
    }
    return doc;
}

GeometryDocument parse_geometry(std::string_view text) {
    constexpr std::string_view ctx = "beam geometry";
    const json j = parse_document(text, ctx);
    GeometryDocument doc;
    const json* angles = &j;
    if (j.is_object()) {
        reject_unknown(j, {"write_angles", "stokes_angle", "tolerance"}, ctx);
        if (!j.contains("write_angles")) {
            throw ConfigError(std::string(ctx) + ": missing field 'write_angles'");
        }
        angles = &j.at("write_angles");
        if (j.contains("stokes_angle")) {
            doc.geometry.stokes_angle_deg = number_field(j, "stokes_angle", ctx);
        }
        if (j.contains("tolerance")) doc.tolerance = number_field(j, "tolerance", ctx);
    }
    if (!angles->is_array()) throw ConfigError(std::string(ctx) + ": write angles must be an array");
    for (const auto& a : *angles) {
        if (!a.is_number()) throw ConfigError(std::string(ctx) + ": write angles must be numbers");
        doc.geometry.write_angles_deg.push_back(a.get<double>());
    }
    try {
        validate(doc.geometry);
    } catch (const InputError& e) {
        throw ConfigError(std::string(ctx) + ": " + e.what());
    }
    if (!(doc.tolerance >= 0.0)) throw ConfigError(std::string(ctx) + ": tolerance must be >= 0");
    return doc;
}

LinkDocument parse_link_sweep(std::string_view text) {
    constexpr std::string_view ctx = "link sweep";
    const json j = parse_document(text, ctx);
    require_object(j, ctx);
    reject_unknown(j,
                   {"L0", "m", "p1", "c_fiber", "p_bsm", "apply_bsm_separately", "delta_t_write",
                    "delta_t_clean", "strict_timing", "feedback"},
                   ctx);
    LinkDocument doc;
    auto& s = doc.sweep;
    s.L0 = j.contains("L0") ? axis_values(j.at("L0"), "L0") : std::vector<double>{s.base.L0};
    s.p1 = j.contains("p1") ? axis_values(j.at("p1"), "p1")
                            : std::vector<double>{s.base.p_link_single};
    if (j.contains("m")) {
        for (double m : axis_values(j.at("m"), "m")) {
            if (std::floor(m) != m || m < 1) throw ConfigError("link sweep: m values must be integers >= 1");
            s.m.push_back(static_cast<int>(m));
        }
    } else {
        s.m = {s.base.m};
    }
    if (j.contains("c_fiber")) s.base.c_fiber = number_field(j, "c_fiber", ctx);
    if (j.contains("p_bsm")) s.base.p_bsm = number_field(j, "p_bsm", ctx);
    if (j.contains("apply_bsm_separately")) {
        s.base.apply_bsm_separately = bool_field(j, "apply_bsm_separately", ctx);
    }
    if (j.contains("delta_t_write")) s.base.delta_t_write = number_field(j, "delta_t_write", ctx);
    if (j.contains("delta_t_clean")) s.base.delta_t_clean = number_field(j, "delta_t_clean", ctx);
    if (j.contains("strict_timing")) s.base.strict_timing = bool_field(j, "strict_timing", ctx);
    for (double L0 : s.L0) {
        for (int m : s.m) {
            for (double p1 : s.p1) {
                LinkConfig probe = s.base;
                probe.L0 = L0;
                probe.m = m;
                probe.p_link_single = p1;
                auto problems = link_violations(probe);
                if (!problems.empty()) throw ConfigError(std::string(ctx) + ": " + problems.front());
            }
        }
    }
    if (j.contains("feedback")) {
        const auto& f = j.at("feedback");
        const std::string fctx = "link sweep field 'feedback'";
        require_object(f, fctx);
        reject_unknown(f, {"eta", "chi", "delta_t"}, fctx);
        FeedbackConfig fb;
        if (f.contains("eta")) fb.eta = number_field(f, "eta", fctx);
        if (f.contains("chi")) fb.chi = number_field(f, "chi", fctx);
        if (f.contains("delta_t")) fb.delta_t = number_field(f, "delta_t", fctx);
        doc.feedback = fb;
    }
    return doc;
}

}  // namespace qmux

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
#include <map>

#include <json.hpp>

#include "detail/csv_util.hpp"
#include "qmux/io.hpp"

namespace qmux {

using nlohmann::json;

namespace detail {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::vector<CsvRecord> split_csv(std::string_view text) {
    std::vector<CsvRecord> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        CsvRecord rec;
        rec.line = line_no;
        for (;;) {
            const auto comma = line.find(',');
            rec.fields.push_back(trim(line.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

double parse_double_field(std::string_view field, std::size_t line, std::string_view column) {
    if (field == "inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw InputError("line " + std::to_string(line) + ": column " + std::string(column) +
                         ": expected a number, got '" + std::string(field) + "'");
    }
    return value;
}

std::uint64_t parse_u64_field(std::string_view field, std::size_t line, std::string_view column) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw InputError("line " + std::to_string(line) + ": column " + std::string(column) +
                         ": expected a non-negative integer, got '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace detail

namespace {

constexpr std::array<std::string_view, 9> kCoincidenceColumns = {
    "theta_s", "theta_a", "C_D1T1", "C_D1T2", "C_D2T1", "C_D2T2", "N_D1", "N_D2", "N_total"};

}  // namespace

std::string write_coincidence_csv(std::span<const TaggedTable> tables) {
    bool tagged = false;
    for (const auto& t : tables) tagged = tagged || t.m.has_value();
    std::string out;
    if (tagged) out += "m,";
    for (std::size_t i = 0; i < kCoincidenceColumns.size(); ++i) {
        if (i > 0) out += ',';
        out += kCoincidenceColumns[i];
    }
    out += '\n';
    for (const auto& t : tables) {
        if (tagged && !t.m) throw InputError("cannot mix tagged and untagged tables in one CSV");
        for (const auto& row : t.table.rows()) {
            const auto& c = row.counts;
            if (tagged) out += std::to_string(*t.m) + ',';
            out += row.settings.stokes.label() + ',' + row.settings.anti_stokes.label();
            for (std::uint64_t v : {c.d1t1, c.d1t2, c.d2t1, c.d2t2, c.n_d1, c.n_d2, c.n_total}) {
                out += ',' + std::to_string(v);
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<TaggedTable> read_coincidence_csv(std::string_view text) {
    const auto records = detail::split_csv(text);
    if (records.empty()) throw InputError("coincidence CSV is empty");
    const auto& header = records.front().fields;
    const bool tagged = !header.empty() && header.front() == "m";
    const std::size_t offset = tagged ? 1 : 0;
    bool header_ok = header.size() == kCoincidenceColumns.size() + offset;
    for (std::size_t i = 0; header_ok && i < kCoincidenceColumns.size(); ++i) {
        header_ok = header[i + offset] == kCoincidenceColumns[i];
    }
    if (!header_ok) {
        throw InputError("line " + std::to_string(records.front().line) +
                         ": expected header [m,]theta_s,theta_a,C_D1T1,C_D1T2,C_D2T1,C_D2T2,N_D1,N_D2,N_total");
    }

    std::vector<TaggedTable> out;
    std::map<int, std::size_t> index_of_m;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            throw InputError("line " + std::to_string(rec.line) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(rec.fields.size()));
        }
        std::optional<int> m;
        if (tagged) {
            const auto v = detail::parse_u64_field(rec.fields[0], rec.line, "m");
            if (v < 1 || v > 1000000) throw InputError("line " + std::to_string(rec.line) + ": bad m");
            m = static_cast<int>(v);
        }
        SettingPair pair{AnalyzerSetting::linear(0.0), AnalyzerSetting::linear(0.0)};
        try {
            pair = {AnalyzerSetting::parse(rec.fields[offset]),
                    AnalyzerSetting::parse(rec.fields[offset + 1])};
        } catch (const std::exception& e) {
            throw InputError("line " + std::to_string(rec.line) + ": " + e.what());
        }
        std::array<std::uint64_t, 7> v{};
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = detail::parse_u64_field(rec.fields[offset + 2 + i], rec.line,
                                           kCoincidenceColumns[2 + i]);
        }
        CoincidenceCounts counts{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
        if (auto problems = counts.violations(); !problems.empty()) {
            throw InputError("line " + std::to_string(rec.line) + ": " + problems.front());
        }
        const int key = m.value_or(0);
        auto it = index_of_m.find(key);
        if (it == index_of_m.end()) {
            it = index_of_m.emplace(key, out.size()).first;
            out.push_back({m, {}});
        }
        auto& table = out[it->second].table;
        if (table.find(pair) != nullptr) {
            throw InputError("line " + std::to_string(rec.line) + ": duplicate setting pair");
        }
        table.add(pair, counts);
    }
    return out;
}

std::string batch_summary_json(const BatchResult& result, const RunPlan& plan) {
    json j = json::object();
    j["m"] = plan.config.m;
    j["tau"] = plan.tau;
    j["seed"] = plan.seed;
    j["n_trials_per_setting"] = plan.n_trials;
    j["trials"] = result.trials;
    j["heralds"] = result.heralds;
    j["dark_heralds"] = result.dark_heralds;
    j["p_s_hat"] = result.p_s_hat;
    j["p_sas_hat"] = result.p_sas_hat;
    j["p_sas_correlated"] = result.p_sas_correlated_hat;
    j["p_sas_basis"] = result.p_sas_basis;
    const auto analytic = analytic_p_s(plan.config, plan.config.m);
    j["p_s_analytic"] = analytic.exact;
    j["p_s_linear"] = analytic.linear;
    j["visibility"] = visibility(plan.config, plan.config.m, plan.tau);
    j["herald_bin_histogram"] = result.herald_bin_histogram;
    json settings = json::array();
    for (const auto& row : result.coincidences.rows()) {
        const auto& c = row.counts;
        settings.push_back({{"theta_s", row.settings.stokes.label()},
                            {"theta_a", row.settings.anti_stokes.label()},
                            {"C_D1T1", c.d1t1},
                            {"C_D1T2", c.d1t2},
                            {"C_D2T1", c.d2t1},
                            {"C_D2T2", c.d2t2},
                            {"N_D1", c.n_d1},
                            {"N_D2", c.n_d2},
                            {"N_total", c.n_total}});
    }
    j["settings"] = std::move(settings);
    return j.dump(2);
}

}  // namespace qmux

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
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli.hpp"
#include "output.hpp"
#include "pipelines.hpp"
#include "qmux/io.hpp"

namespace qmux::cli {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

struct Common {
    std::string config;
    std::string out;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t trials = 0;
    std::string format;
    unsigned threads = 1;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* format_opt = nullptr;
};

void add_common(CLI::App* cmd, Common& c, bool config_required, const std::string& config_help) {
    auto* cfg = cmd->add_option("--config", c.config, config_help);
    if (config_required) cfg->required();
    cmd->add_option("--out", c.out, "Output file (default: stdout)");
    c.seed_opt = cmd->add_option("--seed", c.seed, "Random seed");
    c.trials_opt = cmd->add_option("--trials", c.trials, "Trial count");
    c.format_opt = cmd->add_option("--format", c.format, "Output format")
                       ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", c.threads, "Worker threads, 0 = all cores (speed only)");
}

std::string format_or(const Common& c, const char* fallback) {
    return c.format.empty() ? fallback : c.format;
}

/// Check lines go with the data when it is written to a file, else to err.
std::ostream& report_stream(const Common& c, std::ostream& out, std::ostream& err) {
    return c.out.empty() || c.out == "-" ? err : out;
}

int report_checks(const std::vector<Check>& checks, std::ostream& os) {
    for (const auto& ch : checks) {
        os << (ch.pass ? "PASS" : "FAIL") << "  " << ch.name << ": " << ch.detail << '\n';
    }
    return all_pass(checks) ? kExitOk : kExitFailure;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    if (path.empty()) return {};
    return parse_experiment_config(read_file(path));
}

// simulate ------------------------------------------------------------------------

struct SimulateArgs {
    Common c;
    std::string counts;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    RunPlanDocument doc = parse_run_plan(read_file(a.c.config));
    if (a.c.seed_opt->count()) doc.plan.seed = a.c.seed;
    if (a.c.trials_opt->count()) {
        if (a.c.trials == 0) throw UsageError("--trials must be >= 1");
        doc.plan.n_trials = a.c.trials;
    }
    if (doc.plan.n_trials == 0) throw UsageError("n_trials must be >= 1");
    const bool sweep = !doc.m_values.empty();
    std::vector<int> ms = sweep ? doc.m_values : std::vector<int>{doc.plan.config.m};

    std::vector<TaggedTable> tables;
    Table summary;
    summary.header = {"m",         "trials",        "heralds",    "dark_heralds",
                      "p_s_hat",   "p_s_analytic",  "p_s_linear", "p_sas_hat",
                      "p_sas_correlated", "visibility"};
    ojson runs = ojson::array();
    for (int m : ms) {
        RunPlan plan = doc.plan;
        plan.config.m = m;
        const BatchResult r = run_batch(plan, {a.c.threads});
        tables.push_back({sweep ? std::optional<int>(m) : std::nullopt, r.coincidences});
        const auto analytic = analytic_p_s(plan.config, m);
        summary.rows.push_back({num(m), num(r.trials), num(r.heralds), num(r.dark_heralds),
                                num(r.p_s_hat), num(analytic.exact), num(analytic.linear),
                                num(r.p_sas_hat), num(r.p_sas_correlated_hat),
                                num(visibility(plan.config, m, plan.tau))});
        runs.push_back(ojson::parse(batch_summary_json(r, plan)));
    }

    if (!a.counts.empty()) write_file_atomic(a.counts, write_coincidence_csv(tables));
    const std::string fmt = format_or(a.c, "csv");
    std::string text;
    if (fmt == "json") {
        text = (sweep ? runs : runs.front()).dump(2) + "\n";
    } else {
        text = sweep ? summary.csv() : write_coincidence_csv(tables);
    }
    emit(a.c.out, text, out);
    return kExitOk;
}

// bell ------------------------------------------------------------------------------

struct AnalysisArgs {
    Common c;
    std::string input;
    int m = 0;
    CLI::Option* m_opt = nullptr;
    std::vector<double> angles;
    double theta = 45.0;
    double tau_ref = 0.7;
};

std::vector<TaggedTable> select_tables(const AnalysisArgs& a) {
    auto tables = read_coincidence_csv(read_file(a.input));
    if (!a.m_opt->count()) return tables;
    std::vector<TaggedTable> out;
    for (auto& t : tables) {
        if (t.m && *t.m == a.m) out.push_back(std::move(t));
    }
    if (out.empty()) throw InputError("no rows tagged m=" + std::to_string(a.m));
    return out;
}

int cmd_bell(const AnalysisArgs& a, std::ostream& out) {
    BellSettings settings;
    if (!a.angles.empty()) {
        if (a.angles.size() != 4) throw UsageError("--angles takes s,s',a,a'");
        settings = {a.angles[0], a.angles[1], a.angles[2], a.angles[3]};
    }
    const auto tables = select_tables(a);
    const auto pairs = settings.pairs();

    Table t;
    t.header = {"m", "S", "S_err"};
    for (const auto& p : pairs) t.header.push_back("E_" + p.stokes.label() + "_" + p.anti_stokes.label());
    ojson results = ojson::array();
    for (const auto& tagged : tables) {
        const BellResult b = bell_S(tagged.table, settings);
        const std::string m = tagged.m ? num(*tagged.m) : "";
        std::vector<std::string> row = {m, num(b.S), num(b.std_error)};
        ojson j;
        if (tagged.m) j["m"] = *tagged.m;
        j["S"] = b.S;
        j["std_error"] = b.std_error;
        j["E"] = ojson::array();
        for (std::size_t i = 0; i < 4; ++i) {
            row.push_back(num(b.E[i].value));
            j["E"].push_back({{"theta_s", pairs[i].stokes.label()},
                              {"theta_a", pairs[i].anti_stokes.label()},
                              {"E", b.E[i].value},
                              {"std_error", b.E[i].std_error}});
        }
        t.rows.push_back(std::move(row));
        results.push_back(std::move(j));
    }
    const std::string fmt = format_or(a.c, "json");
    emit(a.c.out,
         fmt == "csv" ? t.csv() : (results.size() == 1 ? results[0] : results).dump(2) + "\n", out);
    return kExitOk;
}

// tomo ------------------------------------------------------------------------------

int cmd_tomo(const AnalysisArgs& a, std::ostream& out) {
    const auto tables = select_tables(a);
    if (tables.size() != 1) throw UsageError("input holds several m values; pick one with --m");
    const Matrix4c raw = tomo_reconstruct(tables.front().table);
    const DensityMatrix physical = project_physical(raw);
    const double f = fidelity(physical, bell_state(a.theta));
    const Eigen::SelfAdjointEigenSolver<Matrix4c> eig(raw);

    if (format_or(a.c, "json") == "csv") {
        Table t;
        t.header = {"matrix", "row", "col", "re", "im"};
        for (const auto& [name, rho] : {std::pair{"raw", raw}, std::pair{"physical", physical.matrix()}}) {
            for (int i = 0; i < 4; ++i) {
                for (int k = 0; k < 4; ++k) {
                    t.rows.push_back({name, num(i), num(k), num(rho(i, k).real()),
                                      num(rho(i, k).imag())});
                }
            }
        }
        emit(a.c.out, t.csv(), out);
        return kExitOk;
    }
    ojson j = ojson::parse(density_json(physical.matrix()));
    j["raw_entries"] = ojson::parse(density_json(raw))["entries"];
    j["min_raw_eigenvalue"] = eig.eigenvalues().minCoeff();
    j["target_theta"] = a.theta;
    j["fidelity"] = f;
    j["purity"] = physical.purity();
    emit(a.c.out, j.dump(2) + "\n", out);
    return kExitOk;
}

// decay -----------------------------------------------------------------------------

int cmd_decay(const AnalysisArgs& a, std::ostream& out, std::ostream& err) {
    const auto points = read_decay_csv(read_file(a.input));
    const DecayFit fit = fit_decay(points, a.tau_ref);
    for (const auto& w : fit.warnings) err << "warning: " << w << '\n';
    if (format_or(a.c, "json") == "csv") {
        Table t;
        t.header = {"tau_c", "v_ref", "tau_ref", "lifetime_chsh", "var_tau_c", "var_v_ref"};
        t.rows.push_back({num(fit.tau_c), num(fit.v_ref), num(fit.tau_ref), num(fit.lifetime_chsh),
                          num(fit.covariance[0][0]), num(fit.covariance[1][1])});
        emit(a.c.out, t.csv(), out);
    } else {
        emit(a.c.out, decay_fit_json(fit) + "\n", out);
    }
    return kExitOk;
}

// pmc -------------------------------------------------------------------------------

struct PmcArgs {
    Common c;
    std::vector<double> angles;
    double stokes = 0.0;
    double tolerance = kDefaultPmcTolerance;
    CLI::Option* tol_opt = nullptr;
};

int cmd_pmc(const PmcArgs& a, std::ostream& out) {
    GeometryDocument doc;
    if (!a.c.config.empty()) {
        doc = parse_geometry(read_file(a.c.config));
    } else if (!a.angles.empty()) {
        doc.geometry = {a.angles, a.stokes};
    } else {
        throw UsageError("pmc needs --config or --angles");
    }
    if (a.tol_opt->count()) doc.tolerance = a.tolerance;
    const GeometryScan scan = scan_geometry(doc.geometry, doc.tolerance);

    if (format_or(a.c, "csv") == "csv") {
        emit(a.c.out, residual_csv(scan), out);
        return kExitOk;
    }
    const auto n = scan.residual.rows();
    double max_diag = 0.0;
    double min_off = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index l = 0; l < n; ++l) {
            if (k == l) {
                max_diag = std::max(max_diag, scan.residual(k, l));
            } else {
                min_off = std::min(min_off, scan.residual(k, l));
            }
        }
    }
    ojson j;
    j["beams"] = n;
    j["tolerance"] = scan.tolerance;
    j["max_diagonal_residual"] = max_diag;
    j["min_off_diagonal_residual"] = n > 1 ? ojson(min_off) : ojson(nullptr);
    j["directional_cross_terms"] = ojson::array();
    for (const auto& [k, l] : scan.directional_cross_terms) {
        j["directional_cross_terms"].push_back({k + 1, l + 1});
    }
    j["nondirectional_count"] = scan.nondirectional_count;
    j["directional_fraction"] = scan.directional_fraction;
    emit(a.c.out, j.dump(2) + "\n", out);
    return kExitOk;
}

// link ------------------------------------------------------------------------------

struct LinkArgs {
    Common c;
    std::uint64_t mc_runs = 0;
};

int cmd_link(const LinkArgs& a, std::ostream& out) {
    const LinkDocument doc = parse_link_sweep(read_file(a.c.config));
    const auto rows = run_link_sweep(doc.sweep);
    if (format_or(a.c, "csv") == "csv") {
        if (a.mc_runs > 0) throw UsageError("--mc-runs results are only written with --format json");
        emit(a.c.out, link_sweep_csv(rows), out);
        return kExitOk;
    }
    ojson j;
    j["rows"] = ojson::array();
    std::uint64_t index = 0;
    for (const auto& r : rows) {
        ojson row;
        row["L0_km"] = r.L0;
        row["m"] = r.m;
        row["p1"] = r.p1;
        row["comm_time_us"] = r.comm_time_us;
        row["p_link_exact"] = r.p_link.exact;
        row["p_link_linear"] = r.p_link.linear;
        const auto put_time = [&row](const char* key, double v) {
            row[key] = std::isinf(v) ? ojson("inf") : ojson(v);
        };
        put_time("t_single_us", r.time.single_us);
        put_time("t_multiplexed_linear_us", r.time.multiplexed_linear_us);
        put_time("t_multiplexed_exact_us", r.time.multiplexed_exact_us);
        put_time("speedup_linear", r.time.speedup_linear);
        put_time("speedup_exact", r.time.speedup_exact);
        row["diagnostics"] = r.time.diagnostics;
        if (a.mc_runs > 0) {
            LinkConfig link = doc.sweep.base;
            link.L0 = r.L0;
            link.m = r.m;
            link.p_link_single = r.p1;
            row["t_multiplexed_mc_us"] =
                simulate_mean_link_time(link, a.mc_runs, derive_seed(a.c.seed, index));
        }
        ++index;
        j["rows"].push_back(std::move(row));
    }
    if (doc.feedback) {
        j["feedback"] = ojson::array();
        std::set<int> ms(doc.sweep.m.begin(), doc.sweep.m.end());
        for (int m : ms) {
            FeedbackConfig fb = *doc.feedback;
            fb.N = m;
            ExperimentConfig config;
            config.m = m;
            const FeedbackResult f = feedback_success(fb);
            const StrategyComparison s = feedback_vs_multiplexed_report(fb, config);
            j["feedback"].push_back({{"m", m},
                                     {"p_exact", f.exact},
                                     {"p_linear", f.linear},
                                     {"memory_time_us", f.memory_time_us},
                                     {"deterministic_trials", f.deterministic_trials},
                                     {"feedback_time_us", s.feedback_time_us},
                                     {"multiplexed_time_us", s.multiplexed_time_us},
                                     {"multiplexed_probability", s.multiplexed_probability},
                                     {"probabilities_equal", s.probabilities_equal},
                                     {"times_equal", s.times_equal}});
        }
    }
    emit(a.c.out, j.dump(2) + "\n", out);
    return kExitOk;
}

// calibrate -------------------------------------------------------------------------

struct CalibrateArgs {
    Common c;
    std::vector<double> targets;
    CalibrationTargets t;
    std::uint64_t verify = 100'000;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.targets.size() != 3) throw UsageError("--targets takes S1,S_high,S_late");
    CalibrationTargets t = a.t;
    t.s1 = a.targets[0];
    t.s_high = a.targets[1];
    t.s_late = a.targets[2];
    const ExperimentConfig base = load_experiment_config(a.c.config);
    const Calibration cal = calibrate(t, base.chi);
    emit(a.c.out, calibration_patch_json(cal), out);
    if (a.verify == 0) return kExitOk;
    const ExperimentConfig calibrated = apply_calibration(base, cal, t.tau_ref);
    const CalibrationCheck check = verify_calibration(calibrated, t, a.verify, a.c.seed, a.c.threads);
    return report_checks(check.checks, report_stream(a.c, out, err));
}

// reproduce -------------------------------------------------------------------------

struct ReproduceArgs {
    Common c;
    std::string figure;
    std::uint64_t coincidences = 0;
    Fig5Options fig5;
};

Table fig2_table(const Fig2Result& r) {
    Table t;
    t.header = {"m", "trials", "heralds", "p_s_hat", "std_error", "p_s_exact", "p_s_linear"};
    for (const auto& row : r.rows) {
        t.rows.push_back({num(row.m), num(row.trials), num(row.heralds), num(row.p_s_hat),
                          num(row.std_error), num(row.p_s_exact), num(row.p_s_linear)});
    }
    return t;
}

Table fig5_table(const Fig5Result& r) {
    Table t;
    t.header = {"m",      "S",           "S_err",       "S_model",  "chsh_trials_per_setting",
                "trials", "coincidences", "p_sas_hat",  "p_sas_err"};
    for (std::size_t i = 0; i < r.bell.size(); ++i) {
        const auto& b = r.bell[i];
        const auto& c = r.rates[i];
        t.rows.push_back({num(b.m), num(b.bell.S), num(b.bell.std_error), num(b.s_model),
                          num(b.trials_per_setting), num(c.trials), num(c.coincidences),
                          num(c.p_sas_hat), num(c.std_error)});
    }
    return t;
}

int cmd_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = load_experiment_config(a.c.config);
    std::ostream& report = report_stream(a.c, out, err);
    const std::string fmt = format_or(a.c, a.figure == "fig4" ? "json" : "csv");
    const auto coincidences = [&](std::uint64_t fallback) {
        return a.coincidences ? a.coincidences : fallback;
    };
    if (a.c.trials_opt->count() && a.c.trials == 0) throw UsageError("--trials must be >= 1");

    if (a.figure == "fig2") {
        const auto r = reproduce_fig2(config, a.c.trials ? a.c.trials : 10'000'000, a.c.seed,
                                      a.c.threads);
        const Table t = fig2_table(r);
        emit(a.c.out, fmt == "json" ? t.json() : t.csv(), out);
        return report_checks(r.checks, report);
    }
    if (a.figure == "fig3") {
        const std::vector<double> taus = {0.7, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
        const auto r = reproduce_fig3(config, taus, coincidences(1'000'000), a.c.seed, a.c.threads);
        std::vector<DecayPoint> points;
        for (const auto& p : r.points) points.push_back({p.tau, p.bell.S, p.bell.std_error});
        if (fmt == "json") {
            Table t;
            t.header = {"tau_us", "S", "S_err", "S_model"};
            for (const auto& p : r.points) {
                t.rows.push_back({num(p.tau), num(p.bell.S), num(p.bell.std_error), num(p.s_model)});
            }
            emit(a.c.out, t.json(), out);
        } else {
            emit(a.c.out, write_decay_csv(points), out);
        }
        report << "fit: tau_c = " << num(r.fit.tau_c) << " us, lifetime = "
               << num(r.fit.lifetime_chsh) << " us\n";
        return report_checks(r.checks, report);
    }
    if (a.figure == "fig4") {
        const auto r = reproduce_fig4(config, coincidences(100'000), a.c.seed, a.c.threads);
        if (fmt == "csv") {
            Table t;
            t.header = {"row", "col", "re", "im"};
            for (int i = 0; i < 4; ++i) {
                for (int k = 0; k < 4; ++k) {
                    t.rows.push_back({num(i), num(k), num(r.physical(i, k).real()),
                                      num(r.physical(i, k).imag())});
                }
            }
            emit(a.c.out, t.csv(), out);
        } else {
            ojson j = ojson::parse(density_json(r.physical));
            j["raw_entries"] = ojson::parse(density_json(r.raw))["entries"];
            j["fidelity"] = r.fidelity;
            j["fidelity_model"] = r.fidelity_model;
            emit(a.c.out, j.dump(2) + "\n", out);
        }
        report << "model fidelity (1+3V)/4 = " << num(r.fidelity_model) << '\n';
        return report_checks(r.checks, report);
    }
    Fig5Options opts = a.fig5;
    if (a.coincidences) opts.chsh_coincidences = a.coincidences;
    const auto r = reproduce_fig5(config, opts, a.c.seed, a.c.threads);
    const Table t = fig5_table(r);
    emit(a.c.out, fmt == "json" ? t.json() : t.csv(), out);
    return report_checks(r.checks, report);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporally multiplexed spin-wave/photon entanglement source simulator", "qmux"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "qmux 0.1.0");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Run a Monte Carlo batch from a run plan");
    add_common(c_sim, sim.c, true, "Run plan JSON");
    c_sim->add_option("--counts", sim.counts, "Also write the coincidence table CSV here");

    AnalysisArgs bell;
    auto* c_bell = app.add_subcommand("bell", "CHSH parameter from a coincidence CSV");
    add_common(c_bell, bell.c, false, "Unused");
    c_bell->add_option("--input", bell.input, "Coincidence CSV")->required();
    bell.m_opt = c_bell->add_option("--m", bell.m, "Use only rows tagged with this m");
    c_bell->add_option("--angles", bell.angles, "s,s',a,a' in degrees")->delimiter(',');

    AnalysisArgs tomo;
    auto* c_tomo = app.add_subcommand("tomo", "Two-qubit tomography from a coincidence CSV");
    add_common(c_tomo, tomo.c, false, "Unused");
    c_tomo->add_option("--input", tomo.input, "Coincidence CSV with the nine basis pairs")
        ->required();
    tomo.m_opt = c_tomo->add_option("--m", tomo.m, "Use only rows tagged with this m");
    c_tomo->add_option("--theta", tomo.theta, "Target state angle for the fidelity");

    AnalysisArgs decay;
    auto* c_decay = app.add_subcommand("decay", "Fit the storage-time decay of S");
    add_common(c_decay, decay.c, false, "Unused");
    c_decay->add_option("--input", decay.input, "CSV with tau_us,S[,S_err]")->required();
    c_decay->add_option("--tau-ref", decay.tau_ref, "Reference storage time (us)");

    PmcArgs pmc;
    auto* c_pmc = app.add_subcommand("pmc", "Phase-matching residuals for a beam fan");
    add_common(c_pmc, pmc.c, false, "Geometry JSON");
    c_pmc->add_option("--angles", pmc.angles, "Write angles in degrees")->delimiter(',');
    c_pmc->add_option("--stokes", pmc.stokes, "Stokes detection angle in degrees");
    pmc.tol_opt = c_pmc->add_option("--tolerance", pmc.tolerance, "Phase-matching tolerance");

    LinkArgs link;
    auto* c_link = app.add_subcommand("link", "Elementary-link timing sweep");
    add_common(c_link, link.c, true, "Link sweep JSON");
    c_link->add_option("--mc-runs", link.mc_runs, "Monte Carlo runs per row (json only)");

    CalibrateArgs cal;
    auto* c_cal = app.add_subcommand("calibrate", "Solve v1, beta, tau_c from three S targets");
    add_common(c_cal, cal.c, false, "Base experiment config JSON");
    c_cal->add_option("--targets", cal.targets, "S1,S_high,S_late")->delimiter(',')->required();
    c_cal->add_option("--m-high", cal.t.m_high, "Mode count of the second and third targets");
    c_cal->add_option("--tau-ref", cal.t.tau_ref, "Storage time of the first two targets (us)");
    c_cal->add_option("--tau-late", cal.t.tau_late, "Storage time of the third target (us)");
    c_cal->add_option("--verify", cal.verify,
                      "Coincidences per setting for the round-trip check, 0 to skip");

    ReproduceArgs rep;
    auto* c_rep = app.add_subcommand("reproduce", "Regenerate a figure table and check it");
    add_common(c_rep, rep.c, false, "Experiment config JSON (default: calibrated defaults)");
    c_rep->add_option("figure", rep.figure, "fig2, fig3, fig4 or fig5")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
    c_rep->add_option("--coincidences", rep.coincidences,
                      "Coincidences per setting pair for CHSH and tomography runs");
    c_rep->add_option("--rate-endpoints", rep.fig5.rate_coincidences_endpoints,
                      "fig5: coincidences for the rate at m = 1 and the largest m");
    c_rep->add_option("--rate-interior", rep.fig5.rate_coincidences_interior,
                      "fig5: coincidences for the rate at other m");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_sim->parsed()) return cmd_simulate(sim, out);
        if (c_bell->parsed()) return cmd_bell(bell, out);
        if (c_tomo->parsed()) return cmd_tomo(tomo, out);
        if (c_decay->parsed()) return cmd_decay(decay, out, err);
        if (c_pmc->parsed()) return cmd_pmc(pmc, out);
        if (c_link->parsed()) return cmd_link(link, out);
        if (c_cal->parsed()) return cmd_calibrate(cal, out, err);
        if (c_rep->parsed()) return cmd_reproduce(rep, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CalibrationError& e) {
        err << "calibration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace qmux::cli

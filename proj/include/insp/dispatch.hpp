#pragma once

#include "insp/config.hpp"
#include "insp/hitting.hpp"
#include "insp/planner.hpp"
#include "insp/report.hpp"
#include "insp/sensitivity.hpp"
#include "insp/simulate.hpp"

#include <iostream>
#include <optional>
#include <string>

// Batch front door: loads a run configuration, dispatches to the planner,
// simulator, sensitivity sweep, or diagnostics, and writes the report
// files plus a run manifest.

namespace insp {

// Exit statuses by failure category.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfigParse = 2;
inline constexpr int kExitConfigSemantic = 3;
inline constexpr int kExitModelInvalid = 4;
inline constexpr int kExitRuntime = 5;

inline constexpr const char* kValueAccounting = "reward-through-inspection-period";

struct DispatchOptions {
    std::string command; // plan | simulate | sensitivity | hitting-time | validate
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<long> runs;
};

namespace detail {

inline const TransitionModel& require_model(const RunConfig& cfg) {
    if (!cfg.model) throw ConfigError("config has no [model] block");
    return *cfg.model;
}

inline const PenaltyParams& require_penalties(const RunConfig& cfg) {
    if (!cfg.penalties) throw ConfigError("config has no [penalties] block");
    return *cfg.penalties;
}

inline void require_valid_model(const TransitionModel& m) {
    ValidationReport report = validate_model(m);
    if (!report.ok())
        throw std::runtime_error("transition model failed validation:\n" + report.to_string());
}

inline std::string assumption_summary(const AssumptionReport& r) {
    auto one = [](const char* name, const AssumptionCheck& c) {
        std::string s = std::string(name) + (c.pass ? "=pass" : "=fail");
        if (!c.pass && c.first_violation)
            s += "@" + std::to_string(*c.first_violation);
        return s;
    };
    std::string s = one("dr_non_decreasing", r.dr_non_decreasing) + " " +
                    one("cr_non_decreasing", r.cr_non_decreasing) + " " +
                    one("nr_non_increasing", r.nr_non_increasing);
    if (r.variant_checked) {
        s += " " + one("nr_ci_non_decreasing", r.nr_times_ci_non_decreasing) + " " +
             one("penalty_rate_dominance", r.penalty_rate_dominance);
    }
    return s;
}

inline void write_manifest(const std::filesystem::path& dir, const std::string& command,
                           const RunConfig& cfg, KeyValueWriter extra = {}) {
    write_file_atomic(dir / "effective_config.ini", serialize_config(cfg));
    KeyValueWriter manifest;
    manifest.set("command", command)
        .set("config_hash", hash_hex(fnv1a_hash(serialize_config(cfg, false))))
        .set("seed", static_cast<long>(cfg.simulation.seed))
        .set("value_accounting", kValueAccounting);
    write_file_atomic(dir / "manifest.txt", manifest.str() + extra.str());
}

inline int run_validate(const RunConfig& cfg, const std::filesystem::path& dir,
                        std::ostream& log) {
    const TransitionModel& m = require_model(cfg);
    ValidationReport report = validate_model(m);
    KeyValueWriter out;
    out.set("result", report.ok() ? "pass" : "fail");
    out.set("violations", static_cast<long>(report.issues.size()));
    std::string body = out.str();
    for (const auto& issue : report.issues)
        body += issue.where + ": " + issue.what + "\n";
    write_file_atomic(dir / "validation.txt", body);
    write_manifest(dir, "validate", cfg);
    log << (report.ok() ? "model valid\n" : "model INVALID\n") << report.to_string();
    return report.ok() ? kExitOk : kExitModelInvalid;
}

inline int run_hitting_time(const RunConfig& cfg, const std::filesystem::path& dir,
                            std::ostream& log) {
    const TransitionModel& m = require_model(cfg);
    require_valid_model(m);
    HittingTimes h = hitting_times(m);
    KeyValueWriter out;
    out.set("mu_N", h.mu_n).set("mu_V", h.mu_v).set("mu_O", h.mu_o).set("t_E", h.t_e);
    write_file_atomic(dir / "hitting_times.txt", out.str());
    write_manifest(dir, "hitting-time", cfg);
    log << "mu_N = " << h.mu_n << ", t_E = " << h.t_e << "\n";
    return kExitOk;
}

inline int run_plan(const RunConfig& cfg, const std::filesystem::path& dir, std::ostream& log) {
    const TransitionModel& m = require_model(cfg);
    require_valid_model(m);
    const PenaltyParams& pen = require_penalties(cfg);
    Belief b1 = Belief::operational(1, 0, 0);
    bool with_variant = pen.c_tilde > 0.0;

    PlanDecision base = optimal_inspection_time(m, pen, b1, Variant::Base, cfg.planner.horizon,
                                                cfg.planner.convergence_window);
    std::optional<PlanDecision> variant;
    if (with_variant)
        variant = optimal_inspection_time(m, pen, b1, Variant::InspectionOutcome,
                                          cfg.planner.horizon, cfg.planner.convergence_window);

    auto describe = [](const PlanDecision& d) {
        if (!d.t_star) return std::string("never");
        return std::to_string(*d.t_star) + (d.forced_at_horizon ? " (forced at horizon)" : "");
    };

    KeyValueWriter out;
    out.set("t_star_base", describe(base));
    out.set("assumptions_base", assumption_summary(base.assumptions));
    if (variant) {
        out.set("t_star_variant", describe(*variant));
        out.set("assumptions_variant", assumption_summary(variant->assumptions));
    } else {
        out.set("t_star_variant", "not computed (c_tilde = 0)");
    }
    write_file_atomic(dir / "plan_result.txt", out.str());

    TableWriter scores(with_variant ? std::vector<std::string>{"t", "score_base", "score_variant"}
                                    : std::vector<std::string>{"t", "score_base"});
    std::size_t n = base.score_trace.size();
    if (variant) n = std::max(n, variant->score_trace.size());
    for (std::size_t i = 0; i < n; ++i) {
        scores.cell(static_cast<long>(i + 1));
        if (i < base.score_trace.size()) scores.cell(base.score_trace[i], 12);
        else scores.cell("-");
        if (variant) {
            if (i < variant->score_trace.size()) scores.cell(variant->score_trace[i], 12);
            else scores.cell("-");
        }
        scores.end_row();
    }
    write_file_atomic(dir / "plan_scores.tsv", scores.str());
    write_manifest(dir, "plan", cfg);

    log << "t_star_base = " << describe(base);
    if (variant) log << ", t_star_variant = " << describe(*variant);
    log << "\n";
    return kExitOk;
}

inline int run_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                        std::ostream& log) {
    const TransitionModel& m = require_model(cfg);
    require_valid_model(m);
    const PenaltyParams& pen = require_penalties(cfg);
    Belief b1 = Belief::operational(1, 0, 0);

    SimConfig sim;
    sim.n_runs = cfg.simulation.runs;
    sim.seed = cfg.simulation.seed;
    sim.perturbation_sd = cfg.simulation.perturbation_sd;
    sim.max_steps = cfg.simulation.max_steps;
    sim.redraw_per_run = cfg.simulation.redraw_per_run;
    sim.record_runs = cfg.output.per_run_records;

    HittingTimes h = hitting_times(m);
    sim.rules.push_back({"t_E", h.t_e});

    PlanDecision base = optimal_inspection_time(m, pen, b1, Variant::Base, cfg.planner.horizon,
                                                cfg.planner.convergence_window);
    sim.rules.push_back({"t_V", base.t_star});
    if (pen.c_tilde > 0.0) {
        PlanDecision variant =
            optimal_inspection_time(m, pen, b1, Variant::InspectionOutcome, cfg.planner.horizon,
                                    cfg.planner.convergence_window);
        sim.rules.push_back({"t_VC", variant.t_star});
    }
    for (int t : cfg.simulation.fixed_rules)
        sim.rules.push_back({"fixed_" + std::to_string(t), t});
    if (cfg.simulation.include_never) sim.rules.push_back({"never", std::nullopt});

    SimReport report = run_experiment(sim, m, pen);

    TableWriter table({"rule", "caught_fraction", "mean_value_no_ic", "mean_value_ic",
                       "n_excluded"});
    for (const auto& r : report.rules) {
        table.cell(r.name);
        if (r.caught_fraction) table.cell(*r.caught_fraction, 12);
        else table.cell("-");
        table.cell(r.mean_value_no_ic, 12).cell(r.mean_value_ic, 12);
        table.cell(static_cast<long>(report.excluded_runs.size()));
        table.end_row();
    }
    write_file_atomic(dir / "sim_report.tsv", table.str());

    KeyValueWriter end_time;
    end_time.set("runs", report.n_runs)
        .set("effective_runs", report.n_effective)
        .set("mean_end_time", report.end_time.mean, 12)
        .set("stddev_end_time", report.end_time.stddev, 12)
        .set("median_end_time", report.end_time.median)
        .set("min_end_time", report.end_time.min)
        .set("max_end_time", report.end_time.max)
        .set("renormalized_rows", report.renormalized_rows);
    if (!report.excluded_runs.empty()) {
        std::string runs;
        for (long r : report.excluded_runs) runs += (runs.empty() ? "" : " ") + std::to_string(r);
        end_time.set("excluded_runs", runs);
    }
    write_file_atomic(dir / "sim_endtime.txt", end_time.str());

    if (sim.record_runs) {
        TableWriter runs({"run", "t_F", "event"});
        for (const auto& rec : report.run_records) {
            runs.cell(rec.run).cell(rec.t_f).cell(std::string(state_name(rec.event)));
            runs.end_row();
        }
        write_file_atomic(dir / "sim_runs.tsv", runs.str());
    }

    KeyValueWriter extra;
    extra.set("runs", report.n_runs);
    for (const auto& r : sim.rules)
        extra.set("rule_" + r.name, r.time ? std::to_string(*r.time) : "never");
    write_manifest(dir, "simulate", cfg, std::move(extra));

    log << "simulated " << report.n_effective << " runs";
    if (!report.excluded_runs.empty())
        log << " (" << report.excluded_runs.size() << " excluded at the step cap)";
    log << "\n";
    return kExitOk;
}

inline int run_sensitivity(const RunConfig& cfg, const std::filesystem::path& dir,
                           std::ostream& log) {
    const TransitionModel& m = require_model(cfg);
    require_valid_model(m);
    double c_fixed;
    if (cfg.sensitivity.c) c_fixed = *cfg.sensitivity.c;
    else c_fixed = require_penalties(cfg).c;

    std::vector<int> ts = cfg.sensitivity.t_values;
    if (ts.empty())
        for (int t = 4; t <= 22; ++t) ts.push_back(t);

    auto rows = d_range_sweep(m, c_fixed, ts, cfg.sensitivity.d_min, cfg.sensitivity.d_max,
                              cfg.sensitivity.d_step, cfg.planner.horizon);

    TableWriter table({"t", "d_L", "d_U"});
    for (const auto& row : rows) {
        table.cell(row.t);
        if (row.empty) table.cell("-").cell("-");
        else table.cell(row.d_lo, 10).cell(row.d_hi, 10);
        table.end_row();
    }
    write_file_atomic(dir / "sensitivity_dranges.tsv", table.str());

    KeyValueWriter extra;
    extra.set("c_fixed", c_fixed).set("d_min", cfg.sensitivity.d_min)
        .set("d_max", cfg.sensitivity.d_max).set("d_step", cfg.sensitivity.d_step);
    write_manifest(dir, "sensitivity", cfg, std::move(extra));
    log << "swept " << rows.size() << " inspection periods\n";
    return kExitOk;
}

} // namespace detail

inline int dispatch(const DispatchOptions& opts, std::ostream& log = std::cout) {
    RunConfig cfg;
    try {
        cfg = load_config_file(opts.config_path);
    } catch (const ConfigError& ex) {
        log << "config error";
        if (ex.line > 0) log << " (line " << ex.line << ", column " << ex.column << ")";
        log << ": " << ex.what() << "\n";
        return ex.line > 0 ? kExitConfigParse : kExitConfigSemantic;
    }
    if (opts.out_dir) cfg.output.dir = *opts.out_dir;
    if (opts.seed) cfg.simulation.seed = *opts.seed;
    if (opts.runs) cfg.simulation.runs = *opts.runs;
    std::filesystem::path dir(cfg.output.dir);

    try {
        if (opts.command == "validate") return detail::run_validate(cfg, dir, log);
        if (opts.command == "hitting-time") return detail::run_hitting_time(cfg, dir, log);
        if (opts.command == "plan") return detail::run_plan(cfg, dir, log);
        if (opts.command == "simulate") return detail::run_simulate(cfg, dir, log);
        if (opts.command == "sensitivity") return detail::run_sensitivity(cfg, dir, log);
        log << "unknown command: " << opts.command << "\n";
        return kExitUsage;
    } catch (const ConfigError& ex) {
        log << "config error: " << ex.what() << "\n";
        return kExitConfigSemantic;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        std::string what = ex.what();
        return what.find("failed validation") != std::string::npos ? kExitModelInvalid
                                                                   : kExitRuntime;
    }
}

} // namespace insp

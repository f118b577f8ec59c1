#pragma once

#include "insp/hitting.hpp"
#include "insp/model.hpp"
#include "insp/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Monte-Carlo evaluation of inspection rules.
//
// Each run samples one degradation trajectory (optionally from a freshly
// perturbed matrix) and scores every rule on that same trajectory, with
// the mandatory-closure coin flips pre-drawn per period so that all rules
// share identical randomness. Value accounting: one reward per period the
// facility operates, the inspection period included; the event period
// earns nothing and incurs its penalty once.

namespace insp {

struct InspectionRule {
    std::string name;
    std::optional<int> time; // empty = never inspect
};

struct SimConfig {
    long n_runs = 100000;
    std::uint64_t seed = 0;
    std::vector<InspectionRule> rules;
    double perturbation_sd = 0.0; // 0 = exact matrix
    long max_steps = 100000;
    bool redraw_per_run = true; // fresh perturbed matrix each run
    bool record_runs = false;   // keep per-run end times for plotting

    void validate() const {
        if (n_runs < 1) throw std::invalid_argument("n_runs must be at least 1");
        if (perturbation_sd < 0.0) throw std::invalid_argument("perturbation sd must be >= 0");
        for (const auto& r : rules) {
            if (r.time && *r.time < 1)
                throw std::invalid_argument("inspection times must be >= 1");
            if (r.time && *r.time > max_steps)
                throw std::invalid_argument("max_steps must cover every finite rule time");
        }
    }
};

struct Trajectory {
    std::vector<int> states;       // realized state per period, absorption included
    long t_f = 0;                  // first period in {D, C}
    State event = State::D;        // which absorbing state ended the run
    std::vector<double> ic_draws;  // uniform per operational period, reserved for IC
};

// Simulates one facility from state N until a disruptive event.
inline Trajectory sample_trajectory(const TransitionModel& m, RunStream& rng,
                                    long max_steps = 100000) {
    Trajectory traj;
    int state = 0; // N
    traj.states.push_back(state);
    traj.ic_draws.push_back(rng.next_uniform());
    for (long t = 2; t <= max_steps; ++t) {
        double u = rng.next_uniform();
        double acc = 0.0;
        int next = 4; // numerical slack lands in the final column C
        for (int c = 0; c < 5; ++c) {
            acc += m.p[state][c];
            if (u < acc) {
                next = c;
                break;
            }
        }
        traj.states.push_back(next);
        if (next >= 3) {
            traj.t_f = t;
            traj.event = static_cast<State>(next);
            return traj;
        }
        state = next;
        traj.ic_draws.push_back(rng.next_uniform());
    }
    throw StepCapError("trajectory did not absorb within the step cap");
}

struct RuleOutcome {
    bool caught;
    double value;
};

// Scores one rule on a sampled trajectory. An inspection catches the event
// iff it strictly precedes the event period. with_inspection_closure
// additionally charges c_tilde when the reserved draw for the inspection
// period triggers a mandatory closure.
inline RuleOutcome evaluate_rule(const Trajectory& traj, std::optional<int> rule_time,
                                 const PenaltyParams& pen, bool with_inspection_closure,
                                 const TransitionModel& m) {
    if (rule_time && *rule_time < 1)
        throw std::invalid_argument("inspection times must be >= 1");
    if (rule_time && static_cast<long>(*rule_time) < traj.t_f) {
        int t = *rule_time;
        double value = static_cast<double>(t);
        if (with_inspection_closure) {
            int state = traj.states[static_cast<std::size_t>(t) - 1];
            if (traj.ic_draws[static_cast<std::size_t>(t) - 1] < m.p_ic[state])
                value -= pen.c_tilde;
        }
        return {true, value};
    }
    double penalty = traj.event == State::D ? pen.d : pen.c;
    return {false, static_cast<double>(traj.t_f - 1) - penalty};
}

// Draws a row-stochastic neighbour of the base matrix. Structurally
// nonzero entries are sampled Normal(p, sd) and repaired left to right:
// the diagonal is capped at 0.995, later entries are clamped to the mass
// still available, and the final structural entry takes the residual.
// Structural zeros stay zero, so the degradation pattern is preserved.
inline TransitionModel perturb_matrix(const TransitionModel& base, double sd, RunStream& rng,
                                      long* renormalized_rows = nullptr) {
    if (sd < 0.0) throw std::invalid_argument("perturbation sd must be >= 0");
    if (sd == 0.0) return base;
    TransitionModel out = base;
    for (int r = 0; r < 3; ++r) {
        std::vector<int> structural;
        for (int c = 0; c < 5; ++c)
            if (base.p[r][c] > 0.0) structural.push_back(c);
        if (structural.size() < 2) continue; // single-entry row is pinned at 1
        double used = 0.0;
        bool overflow = false;
        for (std::size_t i = 0; i + 1 < structural.size(); ++i) {
            int c = structural[i];
            double sample = rng.next_normal(base.p[r][c], sd);
            double v;
            if (c == r)
                v = std::clamp(sample, 0.0, 0.995);
            else
                v = std::clamp(sample, 0.0, 1.0 - used);
            out.p[r][c] = v;
            used += v;
        }
        double residual = 1.0 - used;
        if (residual < 0.0) {
            // Unreachable under sequential clamping; kept as a repair path
            // and surfaced through the counter.
            overflow = true;
            double total = used;
            for (std::size_t i = 0; i + 1 < structural.size(); ++i)
                out.p[r][structural[i]] /= total;
            residual = 0.0;
        }
        out.p[r][structural.back()] = residual;
        if (overflow && renormalized_rows) ++*renormalized_rows;
    }
    return out;
}

struct RuleStats {
    std::string name;
    std::optional<double> caught_fraction; // absent for the never rule
    double mean_value_no_ic = 0.0;
    double mean_value_ic = 0.0;
};

struct EndTimeStats {
    double mean = 0.0;
    double stddev = 0.0;
    double median = 0.0;
    long min = 0;
    long max = 0;
};

struct RunRecord {
    long run;
    long t_f;
    State event;
};

struct SimReport {
    std::vector<RuleStats> rules;
    EndTimeStats end_time;
    long n_runs = 0;
    long n_effective = 0; // runs that absorbed within the cap
    std::vector<long> excluded_runs;
    long renormalized_rows = 0;
    std::vector<RunRecord> run_records; // populated when record_runs is set
};

// Runs the full experiment batch. Deterministic in (config, model): run i
// draws only from its own (seed, i) stream.
inline SimReport run_experiment(const SimConfig& config, const TransitionModel& model,
                                const PenaltyParams& pen) {
    config.validate();
    SimReport report;
    report.n_runs = config.n_runs;

    const std::size_t n_rules = config.rules.size();
    std::vector<long> caught(n_rules, 0);
    std::vector<double> sum_no_ic(n_rules, 0.0), sum_ic(n_rules, 0.0);
    std::map<long, long> t_f_counts;
    double t_f_sum = 0.0, t_f_sumsq = 0.0;

    TransitionModel batch_model = model;
    bool batch_drawn = false;

    for (long run = 0; run < config.n_runs; ++run) {
        RunStream rng(config.seed, static_cast<std::uint64_t>(run));
        const TransitionModel* m = &model;
        TransitionModel perturbed;
        if (config.perturbation_sd > 0.0) {
            if (config.redraw_per_run) {
                perturbed = perturb_matrix(model, config.perturbation_sd, rng,
                                           &report.renormalized_rows);
                m = &perturbed;
            } else {
                if (!batch_drawn) {
                    RunStream batch_rng(config.seed, ~std::uint64_t{0});
                    batch_model = perturb_matrix(model, config.perturbation_sd, batch_rng,
                                                 &report.renormalized_rows);
                    batch_drawn = true;
                }
                m = &batch_model;
            }
        }

        Trajectory traj;
        try {
            traj = sample_trajectory(*m, rng, config.max_steps);
        } catch (const StepCapError&) {
            report.excluded_runs.push_back(run);
            continue;
        }

        ++report.n_effective;
        t_f_sum += static_cast<double>(traj.t_f);
        t_f_sumsq += static_cast<double>(traj.t_f) * static_cast<double>(traj.t_f);
        ++t_f_counts[traj.t_f];
        if (config.record_runs) report.run_records.push_back({run, traj.t_f, traj.event});

        for (std::size_t i = 0; i < n_rules; ++i) {
            const auto& rule = config.rules[i];
            RuleOutcome no_ic = evaluate_rule(traj, rule.time, pen, false, *m);
            RuleOutcome ic = evaluate_rule(traj, rule.time, pen, true, *m);
            if (no_ic.caught) ++caught[i];
            sum_no_ic[i] += no_ic.value;
            sum_ic[i] += ic.value;
        }
    }

    const double n = static_cast<double>(report.n_effective);
    for (std::size_t i = 0; i < n_rules; ++i) {
        RuleStats stats;
        stats.name = config.rules[i].name;
        if (config.rules[i].time)
            stats.caught_fraction = static_cast<double>(caught[i]) / n;
        stats.mean_value_no_ic = sum_no_ic[i] / n;
        stats.mean_value_ic = sum_ic[i] / n;
        report.rules.push_back(stats);
    }

    if (report.n_effective > 0) {
        report.end_time.mean = t_f_sum / n;
        double var = (t_f_sumsq - n * report.end_time.mean * report.end_time.mean) /
                     (n > 1 ? n - 1 : 1);
        report.end_time.stddev = std::sqrt(std::max(0.0, var));
        report.end_time.min = t_f_counts.begin()->first;
        report.end_time.max = t_f_counts.rbegin()->first;

        // Median as the average of the two middle order statistics.
        long lo_rank = (report.n_effective + 1) / 2;
        long hi_rank = report.n_effective / 2 + 1;
        long seen = 0;
        std::optional<long> lo, hi;
        for (const auto& [t, count] : t_f_counts) {
            seen += count;
            if (!lo && seen >= lo_rank) lo = t;
            if (!hi && seen >= hi_rank) {
                hi = t;
                break;
            }
        }
        report.end_time.median = (static_cast<double>(*lo) + static_cast<double>(*hi)) / 2.0;
    }
    return report;
}

} // namespace insp

#pragma once

#include "insp/model.hpp"

#include <optional>
#include <vector>

// Belief filtering under the no-report observation, and the monotonicity
// checks that license the two-plan planner shortcut.

namespace insp {

namespace detail {
inline void require_operational(const Belief& b, const char* op) {
    if (!b.is_operational())
        throw CategoryError(std::string(op) + " requires an operational belief");
}
} // namespace detail

inline ObservationProbs observation_probs(const TransitionModel& m, const Belief& belief) {
    detail::require_operational(belief, "observation_probs");
    ObservationProbs obs{0.0, 0.0, 0.0, 0.0};
    for (int s = 0; s < 3; ++s) {
        obs.p_dr += m.to_failed(s) * belief.b[s];
        obs.p_cr += m.to_closed(s) * belief.b[s];
        obs.p_nr += m.stay_operational(s) * belief.b[s];
        obs.p_cr_given_i += m.p_ic[s] * belief.b[s];
    }
    return obs;
}

// Posterior over {N,V,O} after observing no report for one period.
inline Belief update_belief_nr(const TransitionModel& m, const Belief& belief) {
    detail::require_operational(belief, "update_belief_nr");
    double n = m.op(0, 0) * belief.n();
    double v = m.op(0, 1) * belief.n() + m.op(1, 1) * belief.v();
    double o = m.op(0, 2) * belief.n() + m.op(1, 2) * belief.v() + m.op(2, 2) * belief.o();
    double p_nr = n + v + o;
    if (p_nr <= 0.0)
        throw DegenerateUpdateError("no-report observation has probability zero");
    return Belief::operational(n / p_nr, v / p_nr, o / p_nr);
}

struct TrajectoryStep {
    Belief belief;             // b^t
    ObservationProbs lookahead; // P[(.)]^{t+1} and P[(cr)|(i)]^t
};

struct BeliefTrajectory {
    std::vector<TrajectoryStep> steps; // index i holds period t = i + 1
    bool truncated = false;            // degenerate update hit mid-trajectory
    std::optional<int> truncated_at;   // period whose successor was undefined

    int length() const { return static_cast<int>(steps.size()); }
};

inline BeliefTrajectory belief_trajectory(const TransitionModel& m, const Belief& b1,
                                          int horizon) {
    detail::require_operational(b1, "belief_trajectory");
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    BeliefTrajectory traj;
    traj.steps.reserve(static_cast<std::size_t>(horizon));
    Belief b = b1;
    for (int t = 1; t <= horizon; ++t) {
        ObservationProbs obs = observation_probs(m, b);
        traj.steps.push_back({b, obs});
        if (t == horizon) break;
        if (obs.p_nr <= 0.0) {
            traj.truncated = true;
            traj.truncated_at = t;
            break;
        }
        b = update_belief_nr(m, b);
    }
    return traj;
}

// One monotonicity check over a believed observation sequence.
struct AssumptionCheck {
    bool pass = true;
    // 1-based trajectory index of the first violating adjacent pair, i.e.
    // the comparison between periods index and index+1 failed.
    std::optional<int> first_violation;
};

struct AssumptionReport {
    AssumptionCheck dr_non_decreasing;
    AssumptionCheck cr_non_decreasing;
    AssumptionCheck nr_non_increasing;
    // Variant-only checks; skipped (pass, no data) when not requested.
    AssumptionCheck nr_times_ci_non_decreasing;
    AssumptionCheck penalty_rate_dominance; // alpha_d*d(dr) + alpha_c*d(cr) >= d(ci)
    bool variant_checked = false;

    bool all_pass() const {
        return dr_non_decreasing.pass && cr_non_decreasing.pass && nr_non_increasing.pass &&
               nr_times_ci_non_decreasing.pass && penalty_rate_dominance.pass;
    }
};

// Verifies the monotonicity assumptions along a filtered trajectory.
// Comparisons tolerate 1e-12 of accumulation error. Variant checks need
// c_tilde > 0 (the alpha factors are otherwise undefined).
inline AssumptionReport check_assumptions(const BeliefTrajectory& traj,
                                          const PenaltyParams& penalties,
                                          bool variant_checks) {
    if (traj.length() < 2)
        throw std::invalid_argument("check_assumptions needs a trajectory of length >= 2");

    AssumptionReport report;
    const auto& steps = traj.steps;
    const int n = traj.length();

    auto flag = [](AssumptionCheck& chk, int index) {
        if (chk.pass) {
            chk.pass = false;
            chk.first_violation = index;
        }
    };

    for (int i = 0; i + 1 < n; ++i) {
        const auto& a = steps[i].lookahead;
        const auto& b = steps[i + 1].lookahead;
        if (b.p_dr < a.p_dr - kProbTol) flag(report.dr_non_decreasing, i + 1);
        if (b.p_cr < a.p_cr - kProbTol) flag(report.cr_non_decreasing, i + 1);
        if (b.p_nr > a.p_nr + kProbTol) flag(report.nr_non_increasing, i + 1);
    }

    if (variant_checks) {
        if (penalties.c_tilde <= 0.0)
            throw std::domain_error(
                "variant assumption checks requested but c_tilde = 0 leaves alpha undefined");
        report.variant_checked = true;
        const double alpha_d = penalties.alpha_d();
        const double alpha_c = penalties.alpha_c();

        // nr^t pairs with ci at the belief of period t: nr from step t-1's
        // lookahead, ci from step t itself. Defined for t = 2..n.
        auto nr_at = [&](int t) { return steps[t - 2].lookahead.p_nr; };
        auto ci_at = [&](int t) { return steps[t - 1].lookahead.p_cr_given_i; };
        for (int t = 2; t + 1 <= n; ++t) {
            double cur = nr_at(t) * ci_at(t);
            double nxt = nr_at(t + 1) * ci_at(t + 1);
            if (nxt < cur - kProbTol) flag(report.nr_times_ci_non_decreasing, t - 1);
        }
        for (int t = 2; t + 1 <= n; ++t) {
            double d_dr = steps[t - 1].lookahead.p_dr - steps[t - 2].lookahead.p_dr;
            double d_cr = steps[t - 1].lookahead.p_cr - steps[t - 2].lookahead.p_cr;
            double d_ci = ci_at(t + 1) - ci_at(t);
            if (alpha_d * d_dr + alpha_c * d_cr < d_ci - kProbTol)
                flag(report.penalty_rate_dominance, t - 1);
        }
    }
    return report;
}

} // namespace insp

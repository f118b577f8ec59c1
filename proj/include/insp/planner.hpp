#pragma once

#include "insp/filter.hpp"
#include "insp/value.hpp"

#include <optional>
#include <vector>

// Two-plan optimal-stopping walk.
//
// Under the monotonicity assumptions (see check_assumptions) the optimal
// inspection time is the first period where inspecting immediately is at
// least as good as waiting exactly one more period. The walk therefore
// compares just two plans per period, and the score it integrates,
// V^t(b,(ni,i)) - V^t(b,(i)), doubles as an urgency ranking: more negative
// means more overdue.

namespace insp {

inline constexpr int kDefaultHorizon = 500;
inline constexpr int kDefaultConvergenceWindow = 50;

struct StopCondition {
    double v_inspect;  // value of inspecting this period
    double v_wait_one; // value of waiting one period, then inspecting
    double score;      // v_wait_one - v_inspect; inspect when <= 0
};

inline StopCondition stop_condition(const TransitionModel& m, const PenaltyParams& pen,
                                    const Belief& belief, Variant variant) {
    detail::require_operational(belief, "stop_condition");
    double v0 = detail::inspect_now_value(m, pen, belief, variant);
    ObservationProbs obs = observation_probs(m, belief);
    double next = 1.0;
    if (variant == Variant::InspectionOutcome && obs.p_nr > 0.0)
        next = detail::inspect_now_value(m, pen, update_belief_nr(m, belief), variant);
    double v1 = 1.0 - pen.d * obs.p_dr - pen.c * obs.p_cr + obs.p_nr * next;
    return {v0, v1, v1 - v0};
}

// Penalty-independent walk data: the filtered beliefs, their one-step
// lookaheads, and the mandatory-closure probabilities. Built once per
// (model, b1); scores for any (d, c, c_tilde) evaluate against it without
// refiltering, which is what penalty sweeps lean on.
class BeliefWalk {
  public:
    struct Step {
        std::array<double, 3> belief; // b^t over {N,V,O}
        double p_dr, p_cr, p_nr;      // lookahead P[(.)]^{t+1}
        double ci;                    // P[(cr)|(i)]^t at b^t
        double ci_next;               // P[(cr)|(i)]^{t+1} at b^{t+1}
    };

    BeliefWalk(const TransitionModel& m, const Belief& b1, int horizon,
               int convergence_window = kDefaultConvergenceWindow)
        : horizon_(horizon) {
        detail::require_operational(b1, "BeliefWalk");
        if (horizon < 1) throw std::invalid_argument("horizon must be positive");
        if (convergence_window < 1)
            throw std::invalid_argument("convergence window must be positive");
        Belief b = b1;
        int quiet_streak = 0;
        for (int t = 1; t <= horizon; ++t) {
            ObservationProbs obs = observation_probs(m, b);
            steps_.push_back({{b.n(), b.v(), b.o()}, obs.p_dr, obs.p_cr, obs.p_nr,
                              obs.p_cr_given_i, obs.p_cr_given_i});
            if (obs.p_nr <= 0.0) break; // next period surely reports an event
            Belief next = update_belief_nr(m, b);
            steps_.back().ci_next = observation_probs(m, next).p_cr_given_i;
            if (t == horizon) break;
            double change = 0.0;
            for (int s = 0; s < 3; ++s)
                change = std::max(change, std::abs(next.b[s] - b.b[s]));
            quiet_streak = change < kProbTol ? quiet_streak + 1 : 0;
            b = next;
            if (quiet_streak >= convergence_window) {
                converged_ = true;
                break;
            }
        }
    }

    const std::vector<Step>& steps() const { return steps_; }
    bool converged() const { return converged_; }
    int horizon() const { return horizon_; }

    double score_at(int index, const PenaltyParams& pen, Variant variant) const {
        const Step& s = steps_[static_cast<std::size_t>(index)];
        double v0 = 1.0, next = 1.0;
        if (variant == Variant::InspectionOutcome) {
            v0 = 1.0 - pen.c_tilde * s.ci;
            next = 1.0 - pen.c_tilde * s.ci_next;
        }
        double v1 = 1.0 - pen.d * s.p_dr - pen.c * s.p_cr + s.p_nr * next;
        return v1 - v0;
    }

  private:
    std::vector<Step> steps_;
    bool converged_ = false;
    int horizon_;
};

struct PlanDecision {
    std::optional<int> t_star;       // first period where inspecting is optimal; empty = never
    bool forced_at_horizon = false;  // no crossing before T; inspection is mandated there
    std::vector<double> score_trace; // score at t = 1, 2, ... as far as walked
    AssumptionReport assumptions;
    bool assumptions_checked = false;
};

// Scores a prebuilt walk for one penalty setting. Ties inspect: the first
// period with score <= 0 wins.
inline PlanDecision decide(const BeliefWalk& walk, const PenaltyParams& pen, Variant variant) {
    PlanDecision decision;
    const auto& steps = walk.steps();
    for (int i = 0; i < static_cast<int>(steps.size()); ++i) {
        double score = walk.score_at(i, pen, variant);
        decision.score_trace.push_back(score);
        if (score <= 0.0) {
            decision.t_star = i + 1;
            return decision;
        }
    }
    if (!walk.converged()) {
        // Ran into the horizon still preferring to wait; the model forces
        // an inspection there.
        decision.t_star = walk.horizon();
        decision.forced_at_horizon = true;
    }
    return decision;
}

// Walks the filtered trajectory from b1 and returns the first period where
// inspecting is optimal. Assumption violations are reported alongside the
// decision rather than aborting, since the two-plan shortcut is only
// guaranteed under them.
inline PlanDecision optimal_inspection_time(const TransitionModel& m, const PenaltyParams& pen,
                                            const Belief& b1, Variant variant,
                                            int horizon = kDefaultHorizon,
                                            int convergence_window = kDefaultConvergenceWindow) {
    BeliefWalk walk(m, b1, horizon, convergence_window);
    PlanDecision decision = decide(walk, pen, variant);

    // Assumption checks cover the full walked span, not just the prefix up
    // to the crossing; the persistence guarantee needs them throughout.
    int span = std::max<int>(2, static_cast<int>(walk.steps().size()));
    span = std::min(span, horizon);
    BeliefTrajectory traj = belief_trajectory(m, b1, span);
    if (traj.length() >= 2) {
        bool variant_checks = variant == Variant::InspectionOutcome && pen.c_tilde > 0.0;
        decision.assumptions = check_assumptions(traj, pen, variant_checks);
        decision.assumptions_checked = true;
    }
    return decision;
}

// Values V^1(b1, sigma_j) for j = 0..horizon-1, each evaluated through the
// recursive path. Serves as the brute-force oracle for the two-plan walk
// and for the unimodality checks.
inline std::vector<double> plan_value_profile(const TransitionModel& m, const PenaltyParams& pen,
                                              const Belief& b1, Variant variant, int horizon) {
    detail::require_operational(b1, "plan_value_profile");
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    std::vector<double> profile;
    profile.reserve(static_cast<std::size_t>(horizon));
    for (int j = 0; j < horizon; ++j)
        profile.push_back(value_of_plan(m, pen, b1, {1, j}, horizon, variant, Method::Recursive));
    return profile;
}

} // namespace insp

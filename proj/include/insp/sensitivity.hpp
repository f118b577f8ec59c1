#pragma once

#include "insp/planner.hpp"
#include "insp/value.hpp"

#include <map>
#include <span>
#include <vector>

// Sensitivity of the optimal inspection period to the penalty pair (d, c).
//
// Because V^1(b, sigma_j) is affine in d and c with path-sum coefficients,
// "inspect at period t rather than t+1" is a half-plane in penalty space.
// Everything here is built from those half-planes; the planner re-run is
// the oracle the tests compare against.

namespace insp {

// coef_d * x + coef_c * y <= rhs
struct LinearPenaltyConstraint {
    double coef_d;
    double coef_c;
    double rhs;

    double slack(double x, double y) const { return rhs - coef_d * x - coef_c * y; }
    bool satisfied(double x, double y) const { return slack(x, y) >= 0.0; }
    bool strictly_satisfied(double x, double y) const { return slack(x, y) > 0.0; }
};

namespace detail {

// Coefficients of V^1(b1, sigma_{a-1}) - V^1(b1, sigma_{b-1}) >= 0 as a
// half-plane over (d, c), using wait indices a-1 and b-1 (periods a and b).
// delta_f aggregates b1-weighted differences of the path-weight sums.
struct PreferenceCoefficients {
    double coef_d = 0.0;
    double coef_c = 0.0;
    double rhs = 0.0;
};

inline PreferenceCoefficients preference_halfplane(const PathCoefficients& coeff,
                                                   const Belief& b1, int wait_hi,
                                                   int wait_lo) {
    // Encodes V^1(b1, sigma_{wait_lo}) >= V^1(b1, sigma_{wait_hi}).
    PreferenceCoefficients out;
    const TransitionModel& m = coeff.model();
    for (int s = 0; s < 3; ++s) {
        if (b1.b[s] == 0.0) continue;
        for (int t = s; t < 3; ++t) {
            double delta_f =
                b1.b[s] * (coeff.f_sum(wait_lo, s, t) - coeff.f_sum(wait_hi, s, t));
            out.coef_d += delta_f * m.to_failed(t);
            out.coef_c += delta_f * m.to_closed(t);
            out.rhs += delta_f * (1.0 - m.to_failed(t) - m.to_closed(t));
        }
    }
    return out;
}

} // namespace detail

// Minimal penalty increase that moves the optimal inspection one period
// earlier. Any (delta, gamma) satisfying the returned constraint makes
// inspecting at period t_star - 1 weakly preferred to t_star.
inline LinearPenaltyConstraint earlier_shift_inequality(const TransitionModel& m,
                                                        const PenaltyParams& pen,
                                                        const Belief& b1, int t_star) {
    if (t_star < 2) throw std::invalid_argument("no period earlier than t_star = 1");
    detail::require_operational(b1, "earlier_shift_inequality");
    PathCoefficients coeff(m, pen, t_star);
    auto pref = detail::preference_halfplane(coeff, b1, t_star - 1, t_star - 2);
    // Under shifted penalties, k_S drops by delta*p_SD + gamma*p_SC, so the
    // preference splits into a constant part (the current-k weighted sum)
    // and the shift part.
    double rhs = 0.0;
    for (int s = 0; s < 3; ++s) {
        if (b1.b[s] == 0.0) continue;
        for (int t = s; t < 3; ++t) {
            double delta_f =
                b1.b[s] * (coeff.f_sum(t_star - 2, s, t) - coeff.f_sum(t_star - 1, s, t));
            rhs += coeff.k_state(t) * delta_f;
        }
    }
    return {pref.coef_d, pref.coef_c, rhs};
}

struct PenaltyRegion {
    // Inspecting at t_bar is weakly preferred to t_bar + 1.
    LinearPenaltyConstraint no_later;
    // Inspecting at t_bar - 1 is *not* weakly preferred to t_bar, stored in
    // <= form; membership evaluates it strictly so that each boundary
    // belongs to the earlier-inspection region, matching the planner's
    // tie-inspects rule.
    LinearPenaltyConstraint no_earlier;
    int t_bar;

    bool contains(double d, double c) const {
        return no_later.satisfied(d, c) && no_earlier.strictly_satisfied(d, c);
    }
};

// Penalty pairs (d, c) for which the planner's optimal inspection period
// is exactly t_bar, starting from belief b1.
inline PenaltyRegion target_time_region(const TransitionModel& m, const Belief& b1, int t_bar) {
    if (t_bar < 2) throw std::invalid_argument("target period must be at least 2");
    detail::require_operational(b1, "target_time_region");
    PathCoefficients coeff(m, PenaltyParams(0.0, 0.0, 0.0), t_bar + 1);

    auto later = detail::preference_halfplane(coeff, b1, t_bar, t_bar - 1);
    auto earlier = detail::preference_halfplane(coeff, b1, t_bar - 1, t_bar - 2);
    PenaltyRegion region;
    region.t_bar = t_bar;
    region.no_later = {later.coef_d, later.coef_c, later.rhs};
    region.no_earlier = {-earlier.coef_d, -earlier.coef_c, -earlier.rhs};
    return region;
}

struct DRangeInterval {
    int t;
    bool empty = true;
    double d_lo = 0.0;
    double d_hi = 0.0;
};

// Grid sweep of d at fixed c: for each requested period, the maximal grid
// interval of d on which the planner picks that period. Grid points with
// d < c are skipped (the penalty ordering excludes them).
inline std::vector<DRangeInterval> d_range_sweep(const TransitionModel& m, double c_fixed,
                                                 std::span<const int> periods, double d_min,
                                                 double d_max, double d_step,
                                                 int horizon = kDefaultHorizon) {
    if (d_step <= 0.0) throw std::invalid_argument("grid step must be positive");
    BeliefWalk walk(m, Belief::operational(1, 0, 0), horizon);
    std::map<int, std::pair<double, double>> hits;
    long n_steps = static_cast<long>((d_max - d_min) / d_step + 0.5);
    for (long i = 0; i <= n_steps; ++i) {
        double d = d_min + static_cast<double>(i) * d_step;
        if (d < c_fixed) continue;
        PlanDecision dec = decide(walk, PenaltyParams(d, c_fixed, 0.0), Variant::Base);
        if (!dec.t_star || dec.forced_at_horizon) continue;
        auto [it, fresh] = hits.try_emplace(*dec.t_star, d, d);
        if (!fresh) {
            it->second.first = std::min(it->second.first, d);
            it->second.second = std::max(it->second.second, d);
        }
    }
    std::vector<DRangeInterval> out;
    for (int t : periods) {
        DRangeInterval row{t};
        if (auto it = hits.find(t); it != hits.end()) {
            row.empty = false;
            row.d_lo = it->second.first;
            row.d_hi = it->second.second;
        }
        out.push_back(row);
    }
    return out;
}

} // namespace insp

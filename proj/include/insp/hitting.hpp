#pragma once

#include "insp/model.hpp"

#include <cmath>

namespace insp {

struct HittingTimes {
    double mu_n;
    double mu_v;
    double mu_o;
    int t_e; // largest integer strictly below mu_n
};

// Expected first-passage times into {D, C} from each operational state.
// mu_S = 1 + sum_{S': p_SS' > 0} p_SS' * mu_S' is upper triangular over the
// degradation order, so it solves back to front.
inline HittingTimes hitting_times(const TransitionModel& m) {
    std::array<double, 3> mu{};
    for (int s = 2; s >= 0; --s) {
        double self = m.op(s, s);
        if (self >= 1.0)
            throw DivergenceError(std::string("expected absorption time diverges from state ") +
                                  state_name(static_cast<State>(s)));
        double acc = 1.0;
        for (int c = s + 1; c < 3; ++c) {
            if (m.op(s, c) > 0.0) {
                if (!std::isfinite(mu[c]))
                    throw DivergenceError(
                        std::string("expected absorption time diverges from state ") +
                        state_name(static_cast<State>(s)));
                acc += m.op(s, c) * mu[c];
            }
        }
        mu[s] = acc / (1.0 - self);
    }

    HittingTimes h{mu[0], mu[1], mu[2], 0};
    // ceil(mu_n) - 1, with exact integers snapped first so that an integer
    // mu_n maps to mu_n - 1 instead of drifting up on roundoff.
    double nearest = std::round(h.mu_n);
    if (std::abs(h.mu_n - nearest) < 1e-9)
        h.t_e = static_cast<int>(nearest) - 1;
    else
        h.t_e = static_cast<int>(std::ceil(h.mu_n)) - 1;
    return h;
}

} // namespace insp

#pragma once

#include "insp/filter.hpp"
#include "insp/model.hpp"

#include <vector>

// Conditional-plan values.
//
// A plan waits j operational periods and then inspects. Its value is the
// expected reward accumulated: one unit per period the facility operates
// (the inspection period included), minus the penalty if a disruptive
// event preempts the inspection. Two independent evaluators are provided:
//
//   Recursive  - unrolls the one-step Bellman identity along the
//                no-report-filtered belief trajectory; production path.
//   ClosedForm - expands the value over degradation paths, with the path
//                sums folded into per-depth coefficient tables.
//
// The two must agree; the equivalence is exercised by the test suite.

namespace insp {

enum class Variant {
    Base,              // inspection always ends the episode with reward 0
    InspectionOutcome, // inspection may force a closure costing c_tilde
};

enum class Method { Recursive, ClosedForm };

struct ConditionalPlan {
    int start_t; // time index >= 1
    int wait_j;  // inspect after this many operational periods
};

// Expected one-period-ahead reward from operational state S:
// k_S = 1 - (d+1) p_SD - (c+1) p_SC.
inline double k_base(const TransitionModel& m, const PenaltyParams& pen, State s) {
    int i = static_cast<int>(s);
    if (i < 0 || i > 2) throw std::invalid_argument("k_base is defined for operational states");
    return 1.0 - (pen.d + 1.0) * m.to_failed(i) - (pen.c + 1.0) * m.to_closed(i);
}

// Per-depth coefficient tables over operational state pairs (from, to).
//
//   f_sum(i)   - sum of the path weights f over all degradation paths with
//                i entries (i-1 steps); the diagonal carries the +1 growth
//                f^i_SS = p_SS f^{i-1}_SS + 1, off-diagonal entries satisfy
//                f^i_SS' = sum_M p_SM f^{i-1}_MS'. Depth 0 is the zero
//                matrix and depth 1 the identity, which makes the value
//                formulas uniform in the wait length.
//   prod_sum(i) - sum of plain step-probability products over the same
//                paths, i.e. the (i-1)-th power of the operational block.
class PathCoefficients {
  public:
    PathCoefficients(const TransitionModel& m, const PenaltyParams& pen, int depth)
        : model_(m), penalties_(pen) {
        if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
        for (int s = 0; s < 3; ++s)
            k_[s] = k_base(m, pen, static_cast<State>(s));
        f_.push_back({}); // depth 0: all zeros
        prod_.push_back({});
        Table identity{};
        identity[0][0] = identity[1][1] = identity[2][2] = 1.0;
        f_.push_back(identity);
        prod_.push_back(identity);
        extend(depth);
    }

    int depth() const { return static_cast<int>(f_.size()) - 1; }

    void extend(int depth) {
        while (this->depth() < depth) {
            const Table& pf = f_.back();
            const Table& pp = prod_.back();
            Table nf{}, np{};
            for (int s = 0; s < 3; ++s) {
                for (int t = s; t < 3; ++t) {
                    for (int mid = s; mid <= t; ++mid) {
                        nf[s][t] += model_.op(s, mid) * pf[mid][t];
                        np[s][t] += model_.op(s, mid) * pp[mid][t];
                    }
                }
                nf[s][s] += 1.0;
            }
            f_.push_back(nf);
            prod_.push_back(np);
        }
    }

    double f_sum(int depth, int from, int to) const { return f_.at(depth)[from][to]; }
    double prod_sum(int depth, int from, int to) const { return prod_.at(depth)[from][to]; }
    double k(int depth, int from, int to) const { return k_[to] * f_sum(depth, from, to); }
    // Expected mandatory-closure penalty coefficient c~^i_{SS'IC}.
    double c_tilde_path(int depth, int from, int to) const {
        return penalties_.c_tilde * model_.p_ic[to] * prod_sum(depth, from, to);
    }
    double k_state(int s) const { return k_[s]; }

    const TransitionModel& model() const { return model_; }
    const PenaltyParams& penalties() const { return penalties_; }

  private:
    using Table = std::array<std::array<double, 3>, 3>;
    TransitionModel model_;
    PenaltyParams penalties_;
    std::array<double, 3> k_{};
    std::vector<Table> f_;
    std::vector<Table> prod_;
};

inline constexpr int kPathEnumerationCap = 12;

struct EnumeratedPath {
    std::vector<int> states; // i entries, non-decreasing over {N,V,O}
    double f;                // path weight from the f recursion
    double product;          // plain product of the i-1 step probabilities
};

namespace detail {
inline double path_f(const TransitionModel& m, const std::vector<int>& states) {
    // f over a 2-entry path is p+1 on the diagonal, p off it; longer paths
    // gain +1 only while first = second = last.
    std::size_t n = states.size();
    if (n == 2) {
        double p = m.op(states[0], states[1]);
        return states[0] == states[1] ? p + 1.0 : p;
    }
    std::vector<int> tail(states.begin() + 1, states.end());
    double rec = m.op(states[0], states[1]) * path_f(m, tail);
    if (states[0] == states[1] && states[0] == states[n - 1]) rec += 1.0;
    return rec;
}
} // namespace detail

// Literal enumeration of the degradation paths from `from` to `to` with
// `depth` entries. Kept as a transcription self-check for the recurrence
// tables; capped because the recursive f evaluation is exponential-ish in
// bookkeeping, not because the paths are many.
inline std::vector<EnumeratedPath> enumerate_paths(const TransitionModel& m, int depth, int from,
                                                   int to) {
    if (depth < 2) throw std::invalid_argument("path enumeration starts at depth 2");
    if (depth > kPathEnumerationCap)
        throw EnumerationCapError("path enumeration capped at depth 12; use the recursive "
                                  "evaluator or the coefficient tables beyond that");
    if (from > to) return {};
    std::vector<EnumeratedPath> out;
    std::vector<int> path{from};
    // Depth-first over non-decreasing state sequences.
    auto rec = [&](auto&& self, int cur) -> void {
        if (static_cast<int>(path.size()) == depth) {
            if (cur == to) {
                double product = 1.0;
                for (std::size_t i = 0; i + 1 < path.size(); ++i)
                    product *= m.op(path[i], path[i + 1]);
                out.push_back({path, detail::path_f(m, path), product});
            }
            return;
        }
        for (int next = cur; next <= to; ++next) {
            path.push_back(next);
            self(self, next);
            path.pop_back();
        }
    };
    rec(rec, from);
    return out;
}

namespace detail {

inline double terminal_value(const Belief& b, const PenaltyParams& pen) {
    switch (b.category()) {
    case Belief::Category::Failed: return -pen.d;
    case Belief::Category::Closed: return -pen.c;
    case Belief::Category::Inspected: return 0.0;
    default: throw CategoryError("operational belief is not terminal");
    }
}

inline double inspect_now_value(const TransitionModel& m, const PenaltyParams& pen,
                                const Belief& b, Variant variant) {
    if (variant == Variant::Base) return 1.0;
    double ci = 0.0;
    for (int s = 0; s < 3; ++s) ci += m.p_ic[s] * b.b[s];
    return 1.0 - pen.c_tilde * ci;
}

inline double value_recursive(const TransitionModel& m, const PenaltyParams& pen, Belief b,
                              int wait_j, Variant variant) {
    double discount = 1.0; // product of no-report probabilities so far
    double acc = 0.0;
    for (int step = 0; step < wait_j; ++step) {
        ObservationProbs obs = observation_probs(m, b);
        acc += discount * (1.0 - pen.d * obs.p_dr - pen.c * obs.p_cr);
        discount *= obs.p_nr;
        if (discount == 0.0) return acc; // continuation is unreachable
        b = update_belief_nr(m, b);
    }
    return acc + discount * inspect_now_value(m, pen, b, variant);
}

inline double value_closed_form(const PathCoefficients& coeff, const Belief& b, int wait_j,
                                Variant variant) {
    const TransitionModel& m = coeff.model();
    double v = 1.0;
    for (int s = 0; s < 3; ++s) {
        if (b.b[s] == 0.0) continue;
        double weight = 0.0;
        for (int t = s; t < 3; ++t) {
            weight += coeff.k(wait_j, s, t);
            if (variant == Variant::InspectionOutcome)
                weight -= coeff.penalties().c_tilde * m.p_ic[t] * coeff.prod_sum(wait_j + 1, s, t);
        }
        v += b.b[s] * weight;
    }
    return v;
}

} // namespace detail

// Value of waiting plan.wait_j operational periods and then inspecting,
// evaluated from `belief` with horizon T governing the plan domain.
// Terminal beliefs take their fixed values regardless of the plan.
inline double value_of_plan(const TransitionModel& m, const PenaltyParams& pen,
                            const Belief& belief, const ConditionalPlan& plan, int horizon,
                            Variant variant = Variant::Base, Method method = Method::Recursive) {
    if (plan.start_t < 1 || plan.start_t > horizon)
        throw PlanDomainError("plan start time outside [1, T]");
    if (plan.wait_j < 0 || plan.wait_j > horizon - plan.start_t)
        throw PlanDomainError("plan waits past the horizon");
    if (!belief.is_operational()) return detail::terminal_value(belief, pen);
    if (plan.wait_j == 0) return detail::inspect_now_value(m, pen, belief, variant);
    if (method == Method::Recursive)
        return detail::value_recursive(m, pen, belief, plan.wait_j, variant);
    PathCoefficients coeff(m, pen, plan.wait_j + 1);
    return detail::value_closed_form(coeff, belief, plan.wait_j, variant);
}

// Closed-form evaluation against a prebuilt coefficient table; avoids
// rebuilding the tables when many plans share a model.
inline double value_of_plan(const PathCoefficients& coeff, const Belief& belief, int wait_j,
                            Variant variant = Variant::Base) {
    if (wait_j < 0 || wait_j + 1 > coeff.depth())
        throw PlanDomainError("coefficient table too shallow for requested wait");
    if (!belief.is_operational()) return detail::terminal_value(belief, coeff.penalties());
    if (wait_j == 0)
        return detail::inspect_now_value(coeff.model(), coeff.penalties(), belief, variant);
    return detail::value_closed_form(coeff, belief, wait_j, variant);
}

} // namespace insp

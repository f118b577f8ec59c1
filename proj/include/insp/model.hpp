#pragma once

#include "insp/errors.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <vector>

// Core domain types for the facility degradation chain.
//
// The chain has three operational states (ordered by degradation level) and
// three absorbing states:
//
//   N  - no action indicated          (best operational state)
//   V  - voluntary action indicated
//   O  - official action indicated    (worst operational state)
//   D  - manufacturing failure occurred
//   C  - closed for non-mandatory maintenance
//   I  - inspected (episode over)
//
// Under the no-inspect action the operational block is upper triangular:
// quality never improves without an inspection. Inspecting moves any state
// to I deterministically; in the inspection-outcome variant it may instead
// trigger a mandatory closure with probability p_ic[state].

namespace insp {

enum class State : int { N = 0, V = 1, O = 2, D = 3, C = 4, I = 5 };

inline constexpr int kNumStates = 6;
inline constexpr int kNumOperational = 3;
inline constexpr double kProbTol = 1e-12;

inline const char* state_name(State s) {
    static constexpr const char* names[] = {"N", "V", "O", "D", "C", "I"};
    return names[static_cast<int>(s)];
}

struct ValidationIssue {
    std::string where; // offending row/entry, e.g. "row V" or "p_ic[O]"
    std::string what;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const {
        std::ostringstream os;
        for (const auto& i : issues) os << i.where << ": " << i.what << "\n";
        return os.str();
    }
};

// Action-dependent transition structure. Only the operational rows are
// stored; rows D, C, I are implicit identity rows.
struct TransitionModel {
    // p[from][to]: from in {N,V,O}, to in {N,V,O,D,C}. Entries below the
    // operational diagonal are expected to be exactly zero.
    std::array<std::array<double, 5>, 3> p{};
    // Probability that inspecting in state {N,V,O} forces a closure.
    std::array<double, 3> p_ic{};

    double op(int from, int to) const { return p[from][to]; }
    double to_failed(int from) const { return p[from][3]; }
    double to_closed(int from) const { return p[from][4]; }

    // Probability of surviving one no-inspect step from `from` (i.e. of
    // landing in some operational state).
    double stay_operational(int from) const {
        return p[from][0] + p[from][1] + p[from][2];
    }

    // Builds a model from the 12 structurally nonzero no-inspect entries,
    // row-major with below-diagonal entries omitted:
    //   N: p_NN p_NV p_NO p_ND p_NC
    //   V: p_VV p_VO p_VD p_VC
    //   O: p_OO p_OD p_OC
    static TransitionModel from_rows(std::span<const double, 12> entries,
                                     std::span<const double, 3> inspection_closure) {
        TransitionModel m;
        m.p[0] = {entries[0], entries[1], entries[2], entries[3], entries[4]};
        m.p[1] = {0.0, entries[5], entries[6], entries[7], entries[8]};
        m.p[2] = {0.0, 0.0, entries[9], entries[10], entries[11]};
        m.p_ic = {inspection_closure[0], inspection_closure[1], inspection_closure[2]};
        return m;
    }

    // Full 6x6 no-inspect matrix, absorbing rows included.
    std::array<std::array<double, 6>, 6> full_matrix() const {
        std::array<std::array<double, 6>, 6> f{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 5; ++c) f[r][c] = p[r][c];
        f[3][3] = f[4][4] = f[5][5] = 1.0;
        return f;
    }
};

namespace detail {
inline std::string row_label(int s) {
    return std::string("row ") + state_name(static_cast<State>(s));
}
} // namespace detail

// Checks the TransitionModel invariants and reports every violation.
// Diagnostics are the return value; nothing throws.
inline ValidationReport validate_model(const TransitionModel& m) {
    ValidationReport report;
    static constexpr const char* col_names[] = {"N", "V", "O", "D", "C"};

    for (int r = 0; r < 3; ++r) {
        double sum = 0.0;
        for (int c = 0; c < 5; ++c) {
            double v = m.p[r][c];
            if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) {
                report.issues.push_back({detail::row_label(r) + " entry " + col_names[c],
                                         "probability outside [0, 1]"});
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            std::ostringstream os;
            os << "sum over {N,V,O,D,C} is " << sum << ", not 1";
            report.issues.push_back({detail::row_label(r), os.str()});
        }
        // No quality improvement without inspection.
        for (int c = 0; c < r; ++c) {
            if (m.p[r][c] != 0.0) {
                report.issues.push_back({detail::row_label(r) + " entry " + col_names[c],
                                         "below-diagonal operational entry must be exactly 0"});
            }
        }
    }

    for (int s = 0; s < 3; ++s) {
        if (!(m.p_ic[s] >= 0.0 && m.p_ic[s] <= 1.0)) {
            report.issues.push_back({std::string("p_ic[") + state_name(static_cast<State>(s)) + "]",
                                     "probability outside [0, 1]"});
        }
    }

    // Absorption must be certain from every operational state; otherwise
    // hitting times diverge. Back-to-front over the degradation order: a
    // state absorbs iff it can leave its self-loop and every operational
    // successor absorbs.
    std::array<bool, 3> absorbs{};
    for (int s = 2; s >= 0; --s) {
        bool ok = m.p[s][s] < 1.0;
        for (int c = s + 1; c < 3 && ok; ++c)
            if (m.p[s][c] > 0.0 && !absorbs[c]) ok = false;
        absorbs[s] = ok;
        if (!ok) {
            report.issues.push_back({detail::row_label(s),
                                     std::string("no absorbing state in {D,C} reachable from ") +
                                         state_name(static_cast<State>(s))});
        }
    }
    return report;
}

// Reward r = 1 per operational period is fixed; penalties are expressed in
// reward units. Ordering 0 <= c_tilde <= c <= d is enforced at construction.
struct PenaltyParams {
    double d;       // manufacturing-failure penalty
    double c;       // non-mandatory-closure penalty
    double c_tilde; // mandatory-closure-after-inspection penalty

    PenaltyParams(double d, double c, double c_tilde = 0.0) : d(d), c(c), c_tilde(c_tilde) {
        if (!(c_tilde >= 0.0 && c_tilde <= c && c <= d)) {
            std::ostringstream os;
            os << "penalties must satisfy 0 <= c_tilde <= c <= d, got c_tilde=" << c_tilde
               << " c=" << c << " d=" << d;
            throw std::invalid_argument(os.str());
        }
    }

    // Ratio factors d/c_tilde and c/c_tilde; defined only for c_tilde > 0.
    double alpha_d() const {
        require_c_tilde();
        return d / c_tilde;
    }
    double alpha_c() const {
        require_c_tilde();
        return c / c_tilde;
    }

  private:
    void require_c_tilde() const {
        if (c_tilde <= 0.0)
            throw std::domain_error("alpha factors are undefined for c_tilde = 0");
    }
};

// Probability vector over the six states. Exactly one category holds:
// all mass on {N,V,O}, or all mass on one of D, C, I.
struct Belief {
    enum class Category { Operational, Failed, Closed, Inspected };

    std::array<double, 6> b{};

    static Belief operational(double n, double v, double o) {
        return Belief({n, v, o, 0.0, 0.0, 0.0});
    }
    static Belief failed() { return Belief({0, 0, 0, 1.0, 0, 0}); }
    static Belief closed() { return Belief({0, 0, 0, 0, 1.0, 0}); }
    static Belief inspected() { return Belief({0, 0, 0, 0, 0, 1.0}); }

    explicit Belief(const std::array<double, 6>& components) : b(components) {
        double sum = 0.0;
        for (double x : b) {
            if (!(x >= 0.0) || !std::isfinite(x))
                throw std::invalid_argument("belief components must be nonnegative and finite");
            sum += x;
        }
        if (std::abs(sum - 1.0) > kProbTol)
            throw std::invalid_argument("belief components must sum to 1");
        double operational_mass = b[0] + b[1] + b[2];
        int terminal_support = (b[3] > 0.0) + (b[4] > 0.0) + (b[5] > 0.0);
        if (operational_mass > 0.0 && terminal_support > 0)
            throw CategoryError("belief mixes operational and terminal mass");
        if (terminal_support > 1)
            throw CategoryError("belief spreads mass over several terminal states");
        if (operational_mass > 0.0) category_ = Category::Operational;
        else if (b[3] > 0.0) category_ = Category::Failed;
        else if (b[4] > 0.0) category_ = Category::Closed;
        else category_ = Category::Inspected;
    }

    Category category() const { return category_; }
    bool is_operational() const { return category_ == Category::Operational; }

    double n() const { return b[0]; }
    double v() const { return b[1]; }
    double o() const { return b[2]; }

  private:
    Category category_;
};

// Believed one-step-ahead observation probabilities, plus the probability
// that inspecting the *current* belief triggers a mandatory closure.
struct ObservationProbs {
    double p_dr;         // manufacturing-failure report next period
    double p_cr;         // closure report next period
    double p_nr;         // no report next period
    double p_cr_given_i; // mandatory closure if inspected now
};

} // namespace insp

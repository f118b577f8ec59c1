#include "insp/simulate.hpp"
#include "insp/hitting.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace insp;

namespace {
const TransitionModel kP1 = testsup::p1_model();

// Degradation is deterministic: N -> V -> D every run.
TransitionModel forced_path_model() {
    TransitionModel m;
    m.p[0] = {0, 1, 0, 0, 0};
    m.p[1] = {0, 0, 0, 1, 0};
    m.p[2] = {0, 0, 0, 1, 0};
    m.p_ic = {0, 0.3, 1.0};
    return m;
}
} // namespace

TEST_CASE("deterministic degradation fails at period three") {
    RunStream rng(1, 0);
    Trajectory traj = sample_trajectory(forced_path_model(), rng);
    CHECK(traj.t_f == 3);
    CHECK(traj.event == State::D);
    REQUIRE(traj.states.size() == 3);
    CHECK(traj.states[0] == 0);
    CHECK(traj.states[1] == 1);
    CHECK(traj.states[2] == 3);
    CHECK(traj.ic_draws.size() == 2); // one reserved draw per operational period
}

TEST_CASE("baseline trajectories start at N and need two transitions to fail") {
    for (long run = 0; run < 2000; ++run) {
        RunStream rng(5, static_cast<std::uint64_t>(run));
        Trajectory traj = sample_trajectory(kP1, rng);
        REQUIRE(traj.t_f >= 3);
        REQUIRE(traj.states[0] == 0);
        for (long t = 0; t + 1 < traj.t_f; ++t) REQUIRE(traj.states[t] <= 2);
    }
}

TEST_CASE("step cap raises instead of spinning") {
    RunStream rng(2, 0);
    CHECK_THROWS_AS(sample_trajectory(kP1, rng, 3), StepCapError);
}

TEST_CASE("end-time statistics match the baseline chain") {
    SimConfig cfg;
    cfg.n_runs = 100000;
    cfg.seed = 4242;
    cfg.rules = {};
    SimReport rep = run_experiment(cfg, kP1, testsup::p1_penalties(14));
    CHECK(rep.end_time.min == 3);
    CHECK(rep.end_time.median == doctest::Approx(18.0));
    CHECK(std::abs(rep.end_time.mean - 20.71) < 0.3);
}

TEST_CASE("the early optimal rule catches most events at the largest penalty") {
    SimConfig cfg;
    cfg.n_runs = 100000;
    cfg.seed = 20240601;
    cfg.rules = {{"t_V", 8}};
    SimReport rep = run_experiment(cfg, kP1, testsup::p1_penalties(30));
    CHECK(std::abs(*rep.rules[0].caught_fraction - 0.87657) < 0.012);
}

TEST_CASE("missed inspection pays the penalty on the event") {
    Trajectory traj;
    traj.states = {0, 1, 3};
    traj.t_f = 3;
    traj.event = State::D;
    traj.ic_draws = {0.5, 0.5};
    RuleOutcome out = evaluate_rule(traj, 24, testsup::p1_penalties(14), false, kP1);
    CHECK_FALSE(out.caught);
    CHECK(out.value == doctest::Approx(-12.0)); // 2 operating periods minus d
}

TEST_CASE("a caught inspection earns one reward per period inclusive") {
    Trajectory traj;
    traj.states = {0, 0, 0, 1, 1, 1, 2, 2, 2, 4};
    traj.t_f = 10;
    traj.event = State::C;
    traj.ic_draws.assign(9, 0.99);
    RuleOutcome out = evaluate_rule(traj, 9, testsup::p1_penalties(14), false, kP1);
    CHECK(out.caught);
    CHECK(out.value == doctest::Approx(9.0));
}

TEST_CASE("mandatory closure at the inspection costs c_tilde") {
    Trajectory traj;
    traj.states = {0, 0, 0, 1, 1, 1, 2, 2, 2, 3};
    traj.t_f = 10;
    traj.event = State::D;
    traj.ic_draws.assign(9, 0.5); // p_OIC = 1, so any draw closes
    RuleOutcome out = evaluate_rule(traj, 9, testsup::p1_penalties(14), true, kP1);
    CHECK(out.caught);
    CHECK(out.value == doctest::Approx(8.0));
}

TEST_CASE("never inspecting is never caught") {
    Trajectory traj;
    traj.states = {0, 1, 3};
    traj.t_f = 3;
    traj.event = State::D;
    RuleOutcome out = evaluate_rule(traj, std::nullopt, testsup::p1_penalties(14), false, kP1);
    CHECK_FALSE(out.caught);
    CHECK(out.value == doctest::Approx(-12.0));
}

TEST_CASE("zero-variance perturbation returns the base matrix exactly") {
    RunStream rng(3, 0);
    TransitionModel p = perturb_matrix(kP1, 0.0, rng);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 5; ++c) REQUIRE(p.p[r][c] == kP1.p[r][c]);
}

TEST_CASE("perturbed matrices always validate") {
    long renorm = 0;
    for (long i = 0; i < 2000; ++i) {
        RunStream rng(911, static_cast<std::uint64_t>(i));
        for (double s : {0.01, 0.02, 0.2}) {
            TransitionModel p = perturb_matrix(kP1, s, rng, &renorm);
            REQUIRE(validate_model(p).ok());
            for (int r = 0; r < 3; ++r) REQUIRE(p.p[r][r] <= 0.995);
        }
    }
    CHECK(renorm == 0); // sequential clamping never leaves a negative residual
}

TEST_CASE("perturbation preserves structural zeros") {
    RunStream rng(13, 7);
    TransitionModel p = perturb_matrix(kP1, 0.02, rng);
    CHECK(p.p[0][2] == 0.0);
    CHECK(p.p[0][3] == 0.0);
    CHECK(p.p[0][4] == 0.0);
    CHECK(p.p[1][0] == 0.0);
    CHECK(p.p[2][0] == 0.0);
    CHECK(p.p[2][1] == 0.0);
    CHECK(p.p_ic == kP1.p_ic);
}

TEST_CASE("single-run experiment on the forced path") {
    SimConfig cfg;
    cfg.n_runs = 1;
    cfg.seed = 0;
    cfg.rules = {{"one", 1}};
    SimReport rep = run_experiment(cfg, forced_path_model(), testsup::p1_penalties(14));
    REQUIRE(rep.rules.size() == 1);
    CHECK(*rep.rules[0].caught_fraction == doctest::Approx(1.0));
    CHECK(rep.rules[0].mean_value_no_ic == doctest::Approx(1.0));
}

TEST_CASE("identical seeds give bit-identical reports") {
    SimConfig cfg;
    cfg.n_runs = 5000;
    cfg.seed = 31337;
    cfg.perturbation_sd = 0.01;
    cfg.rules = {{"t_E", 19}, {"f24", 24}, {"never", std::nullopt}};
    PenaltyParams pen = testsup::p1_penalties(18);
    SimReport a = run_experiment(cfg, kP1, pen);
    SimReport b = run_experiment(cfg, kP1, pen);
    REQUIRE(a.rules.size() == b.rules.size());
    for (std::size_t i = 0; i < a.rules.size(); ++i) {
        REQUIRE(a.rules[i].mean_value_no_ic == b.rules[i].mean_value_no_ic);
        REQUIRE(a.rules[i].mean_value_ic == b.rules[i].mean_value_ic);
        if (a.rules[i].caught_fraction)
            REQUIRE(*a.rules[i].caught_fraction == *b.rules[i].caught_fraction);
    }
    REQUIRE(a.end_time.mean == b.end_time.mean);
    REQUIRE(a.end_time.stddev == b.end_time.stddev);
    REQUIRE(a.end_time.max == b.end_time.max);
}

TEST_CASE("per-run invariants: dominance, survival, and closure ordering") {
    PenaltyParams pen = testsup::p1_penalties(22);
    long caught_19 = 0, survived_19 = 0;
    const long n = 20000;
    for (long run = 0; run < n; ++run) {
        RunStream rng(60, static_cast<std::uint64_t>(run));
        Trajectory traj = sample_trajectory(kP1, rng);

        // A rule later than the event gives the identical missed value no
        // matter how late.
        RuleOutcome late1 = evaluate_rule(traj, static_cast<int>(traj.t_f), pen, false, kP1);
        RuleOutcome late2 = evaluate_rule(traj, static_cast<int>(traj.t_f) + 57, pen, false, kP1);
        RuleOutcome never = evaluate_rule(traj, std::nullopt, pen, false, kP1);
        REQUIRE(late1.value == late2.value);
        REQUIRE(late1.value == never.value);
        REQUIRE_FALSE(late1.caught);

        RuleOutcome no_ic = evaluate_rule(traj, 19, pen, false, kP1);
        RuleOutcome ic = evaluate_rule(traj, 19, pen, true, kP1);
        REQUIRE(ic.value <= no_ic.value + 1e-12);
        if (!no_ic.caught) REQUIRE(ic.value == no_ic.value);

        if (no_ic.caught) ++caught_19;
        if (traj.t_f > 19) ++survived_19;
    }
    // Caught-at-19 is exactly the survival count past period 19.
    CHECK(caught_19 == survived_19);
}

TEST_CASE("batch perturbation mode draws one matrix for all runs") {
    SimConfig cfg;
    cfg.n_runs = 400;
    cfg.seed = 7;
    cfg.perturbation_sd = 0.01;
    cfg.redraw_per_run = false;
    cfg.rules = {{"t_E", 19}};
    SimReport rep = run_experiment(cfg, kP1, testsup::p1_penalties(14));
    CHECK(rep.n_effective == 400);
}

TEST_CASE("rule times beyond the step cap are rejected") {
    SimConfig cfg;
    cfg.n_runs = 10;
    cfg.max_steps = 50;
    cfg.rules = {{"f60", 60}};
    CHECK_THROWS_AS(run_experiment(cfg, kP1, testsup::p1_penalties(14)), std::invalid_argument);
}

#include "insp/config.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace insp;

namespace {
const char* kGoodConfig = R"(# baseline run
[model]
p = 0.9125 0.0875 0 0 0  0.825 0.1125 0.045 0.0175  0.75 0.175 0.075
p_ic = 0 0.3 1

[penalties]
d = 14
c = 5
c_tilde = 1

[simulation]
runs = 1000
seed = 99
)";
}

TEST_CASE("a full config round-trips through parse and validation") {
    RunConfig cfg = load_config(kGoodConfig);
    REQUIRE(cfg.model.has_value());
    CHECK(validate_model(*cfg.model).ok());
    CHECK(cfg.model->p[0][0] == 0.9125);
    CHECK(cfg.model->p[2][2] == 0.75);
    CHECK(cfg.model->p_ic[1] == 0.3);
    REQUIRE(cfg.penalties.has_value());
    CHECK(cfg.penalties->d == 14);
    CHECK(cfg.penalties->c_tilde == 1);
    CHECK(cfg.simulation.runs == 1000);
    CHECK(cfg.simulation.seed == 99);
    // Contract defaults fill the rest.
    CHECK(cfg.planner.horizon == 500);
    CHECK(cfg.planner.convergence_window == 50);
    CHECK(cfg.simulation.max_steps == 100000);
    CHECK(cfg.sensitivity.d_step == 0.01);
}

TEST_CASE("omitted c_tilde defaults to zero") {
    std::string text(kGoodConfig);
    text.erase(text.find("c_tilde = 1"), 11);
    RunConfig cfg = load_config(text);
    REQUIRE(cfg.penalties.has_value());
    CHECK(cfg.penalties->c_tilde == 0.0);
}

TEST_CASE("penalty ordering violations are rejected at load") {
    std::string text(kGoodConfig);
    text.replace(text.find("d = 14"), 6, "d = 2 ");
    try {
        load_config(text);
        FAIL("expected a config error");
    } catch (const ConfigError& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("penalties") != std::string::npos);
        CHECK(msg.find("c_tilde <= c <= d") != std::string::npos);
    }
}

TEST_CASE("parse errors carry the line number") {
    try {
        load_config("[model]\np 0.5\n");
        FAIL("expected a config error");
    } catch (const ConfigError& ex) {
        CHECK(ex.line == 2);
    }
}

TEST_CASE("entries before any section are rejected") {
    CHECK_THROWS_AS(load_config("d = 14\n"), ConfigError);
}

TEST_CASE("unknown keys are reported with their path") {
    try {
        load_config("[penalties]\nd = 14\nc = 5\nbogus = 1\n");
        FAIL("expected a config error");
    } catch (const ConfigError& ex) {
        CHECK(std::string(ex.what()).find("penalties.bogus") != std::string::npos);
    }
}

TEST_CASE("wrong probability counts are reported with their path") {
    try {
        load_config("[model]\np = 0.5 0.5\np_ic = 0 0 0\n");
        FAIL("expected a config error");
    } catch (const ConfigError& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("model.p") != std::string::npos);
        CHECK(msg.find("12") != std::string::npos);
    }
}

TEST_CASE("non-numeric tokens are reported") {
    CHECK_THROWS_AS(load_config("[penalties]\nd = lots\nc = 5\n"), ConfigError);
}

TEST_CASE("serialization reloads to the same effective configuration") {
    RunConfig cfg = load_config(kGoodConfig);
    std::string canon = serialize_config(cfg);
    RunConfig again = load_config(canon);
    CHECK(serialize_config(again) == canon);
    CHECK(again.model->p == cfg.model->p);
    CHECK(again.penalties->d == cfg.penalties->d);
    CHECK(again.simulation.seed == cfg.simulation.seed);
}

#include "ucs/errors.hpp"
#include "ucs/oracle.hpp"
#include "ucs/session.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdlib>

using namespace ucs;

TEST_CASE("dyadic grids") {
    // Compositions of 4 into 3 nonnegative parts: C(6,2) = 15.
    CHECK(oracle::dyadic_numerators(3, 2).size() == 15);
    CHECK(oracle::dyadic_pmfs(2, 3).size() == 9);
    CHECK(oracle::close_numerators({2, 2}, {1, 3}, 1));
    CHECK_FALSE(oracle::close_numerators({2, 2}, {1, 3}, 0));
    CHECK_FALSE(oracle::close_numerators({4, 0}, {3, 1}, 5));
}

TEST_CASE("verification reports") {
    oracle::VerificationConfig c;
    c.scheme = "simple";
    c.n = 4;
    c.delta = 1;
    c.bits = 3;
    const auto r = oracle::verify_scheme(c);
    CHECK(r.pass);
    CHECK(r.failure_count == 0);
    CHECK(r.failures.empty());
    CHECK(r.pairs > 0);
    CHECK(r.trials >= r.pairs);
    CHECK(r.bottoms == 0);
    CHECK(r.rows.size() == r.distributions);
    CHECK(r.p50_length <= r.p90_length);
    CHECK(r.p90_length <= r.max_length);

    const auto j = nlohmann::json::parse(oracle::report_to_json(r));
    CHECK(j["pass"] == true);
    const auto csv = oracle::report_to_csv(r);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size() + 1));

    oracle::VerificationConfig low;
    low.scheme = "low";
    low.n = 3;
    low.delta = 1;
    low.bits = 3;
    const auto lr = oracle::verify_scheme(low);
    CHECK(lr.pass);
    CHECK(lr.bottoms == 0);
    CHECK(lr.max_bottom_probability == 0.0);
}

TEST_CASE("fault injection is reported, not counted as failure") {
    oracle::VerificationConfig c;
    c.scheme = "simple";
    c.n = 3;
    c.delta = 1;
    c.bits = 3;
    c.fault_every = 3;
    const auto r = oracle::verify_scheme(c);
    CHECK(r.faults_injected > 0);
    CHECK(r.faults_injected == r.faults_detected + r.faults_undetected);
    CHECK(r.faults_detected > 0);
    CHECK(r.failure_count == 0);
    CHECK(r.pass);

    c.max_trials = 10;
    CHECK_THROWS_AS(oracle::verify_scheme(c), Error);
}

TEST_CASE("chain collision scan") {
    const auto r = oracle::brute_chain_collision_scan(5, 2, 1);
    CHECK(r.collisions == 0);
    CHECK(r.related_pairs > 0);
    CHECK(r.size_bound_checked);
    CHECK(r.size_bound_violations == 0);
}

TEST_CASE("session config") {
    SessionConfig s;
    merge_session_json(s, R"({"delta": 2, "epsilon": "1/8", "seed": "0x10", "scheme": "low"})");
    CHECK(s.delta == 2);
    CHECK(s.epsilon == Rational(1, 8));
    CHECK(s.seed == 16);
    CHECK(s.scheme == "low");
    CHECK(s.index_budget == kDefaultIndexBudget);
    CHECK(s.codec_options().delta == 2);
    const auto echo = nlohmann::json::parse(s.to_json());
    CHECK(echo["epsilon"] == "1/8");
    CHECK(echo["seed"] == "0x10");
    CHECK_THROWS_AS(merge_session_json(s, "[1]"), Error);
    CHECK_THROWS_AS(merge_session_json(s, R"({"delta": "x"})"), Error);
    CHECK(parse_seed("12") == 12);
    CHECK_THROWS_AS(parse_seed("12z"), Error);

    ::setenv("UCS_BUDGET", "77", 1);
    CHECK(apply_budget_env(s));
    CHECK(s.index_budget == 77);
    CHECK(s.solver_budget == 77);
    ::setenv("UCS_BUDGET", "0", 1);
    CHECK_THROWS_AS(apply_budget_env(s), Error);
    ::unsetenv("UCS_BUDGET");
    CHECK_FALSE(apply_budget_env(s));
}

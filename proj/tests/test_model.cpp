#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "aoiwear/model.hpp"
#include "test_configs.hpp"

using namespace aoiwear;

TEST_CASE("success_prob linear endpoints and interpolation") {
    const ModelConfig cfg = testcfg::reference_sparse();
    CHECK(success_prob(cfg, 1) == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(success_prob(cfg, 10) == doctest::Approx(0.001).epsilon(1e-12));
    // evenly spaced: d=2 sits one step of (0.95-0.001)/9 below the top
    CHECK(success_prob(cfg, 2) == doctest::Approx(0.95 - (0.95 - 0.001) / 9.0).epsilon(1e-12));
}

TEST_CASE("success_prob exponential profile") {
    const ModelConfig cfg = testcfg::exponential_profile(0.1);
    CHECK(success_prob(cfg, 1) == doctest::Approx(std::exp(-0.7618 + 0.7105)).epsilon(1e-12));
    CHECK(success_prob(cfg, 1) == doctest::Approx(0.95).epsilon(1e-3));
    CHECK(success_prob(cfg, 10) == doctest::Approx(0.001).epsilon(2e-2));
}

TEST_CASE("success_prob rejects out-of-range levels") {
    const ModelConfig cfg = testcfg::reference_sparse();
    CHECK_THROWS_AS(success_prob(cfg, 0), std::domain_error);
    CHECK_THROWS_AS(success_prob(cfg, 11), std::domain_error);
}

TEST_CASE("success_prob is nonincreasing and below 1 at d=1") {
    for (const ModelConfig& cfg :
         {testcfg::reference_sparse(), testcfg::exponential_profile(0.5), testcfg::tiny()}) {
        CHECK(success_prob(cfg, 1) < 1.0);
        for (int d = 2; d <= cfg.max_deterioration; ++d)
            CHECK(success_prob(cfg, d) <= success_prob(cfg, d - 1) + 1e-15);
    }
}

TEST_CASE("feasible actions depend on the bucket") {
    const ModelConfig cfg = testcfg::reference_sparse();
    CHECK(feasible_actions(cfg, {3, 5, 2}) ==
          std::vector<Action>{Action::Wait, Action::Transmit});
    CHECK(feasible_actions(cfg, {10, 10, 8}) == std::vector<Action>{Action::Renew});
    CHECK(feasible_actions(cfg, {4, 7, 8}) ==
          std::vector<Action>{Action::Wait, Action::Transmit, Action::Renew});
}

TEST_CASE("only the mandatory state has a single feasible action") {
    const ModelConfig cfg = testcfg::tiny();
    const StateIndex idx(cfg);
    for (int i = 0; i < idx.size(); ++i) {
        const State s = idx.state(i);
        const auto acts = feasible_actions(cfg, s);
        if (s == State{cfg.max_deterioration, cfg.max_aoi, cfg.bucket_capacity}) {
            CHECK(acts == std::vector<Action>{Action::Renew});
        } else {
            CHECK(acts.size() >= 2);
        }
    }
}

TEST_CASE("deterioration update") {
    ModelConfig cfg = testcfg::reference_sparse();
    CHECK(next_deterioration(cfg, 9, Action::Transmit) == 10);
    CHECK(next_deterioration(cfg, 10, Action::Wait) == 10);
    CHECK(next_deterioration(cfg, 7, Action::Renew) == 1);
    CHECK(next_deterioration(cfg, 3, Action::Wait) == 4);
    CHECK(next_deterioration(cfg, 3, Action::Transmit) == 5);
}

TEST_CASE("transmit transitions cross success with token arrival") {
    const ModelConfig cfg = testcfg::reference_sparse();
    const double p = success_prob(cfg, 3);
    const auto dist = transitions(cfg, {3, 4, 2}, Action::Transmit);
    REQUIRE(dist.size() == 4);
    auto prob_of = [&](const State& s) {
        for (const auto& e : dist)
            if (e.to == s) return e.prob;
        return -1.0;
    };
    CHECK(prob_of({5, 1, 3}) == doctest::Approx(p * 0.1).epsilon(1e-12));
    CHECK(prob_of({5, 1, 2}) == doctest::Approx(p * 0.9).epsilon(1e-12));
    CHECK(prob_of({5, 5, 3}) == doctest::Approx((1 - p) * 0.1).epsilon(1e-12));
    CHECK(prob_of({5, 5, 2}) == doctest::Approx((1 - p) * 0.9).epsilon(1e-12));
}

TEST_CASE("renewal is deterministic to (1,1,0)") {
    const ModelConfig cfg = testcfg::reference_sparse();
    for (const State s : {State{4, 7, 8}, State{10, 10, 8}, State{1, 3, 8}}) {
        const auto dist = transitions(cfg, s, Action::Renew);
        REQUIRE(dist.size() == 1);
        CHECK(dist[0].to == State{1, 1, 0});
        CHECK(dist[0].prob == 1.0);
    }
}

TEST_CASE("fully saturated wait only moves the token count") {
    const ModelConfig cfg = testcfg::reference_sparse();
    const auto dist = transitions(cfg, {10, 10, 7}, Action::Wait);
    REQUIRE(dist.size() == 2);
    auto prob_of = [&](const State& s) {
        for (const auto& e : dist)
            if (e.to == s) return e.prob;
        return -1.0;
    };
    CHECK(prob_of({10, 10, 8}) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(prob_of({10, 10, 7}) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("saturated branches merge and degenerate probabilities drop") {
    ModelConfig cfg = testcfg::reference_sparse();
    cfg.token_prob = 0.0;
    // no token arrival branch left
    auto dist = transitions(cfg, {3, 4, 2}, Action::Transmit);
    CHECK(dist.size() == 2);
    // at b = B the arrival and no-arrival branches coincide
    cfg.token_prob = 0.4;
    dist = transitions(cfg, {3, 4, 8}, Action::Transmit);
    CHECK(dist.size() == 2);
    double total = 0.0;
    for (const auto& e : dist) total += e.prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("infeasible action is rejected") {
    const ModelConfig cfg = testcfg::reference_sparse();
    CHECK_THROWS_AS(transitions(cfg, {3, 4, 2}, Action::Renew), std::invalid_argument);
    CHECK_THROWS_AS(transitions(cfg, {10, 10, 8}, Action::Wait), std::invalid_argument);
}

TEST_CASE("stage cost") {
    ModelConfig cfg = testcfg::reference_sparse();
    CHECK(stage_cost(cfg, {4, 5, 2}, Action::Wait) == 5.0);
    CHECK(stage_cost(cfg, {4, 5, 2}, Action::Transmit) == 6.0);
    // T_A=4, Delta=10, capped: 8 + (9+10+10+10)
    CHECK(stage_cost(cfg, {4, 8, 8}, Action::Renew) == 47.0);
    cfg.cost_cap_mode = CostCapMode::Literal;
    // literal mode: max{8+i, 10} for i=1..4 gives 10+10+11+12
    CHECK(stage_cost(cfg, {4, 8, 8}, Action::Renew) == 8 + 10 + 10 + 11 + 12);
}

TEST_CASE("wait never costs more than transmit; cost nondecreasing in AoI") {
    const ModelConfig cfg = testcfg::tiny();
    const StateIndex idx(cfg);
    for (int i = 0; i < idx.size(); ++i) {
        const State s = idx.state(i);
        CHECK(stage_cost(cfg, s, Action::Wait) <= stage_cost(cfg, s, Action::Transmit));
        if (s.delta > 1) {
            const State lower{s.d, s.delta - 1, s.b};
            for (Action a : {Action::Wait, Action::Transmit, Action::Renew})
                CHECK(stage_cost(cfg, lower, a) <= stage_cost(cfg, s, a));
        }
    }
}

TEST_CASE("state enumeration is a bijection in d-major order") {
    const ModelConfig cfg = testcfg::reference_sparse();
    const StateIndex idx = enumerate_states(cfg);
    CHECK(idx.size() == 900);
    CHECK(idx.state(0) == State{1, 1, 0});
    for (int i = 0; i < idx.size(); ++i) CHECK(idx.index(idx.state(i)) == i);
    // delta varies before d, b varies before delta
    CHECK(idx.state(1) == State{1, 1, 1});
    CHECK(idx.state(cfg.bucket_capacity + 1) == State{1, 2, 0});
}

TEST_CASE("kernel distributions are consistent with the dynamics") {
    for (const ModelConfig& cfg :
         {testcfg::tiny(), testcfg::reference_sparse(), testcfg::exponential_profile(0.3)}) {
        const StateIndex idx(cfg);
        for (int i = 0; i < idx.size(); ++i) {
            const State s = idx.state(i);
            for (Action a : feasible_actions(cfg, s)) {
                const auto dist = transitions(cfg, s, a);
                double total = 0.0;
                for (const auto& e : dist) {
                    total += e.prob;
                    CHECK(e.prob > 0.0);
                    CHECK(e.prob <= 1.0);
                    // successor must arise from some (W_tx, W_b) realization
                    bool explained = false;
                    for (int wtx = 0; wtx <= 1 && !explained; ++wtx) {
                        for (int wb = 0; wb <= 1 && !explained; ++wb) {
                            State expect;
                            expect.d = next_deterioration(cfg, s.d, a);
                            if (a == Action::Renew) {
                                expect.delta = 1;
                                expect.b = 0;
                            } else {
                                expect.delta = (a == Action::Transmit && wtx)
                                                   ? 1
                                                   : std::min(s.delta + 1, cfg.max_aoi);
                                expect.b = wb ? std::min(s.b + 1, cfg.bucket_capacity) : s.b;
                            }
                            explained = expect == e.to;
                        }
                    }
                    CHECK(explained);
                }
                CHECK(std::abs(total - 1.0) < 1e-12);
                // merged distribution has distinct successors
                for (size_t x = 0; x < dist.size(); ++x)
                    for (size_t y = x + 1; y < dist.size(); ++y)
                        CHECK(dist[x].to != dist[y].to);
            }
        }
    }
}

TEST_CASE("config validation") {
    ModelConfig cfg = testcfg::tiny();
    CHECK_NOTHROW(cfg.validate());
    cfg.wear_per_transmit = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = testcfg::tiny();
    cfg.token_prob = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = testcfg::tiny();
    cfg.profile.p_hi = 1.0;  // P_s(1) must stay below 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = testcfg::tiny();
    cfg.profile.p_lo = 0.95;
    cfg.profile.p_hi = 0.5;  // increasing profile
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

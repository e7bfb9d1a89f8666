#include <doctest.h>

#include <cstdint>
#include <vector>

#include "mwdp/bellman.hpp"
#include "mwdp/generators.hpp"
#include "mwdp/instance.hpp"

using namespace mwdp;

namespace {

DpInstance tiny() {
    InstanceData d;
    d.num_states = 2;
    d.num_actions = 2;
    d.horizon = 2;
    d.initial_state = 0;
    d.transitions = {{0, 1}, {1, 2}, {1, 1}, {0, 2}};
    return validate_instance(d);
}

// Best trajectory value by trying every (t, s) -> a assignment. Independent
// of the backward induction; only usable for tiny shapes.
int64_t best_by_enumeration(const DpInstance& inst) {
    int64_t slots = static_cast<int64_t>(inst.horizon) * inst.num_states;
    int64_t total = 1;
    for (int64_t i = 0; i < slots; ++i) total *= inst.num_actions;
    REQUIRE(total <= (1 << 20));

    int64_t best = 0;
    for (int64_t code = 0; code < total; ++code) {
        int64_t c = code;
        std::vector<int32_t> act(static_cast<std::size_t>(slots));
        for (int64_t i = 0; i < slots; ++i) { act[i] = static_cast<int32_t>(c % inst.num_actions); c /= inst.num_actions; }
        int32_t s = inst.initial_state;
        int64_t got = 0;
        for (int32_t t = 0; t < inst.horizon; ++t) {
            const Transition& tr = inst.at(t, s, act[static_cast<std::size_t>(t) * inst.num_states + s]);
            got += tr.reward;
            s = tr.next;
        }
        if (got > best) best = got;
    }
    return best;
}

} // namespace

TEST_CASE("backward induction on the two-state reference") {
    DpInstance inst = tiny();
    BellmanResult r = bellman_solve(inst);

    CHECK(r.v_star == 4);
    CHECK(r.values.at(2, 0) == 0);
    CHECK(r.values.at(2, 1) == 0);
    CHECK(r.values.at(1, 0) == 2);
    CHECK(r.values.at(1, 1) == 2);
    CHECK(r.values.at(0, 0) == 4);
    CHECK(r.values.at(0, 1) == 4);
    CHECK(r.policy.at(0, 0) == 1);
    CHECK(r.policy.at(1, 0) == 1);
    CHECK(r.policy.at(1, 1) == 1);
}

TEST_CASE("greedy policy picks the smallest maximizing action") {
    // Two actions with the same one-step payoff and target.
    InstanceData d;
    d.num_states = 1;
    d.num_actions = 3;
    d.horizon = 1;
    d.transitions = {{0, 2}, {0, 2}, {0, 1}};
    BellmanResult r = bellman_solve(validate_instance(d));
    CHECK(r.policy.at(0, 0) == 0);
    CHECK(optimal_action_set(validate_instance(d), 0, 0) == std::vector<int32_t>{0, 1});
}

TEST_CASE("optimal action sets on the reference instance") {
    DpInstance inst = tiny();
    CHECK(optimal_action_set(inst, 0, 0) == std::vector<int32_t>{1});
    CHECK(optimal_action_set(inst, 1, 1) == std::vector<int32_t>{1});
    CHECK(optimal_action_set(inst, 0, 1) == std::vector<int32_t>{1});
    CHECK_THROWS_AS(optimal_action_set(inst, 2, 0), input_error);
    CHECK_THROWS_AS(optimal_action_set(inst, -1, 0), input_error);
    CHECK_THROWS_AS(optimal_action_set(inst, 0, 2), input_error);
    CHECK_THROWS_AS(optimal_action_set(inst, 0, -1), input_error);
}

TEST_CASE("backward induction matches full policy enumeration") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        RandomInstanceParams p;
        p.num_states = 3;
        p.num_actions = 2;
        p.horizon = 3;
        p.reward_max = 2;
        p.time_dependent = (seed % 2) == 0;
        p.seed = seed;
        DpInstance inst = gen_random_instance(p);
        CAPTURE(seed);
        CHECK(bellman_solve(inst).v_star == best_by_enumeration(inst));
    }
}

TEST_CASE("value table obeys the per-entry and summed range bounds") {
    for (uint64_t seed = 20; seed < 30; ++seed) {
        RandomInstanceParams p;
        p.num_states = 5;
        p.num_actions = 3;
        p.horizon = 4;
        p.reward_max = 3;
        p.seed = seed;
        DpInstance inst = gen_random_instance(p);
        BellmanResult r = bellman_solve(inst);

        int64_t T = inst.horizon;
        int64_t S = inst.num_states;
        int64_t rb = inst.reward_bound;
        int64_t sum = 0;
        for (int32_t t = 0; t <= T; ++t) {
            for (int32_t s = 0; s < S; ++s) {
                int64_t v = r.values.at(t, s);
                // every reward is in [1, rb], so T - t steps pin the value range
                CHECK(v >= T - t);
                CHECK(v <= (T - t) * rb);
                sum += v;
            }
        }
        CHECK(sum >= S * T * (T - 1) / 2);
        CHECK(sum <= S * T * (T + 1) / 2 * rb);
    }
}

TEST_CASE("a uniform reward shift adds shift * (T - t) and keeps optimal sets") {
    InstanceData d;
    d.num_states = 3;
    d.num_actions = 2;
    d.horizon = 3;
    d.transitions = {{1, 2}, {2, 1}, {0, 3}, {2, 1}, {1, 1}, {0, 2}};
    DpInstance base = validate_instance(d);
    REQUIRE(base.reward_shift == 0);

    InstanceData lowered = d;
    for (Transition& tr : lowered.transitions) tr.reward -= 4;
    DpInstance re = validate_instance(lowered);
    REQUIRE(re.reward_shift == 4); // raw min 1 - 4 = -3

    BellmanResult a = bellman_solve(base);
    BellmanResult b = bellman_solve(re);
    // lowering by 4 then shifting by 4 restores the rewards exactly, and
    // validation on `d` itself applies no shift: identical tables
    CHECK(b.values.v == a.values.v);

    // a genuine net shift: +2 everywhere adds 2 per remaining step
    InstanceData raised = d;
    for (Transition& tr : raised.transitions) tr.reward += 2;
    BellmanResult c = bellman_solve(validate_instance(raised));
    for (int32_t t = 0; t <= base.horizon; ++t)
        for (int32_t s = 0; s < base.num_states; ++s)
            CHECK(c.values.at(t, s) == a.values.at(t, s) + 2 * (base.horizon - t));
    DpInstance raised_inst = validate_instance(raised);
    for (int32_t s = 0; s < base.num_states; ++s)
        for (int32_t t = 0; t < base.horizon; ++t)
            CHECK(optimal_action_set(base, s, t) == optimal_action_set(raised_inst, s, t));
}

TEST_CASE("primal feasibility check accepts the fixed point and flags edits") {
    DpInstance inst = tiny();
    BellmanResult r = bellman_solve(inst);

    SUBCASE("the exact table passes") {
        PrimalCheck c = check_primal_feasibility(inst, r.values);
        CHECK(c.ok);
        CHECK_FALSE(c.violated);
        CHECK_FALSE(c.slack);
    }
    SUBCASE("an undercut value is a violation at the witnessing action") {
        ValueTable t = r.values;
        t.at(0, 0) = 3;
        PrimalCheck c = check_primal_feasibility(inst, t);
        CHECK_FALSE(c.ok);
        CHECK(c.violated);
        CHECK(c.s == 0);
        CHECK(c.t == 0);
        CHECK(c.a == 1);
    }
    SUBCASE("an inflated value leaves no tight action") {
        ValueTable t = r.values;
        t.at(0, 0) = 5;
        PrimalCheck c = check_primal_feasibility(inst, t);
        CHECK_FALSE(c.ok);
        CHECK(c.slack);
        CHECK_FALSE(c.violated);
        CHECK(c.s == 0);
        CHECK(c.t == 0);
        CHECK(c.a == -1);
    }
    SUBCASE("a nonzero final row is a violation") {
        ValueTable t = r.values;
        t.at(2, 1) = 1;
        PrimalCheck c = check_primal_feasibility(inst, t);
        CHECK(c.violated);
        CHECK(c.s == 1);
        CHECK(c.t == 2);
    }
    SUBCASE("shape mismatch throws") {
        ValueTable t = r.values;
        t.num_states = 3;
        CHECK_THROWS_AS(check_primal_feasibility(inst, t), input_error);
    }
}

TEST_CASE("search range bound") {
    DpInstance inst = tiny();
    CHECK(compute_rho(inst) == 4); // horizon 2 * bound 2
    CHECK(compute_rho(inst, 4) == 4);
    CHECK(compute_rho(inst, 9) == 9);
    CHECK(compute_rho(inst, 1) == 1);
    CHECK_THROWS_AS(compute_rho(inst, 0), input_error);
    CHECK_THROWS_AS(compute_rho(inst, -2), input_error);
}

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwdp/instance.hpp"

namespace mwdp {

/// Exact optimal values v[t][s] for t in [0, horizon]; the final row is all
/// zeros. Values are exact integers.
struct ValueTable {
    int32_t num_states = 0;
    int32_t horizon = 0;
    std::vector<int64_t> v; // (horizon+1) x num_states, row-major by t

    int64_t at(int32_t t, int32_t s) const {
        return v[static_cast<std::size_t>(t) * num_states + s];
    }
    int64_t& at(int32_t t, int32_t s) {
        return v[static_cast<std::size_t>(t) * num_states + s];
    }
};

/// Greedy policy recovered alongside the values: pi[t][s] is the smallest
/// action attaining the backup at (s, t).
struct Policy {
    int32_t num_states = 0;
    int32_t horizon = 0;
    std::vector<int32_t> action; // horizon x num_states, row-major by t

    int32_t at(int32_t t, int32_t s) const {
        return action[static_cast<std::size_t>(t) * num_states + s];
    }
};

struct BellmanResult {
    ValueTable values;
    Policy policy;
    int64_t v_star = 0; // values at (initial_state, 0)
};

/// Backward induction: v[t][s] = max_a { r(t,s,a) + v[t+1][next(t,s,a)] },
/// v[horizon][s] = 0. Exact integer arithmetic.
BellmanResult bellman_solve(const DpInstance& inst);

/// All actions attaining the backup at (s, t), ascending. Runs a fresh
/// backward induction.
std::vector<int32_t> optimal_action_set(const DpInstance& inst, int32_t s, int32_t t);

/// Outcome of checking a value table against the one-step inequalities
/// v[t][s] >= r + v[t+1][next] with at least one equality per (s, t).
struct PrimalCheck {
    bool ok = true;
    bool violated = false;  // some inequality fails
    bool slack = false;     // some (s, t) has no tight action
    int32_t s = -1, t = -1, a = -1;
};

/// Verifies that `table` is the exact fixed point of the backup operator.
/// Throws input_error(dimension_mismatch) when shapes disagree.
PrimalCheck check_primal_feasibility(const DpInstance& inst, const ValueTable& table);

/// Upper bound for the dual objective search range: the override when given,
/// else horizon * reward_bound. Throws input_error(override_too_small) when
/// an override below 1 is passed.
int64_t compute_rho(const DpInstance& inst, std::optional<int64_t> override_value = {});

} // namespace mwdp

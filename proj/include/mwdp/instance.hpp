#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwdp/errors.hpp"

namespace mwdp {

/// One deterministic transition: taking an action moves to `next` and pays
/// `reward`. Rewards are integral throughout.
struct Transition {
    int32_t next = 0;
    int64_t reward = 0;
};

/// Raw instance data as parsed or assembled by a caller, before validation.
/// `transitions` is a flat row-major table: [T][S][A] when time_dependent,
/// [S][A] otherwise.
struct InstanceData {
    int32_t num_states = 0;
    int32_t num_actions = 0;
    int32_t horizon = 0;
    int32_t initial_state = 0;
    bool time_dependent = false;
    bool layered = false;
    std::vector<int32_t> layer_of; // size num_states iff layered
    std::vector<Transition> transitions;
    std::optional<int64_t> reward_bound; // upper bound on rewards, computed if absent
};

/// Validated finite-horizon deterministic DP.
///
/// Invariants established by validate_instance:
///  - horizon >= 1, num_actions >= 1, all state indices in range
///  - every reward satisfies 1 <= r <= reward_bound (a uniform shift
///    delta = 1 - min_reward was applied when the raw minimum was below 1;
///    reward_shift records it)
///  - if layered: layer_of[initial_state] == 0 and every transition taken
///    from a state at its own layer t < horizon lands at layer t+1
struct DpInstance {
    int32_t num_states = 0;
    int32_t num_actions = 0;
    int32_t horizon = 0;
    int32_t initial_state = 0;
    bool time_dependent = false;
    bool layered = false;
    std::vector<int32_t> layer_of;
    std::vector<Transition> transitions;
    int64_t reward_bound = 1; // max observed reward post-shift, or larger
    int64_t reward_shift = 0; // delta added uniformly to all rewards

    const Transition& at(int32_t t, int32_t s, int32_t a) const {
        std::size_t base = time_dependent
            ? (static_cast<std::size_t>(t) * num_states + s)
            : static_cast<std::size_t>(s);
        return transitions[base * num_actions + a];
    }
};

/// Checks shape and index validity, applies the reward shift needed to make
/// every reward >= 1, and computes the reward bound when absent.
/// Throws input_error (non_positive_horizon, empty_action_set,
/// dangling_state_index, layer_violation, malformed_table) on bad data.
DpInstance validate_instance(const InstanceData& raw);

} // namespace mwdp

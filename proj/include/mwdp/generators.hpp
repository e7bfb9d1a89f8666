#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "mwdp/instance.hpp"

namespace mwdp {

// Deterministic helpers shared by everything that draws randomness. Bounded
// draws go through these (never std::uniform_*_distribution) so that a seed
// pins byte-identical behaviour across platforms.
uint64_t splitmix64(uint64_t& state);
uint64_t rng_below(std::mt19937_64& rng, uint64_t n); // uniform in [0, n)
double rng_unit(std::mt19937_64& rng);                // uniform in [0, 1)

struct RandomInstanceParams {
    int32_t num_states = 2;
    int32_t num_actions = 2;
    int32_t horizon = 2;
    int64_t reward_max = 2;     // rewards drawn uniformly from {1, ..., reward_max}
    bool time_dependent = false;
    uint64_t seed = 0;
};

/// Uniformly random deterministic DP: every (t,)s,a gets an independent
/// uniform target state and reward. Identical params + seed give an
/// identical instance.
DpInstance gen_random_instance(const RandomInstanceParams& p);

struct AdversarialParams {
    int32_t n = 2;           // size of the hidden band (and of the sink band)
    int32_t horizon = 3;     // must be >= ceil(log2 n)
    int32_t num_actions = 3; // >= 3: descend-left, descend-right, stay actions
    uint64_t seed = 0;
    // Location of the single differing (state, action); drawn from the seed
    // when absent. special_state indexes into the hidden band [0, n).
    std::optional<int32_t> special_state;
    std::optional<int32_t> special_action;
};

/// Two instances that agree everywhere except at one hidden (state, action):
/// a routing tree sits above a band of n states whose actions all fall into
/// zero-reward sinks. In instance_1 the special action pays 1 and still
/// falls into a sink; in instance_2 it jumps to a self-looping state paying
/// `horizon`. Any solver must effectively probe every hidden pair to tell
/// the two apart.
struct AdversarialPair {
    DpInstance instance_1;
    DpInstance instance_2;
    int32_t special_state = 0;  // global state index of the special band state
    int32_t special_action = 0;
    int32_t tree_size = 0;      // states 0 .. tree_size-1 form the routing tree, root 0
    int32_t band_begin = 0;     // n hidden band states
    int32_t sink_begin = 0;     // n zero-reward sink states
    int32_t reward_state = 0;   // the single high-reward self-loop state
    int32_t tree_depth = 0;     // ceil(log2 n)
};

/// Throws input_error(horizon_too_short) when horizon < ceil(log2 n),
/// bad_parameter for n < 2 or num_actions < 3.
AdversarialPair gen_adversarial_pair(const AdversarialParams& p);

} // namespace mwdp

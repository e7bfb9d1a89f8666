#include "mwdp/generators.hpp"

#include <vector>

namespace mwdp {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

uint64_t rng_below(std::mt19937_64& rng, uint64_t n) {
    // Modulo bias is < 2^-50 for our tiny ranges; determinism matters more.
    return rng() % n;
}

double rng_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DpInstance gen_random_instance(const RandomInstanceParams& p) {
    if (p.num_states < 1 || p.num_actions < 1 || p.horizon < 1 || p.reward_max < 1)
        throw input_error(errc::bad_parameter, "sizes and reward_max must be >= 1");
    std::mt19937_64 rng(p.seed);
    InstanceData raw;
    raw.num_states = p.num_states;
    raw.num_actions = p.num_actions;
    raw.horizon = p.horizon;
    raw.initial_state = 0;
    raw.time_dependent = p.time_dependent;
    std::size_t rows = p.time_dependent ? static_cast<std::size_t>(p.horizon) : 1u;
    raw.transitions.resize(rows * p.num_states * p.num_actions);
    for (Transition& tr : raw.transitions) {
        tr.next = static_cast<int32_t>(rng_below(rng, p.num_states));
        tr.reward = 1 + static_cast<int64_t>(rng_below(rng, p.reward_max));
    }
    return validate_instance(raw);
}

namespace {

int32_t ceil_log2(int32_t n) {
    int32_t d = 0;
    while ((1 << d) < n) ++d;
    return d;
}

} // namespace

AdversarialPair gen_adversarial_pair(const AdversarialParams& p) {
    if (p.n < 2)
        throw input_error(errc::bad_parameter, "band size n must be >= 2");
    if (p.num_actions < 3)
        throw input_error(errc::bad_parameter, "need descend-left, descend-right and a stay action");
    int32_t depth = ceil_log2(p.n);
    if (p.horizon < depth)
        throw input_error(errc::horizon_too_short, "band unreachable within the horizon");

    // Routing tree, built bottom-up: level d-1 has ceil(n/2) nodes whose
    // children are the band states, each level above halves again, root alone.
    std::vector<int32_t> level_size(depth, 0);
    int32_t below = p.n;
    for (int32_t k = depth - 1; k >= 0; --k) {
        level_size[k] = (below + 1) / 2;
        below = level_size[k];
    }

    AdversarialPair out;
    out.tree_depth = depth;
    std::vector<int32_t> level_base(depth + 1, 0);
    int32_t acc = 0;
    for (int32_t k = 0; k < depth; ++k) { level_base[k] = acc; acc += level_size[k]; }
    out.tree_size = acc;
    out.band_begin = acc;
    out.sink_begin = acc + p.n;
    out.reward_state = acc + 2 * p.n;
    int32_t total = out.reward_state + 1;

    std::mt19937_64 rng(p.seed);
    int32_t sp_s = p.special_state ? *p.special_state
                                   : static_cast<int32_t>(rng_below(rng, p.n));
    int32_t sp_a = p.special_action ? *p.special_action
                                    : static_cast<int32_t>(rng_below(rng, p.num_actions));
    if (sp_s < 0 || sp_s >= p.n || sp_a < 0 || sp_a >= p.num_actions)
        throw input_error(errc::bad_parameter, "special pair out of range");
    out.special_state = out.band_begin + sp_s;
    out.special_action = sp_a;

    InstanceData raw;
    raw.num_states = total;
    raw.num_actions = p.num_actions;
    raw.horizon = p.horizon;
    raw.initial_state = 0;
    raw.transitions.resize(static_cast<std::size_t>(total) * p.num_actions);
    auto put = [&](int32_t s, int32_t a, int32_t next, int64_t r) {
        raw.transitions[static_cast<std::size_t>(s) * p.num_actions + a] = {next, r};
    };

    for (int32_t k = 0; k < depth; ++k) {
        int32_t next_count = (k + 1 < depth) ? level_size[k + 1] : p.n;
        int32_t next_base = (k + 1 < depth) ? level_base[k + 1] : out.band_begin;
        for (int32_t i = 0; i < level_size[k]; ++i) {
            int32_t s = level_base[k] + i;
            int32_t left = std::min(2 * i, next_count - 1);
            int32_t right = std::min(2 * i + 1, next_count - 1);
            put(s, 0, next_base + left, 0);
            put(s, 1, next_base + right, 0);
            for (int32_t a = 2; a < p.num_actions; ++a) put(s, a, s, 1);
        }
    }
    for (int32_t i = 0; i < p.n; ++i) {
        int32_t s = out.band_begin + i;
        for (int32_t a = 0; a < p.num_actions; ++a) {
            int32_t sink = out.sink_begin + static_cast<int32_t>(rng_below(rng, p.n));
            put(s, a, sink, 0);
        }
    }
    for (int32_t i = 0; i < p.n; ++i) {
        int32_t s = out.sink_begin + i;
        for (int32_t a = 0; a < p.num_actions; ++a) put(s, a, s, 0);
    }
    for (int32_t a = 0; a < p.num_actions; ++a) put(out.reward_state, a, out.reward_state, 1);

    // The two family members disagree only at the special (state, action).
    InstanceData raw2 = raw;
    std::size_t sp = static_cast<std::size_t>(out.special_state) * p.num_actions + sp_a;
    raw.transitions[sp].reward = 1; // same sink, small extra pay
    raw2.transitions[sp] = {out.reward_state, p.horizon};

    out.instance_1 = validate_instance(raw);
    out.instance_2 = validate_instance(raw2);
    return out;
}

} // namespace mwdp

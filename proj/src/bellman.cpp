#include "mwdp/bellman.hpp"

namespace mwdp {

BellmanResult bellman_solve(const DpInstance& inst) {
    BellmanResult out;
    out.values.num_states = inst.num_states;
    out.values.horizon = inst.horizon;
    out.values.v.assign(static_cast<std::size_t>(inst.horizon + 1) * inst.num_states, 0);
    out.policy.num_states = inst.num_states;
    out.policy.horizon = inst.horizon;
    out.policy.action.assign(static_cast<std::size_t>(inst.horizon) * inst.num_states, 0);

    for (int32_t t = inst.horizon - 1; t >= 0; --t) {
        for (int32_t s = 0; s < inst.num_states; ++s) {
            int64_t best = 0;
            int32_t arg = 0;
            for (int32_t a = 0; a < inst.num_actions; ++a) {
                const Transition& tr = inst.at(t, s, a);
                int64_t q = tr.reward + out.values.at(t + 1, tr.next);
                if (a == 0 || q > best) { best = q; arg = a; }
            }
            out.values.at(t, s) = best;
            out.policy.action[static_cast<std::size_t>(t) * inst.num_states + s] = arg;
        }
    }
    out.v_star = out.values.at(0, inst.initial_state);
    return out;
}

std::vector<int32_t> optimal_action_set(const DpInstance& inst, int32_t s, int32_t t) {
    if (s < 0 || s >= inst.num_states)
        throw input_error(errc::dangling_state_index, "state out of range");
    if (t < 0 || t >= inst.horizon)
        throw input_error(errc::bad_parameter, "time out of range");
    BellmanResult r = bellman_solve(inst);
    std::vector<int32_t> out;
    for (int32_t a = 0; a < inst.num_actions; ++a) {
        const Transition& tr = inst.at(t, s, a);
        if (tr.reward + r.values.at(t + 1, tr.next) == r.values.at(t, s)) out.push_back(a);
    }
    return out;
}

PrimalCheck check_primal_feasibility(const DpInstance& inst, const ValueTable& table) {
    if (table.num_states != inst.num_states || table.horizon != inst.horizon ||
        table.v.size() != static_cast<std::size_t>(inst.horizon + 1) * inst.num_states)
        throw input_error(errc::dimension_mismatch, "value table shape mismatch");

    PrimalCheck out;
    for (int32_t s = 0; s < inst.num_states; ++s)
        if (table.at(inst.horizon, s) != 0) {
            out.ok = false; out.violated = true;
            out.s = s; out.t = inst.horizon; out.a = -1;
            return out;
        }
    for (int32_t t = 0; t < inst.horizon; ++t) {
        for (int32_t s = 0; s < inst.num_states; ++s) {
            bool tight = false;
            for (int32_t a = 0; a < inst.num_actions; ++a) {
                const Transition& tr = inst.at(t, s, a);
                int64_t q = tr.reward + table.at(t + 1, tr.next);
                if (table.at(t, s) < q) {
                    out.ok = false; out.violated = true;
                    out.s = s; out.t = t; out.a = a;
                    return out;
                }
                if (table.at(t, s) == q) tight = true;
            }
            if (!tight) {
                out.ok = false; out.slack = true;
                out.s = s; out.t = t; out.a = -1;
                return out;
            }
        }
    }
    return out;
}

int64_t compute_rho(const DpInstance& inst, std::optional<int64_t> override_value) {
    if (override_value) {
        if (*override_value < 1)
            throw input_error(errc::override_too_small, "rho override must be >= 1");
        return *override_value;
    }
    return static_cast<int64_t>(inst.horizon) * inst.reward_bound;
}

} // namespace mwdp

#include "mwdp/instance.hpp"

#include <algorithm>
#include <limits>

namespace mwdp {

const char* errc_name(errc c) {
    switch (c) {
        case errc::non_positive_horizon: return "NonPositiveHorizon";
        case errc::empty_action_set: return "EmptyActionSet";
        case errc::dangling_state_index: return "DanglingStateIndex";
        case errc::layer_violation: return "LayerViolation";
        case errc::malformed_table: return "MalformedTable";
        case errc::schema_error: return "SchemaError";
        case errc::override_too_small: return "OverrideTooSmall";
        case errc::epsilon_out_of_range: return "EpsilonOutOfRange";
        case errc::cost_out_of_range: return "CostOutOfRange";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::ell_too_small: return "EllTooSmall";
        case errc::residual_exceeds_ell: return "ResidualExceedsEll";
        case errc::sigma_out_of_range: return "SigmaOutOfRange";
        case errc::not_on_simplex: return "NotOnSimplex";
        case errc::horizon_too_short: return "HorizonTooShort";
        case errc::bad_parameter: return "BadParameter";
        case errc::graph_too_small: return "GraphTooSmall";
        case errc::too_large: return "TooLarge";
        case errc::extraction_below_threshold: return "ExtractionBelowThreshold";
        case errc::all_infeasible: return "AllInfeasible";
        case errc::extraction_failed: return "ExtractionFailed";
        case errc::not_hamiltonian: return "NotHamiltonian";
    }
    return "UnknownError";
}

DpInstance validate_instance(const InstanceData& raw) {
    if (raw.horizon <= 0)
        throw input_error(errc::non_positive_horizon, "horizon must be >= 1");
    if (raw.num_actions <= 0)
        throw input_error(errc::empty_action_set, "need at least one action");
    if (raw.num_states <= 0)
        throw input_error(errc::dangling_state_index, "need at least one state");
    if (raw.initial_state < 0 || raw.initial_state >= raw.num_states)
        throw input_error(errc::dangling_state_index, "initial_state out of range");

    std::size_t rows = raw.time_dependent ? static_cast<std::size_t>(raw.horizon) : 1u;
    std::size_t want = rows * raw.num_states * raw.num_actions;
    if (raw.transitions.size() != want)
        throw input_error(errc::malformed_table, "transition table has wrong size");

    int64_t rmin = std::numeric_limits<int64_t>::max();
    int64_t rmax = std::numeric_limits<int64_t>::min();
    for (const Transition& tr : raw.transitions) {
        if (tr.next < 0 || tr.next >= raw.num_states)
            throw input_error(errc::dangling_state_index, "transition target out of range");
        rmin = std::min(rmin, tr.reward);
        rmax = std::max(rmax, tr.reward);
    }

    DpInstance inst;
    inst.num_states = raw.num_states;
    inst.num_actions = raw.num_actions;
    inst.horizon = raw.horizon;
    inst.initial_state = raw.initial_state;
    inst.time_dependent = raw.time_dependent;
    inst.layered = raw.layered;
    inst.transitions = raw.transitions;

    // Rewards must be >= 1 so that sigma >= 1 and all simplex masses are finite.
    inst.reward_shift = rmin < 1 ? 1 - rmin : 0;
    if (inst.reward_shift != 0)
        for (Transition& tr : inst.transitions) tr.reward += inst.reward_shift;
    int64_t observed = rmax + inst.reward_shift;
    inst.reward_bound = raw.reward_bound ? std::max(*raw.reward_bound, observed) : observed;

    if (raw.layered) {
        if (raw.layer_of.size() != static_cast<std::size_t>(raw.num_states))
            throw input_error(errc::layer_violation, "layer_of must list every state");
        inst.layer_of = raw.layer_of;
        if (inst.layer_of[inst.initial_state] != 0)
            throw input_error(errc::layer_violation, "initial state must sit at layer 0");
        for (int32_t s = 0; s < inst.num_states; ++s) {
            int32_t t = inst.layer_of[s];
            if (t < 0 || t >= inst.horizon) continue; // no timed constraint binds here
            for (int32_t a = 0; a < inst.num_actions; ++a) {
                const Transition& tr = inst.at(inst.time_dependent ? t : 0, s, a);
                if (inst.layer_of[tr.next] != t + 1)
                    throw input_error(errc::layer_violation, "transition must advance exactly one layer");
            }
        }
    } else if (!raw.layer_of.empty()) {
        throw input_error(errc::layer_violation, "layer_of given without layered flag");
    }

    return inst;
}

} // namespace mwdp

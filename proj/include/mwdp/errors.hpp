#pragma once

#include <stdexcept>
#include <string>

namespace mwdp {

/// Reason codes for rejected inputs and failed solver preconditions.
enum class errc {
    non_positive_horizon,
    empty_action_set,
    dangling_state_index,
    layer_violation,
    malformed_table,
    schema_error,
    override_too_small,
    epsilon_out_of_range,
    cost_out_of_range,
    dimension_mismatch,
    ell_too_small,
    residual_exceeds_ell,
    sigma_out_of_range,
    not_on_simplex,
    horizon_too_short,
    bad_parameter,
    graph_too_small,
    too_large,
    extraction_below_threshold,
    all_infeasible,
    extraction_failed,
    not_hamiltonian,
};

const char* errc_name(errc c);

/// Input or usage error: the caller handed us something invalid.
/// Maps to process exit code 2 in the CLI.
struct input_error : std::invalid_argument {
    errc code;
    input_error(errc c, const std::string& what)
        : std::invalid_argument(std::string(errc_name(c)) + ": " + what), code(c) {}
};

/// Negative solver outcome on valid input (infeasible system, failed
/// extraction, no cover). Maps to process exit code 1 in the CLI.
struct solver_negative : std::runtime_error {
    errc code;
    solver_negative(errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
};

} // namespace mwdp

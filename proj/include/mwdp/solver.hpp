#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwdp/bellman.hpp"
#include "mwdp/dual_oracle.hpp"
#include "mwdp/instance.hpp"
#include "mwdp/mwum.hpp"

namespace mwdp {

struct SolveConfig {
    OracleStrategy strategy;
    std::optional<double> delta;       // default 1 / (2 * num_actions)
    std::optional<int64_t> rho_override;
    uint64_t seed = 0;
    int32_t escalation_limit = 3;      // delta halvings after failed extraction
    std::optional<int64_t> rounds_override; // per-probe round cap, forfeits certification
    bool record_transcript = false;
    bool record_p = false;
    bool exact_variant = false;        // comparison switch for the driver constants
    std::optional<double> qmf_fail_prob; // override the planned 1/(2 K_planned)
};

struct ProbeStats {
    int64_t sigma = 0;
    int64_t rounds_planned = 0;
    int64_t rounds_executed = 0;
    bool feasible = false;
};

/// One probe: is the dual system at level sigma (delta-approximately)
/// feasible? Runs the full MWUM loop with the strategy's inner oracle.
struct ProbeResult {
    bool feasible = false;
    AveragedSolution average;
    DualCheck dual_check;        // evaluated on feasible probes
    FeasibilityOutcome outcome;  // certificate etc. on infeasible probes
    int64_t rounds_planned = 0;
};

ProbeResult feasibility_at_sigma(const DpInstance& inst, int64_t sigma, int64_t rho,
                                 double delta, const OracleStrategy& strategy,
                                 const SolveConfig& cfg, std::mt19937_64& rng,
                                 QueryLedger& ledger);

struct SearchResult {
    int64_t sigma_bar = 0;
    AveragedSolution average;
    std::vector<ProbeStats> probes;
    bool fallback_used = false; // downward scan after a non-monotone observation
    std::optional<FeasibilityTranscript> transcript; // from the accepted probe
};

/// Largest integer sigma in [1, rho] whose probe reports feasible, by
/// bisection from a feasible sigma = 1. A failed sigma = 1 probe (possible
/// only under QMF failures) falls back to a downward linear scan from rho;
/// no feasible level at all raises solver_negative(all_infeasible).
SearchResult binary_search_sigma(const DpInstance& inst, int64_t rho, double delta,
                                 const OracleStrategy& strategy, const SolveConfig& cfg,
                                 std::mt19937_64& rng, QueryLedger& ledger);

/// The action carrying at least 1/(2|A|) of the averaged dual mass at the
/// start pair; larger mass wins, ties go to the smaller action index.
/// Throws solver_negative(extraction_below_threshold) when no action
/// qualifies.
int32_t extract_action(const DpInstance& inst, const SigmaContext& ctx,
                       const AveragedSolution& avg, double delta_used);

struct SolveReport {
    int64_t sigma_bar = 0;
    int32_t chosen_action = -1;
    std::vector<double> lambda_at_start_pair;
    double delta_used = 0;
    int32_t escalations = 0;
    int64_t rounds_per_probe = 0; // K at the accepted probe
    int64_t bisection_steps = 0;  // probes executed in the final search
    int64_t total_rounds = 0;     // MWUM rounds executed across everything
    QueryLedger ledger;
    bool certified = false;
    bool fallback_used = false;
    double wallclock_ms = 0;
    std::vector<ProbeStats> probes;
    std::optional<FeasibilityTranscript> transcript; // accepted probe, when recorded
};

/// Full pipeline: search sigma, extract the start action, escalate delta on
/// failed extraction up to the configured limit.
SolveReport solve_dp(const DpInstance& inst, const SolveConfig& cfg);

struct TraceStep {
    int32_t state = 0;
    int32_t time = 0;
    int32_t action = 0;
    int64_t reward = 0;
};

struct PolicyTrace {
    std::vector<TraceStep> steps;
    int64_t total_reward = 0;          // shifted rewards, as stored
    int64_t total_reward_unshifted = 0; // minus reward_shift * horizon
};

/// Rebases the problem to start `steps` time layers in: drops consumed
/// transition rows (time-dependent), shifts layer labels (layered), and
/// marks `new_start` as initial.
DpInstance suffix_instance(const DpInstance& inst, int32_t steps, int32_t new_start);

/// Greedy full trajectory: solve, commit the extracted action, advance one
/// step, re-solve the suffix problem, horizon times.
PolicyTrace solve_policy(const DpInstance& inst, const SolveConfig& cfg);

/// Same trajectory shape from the exact backward-induction policy; cheap
/// reference path for decoding and spot checks.
PolicyTrace rollout_policy(const DpInstance& inst);

/// Planned-cost arithmetic for the ledgers, no solving: per-probe rounds at
/// the widest level (ell = 2 rho), probe count for the bisection, and the
/// modeled query totals both strategies would book.
struct IterationBoundReport {
    double delta = 0;
    double ell = 0;              // 2 * rho
    int64_t num_constraints = 0;
    int64_t vertex_count = 0;
    int64_t rounds_per_probe = 0;
    int64_t probes = 0;          // ceil(log2 rho) + 1
    int64_t planned_rounds = 0;  // probes * rounds_per_probe
    double qmf_fail_prob = 0;    // 1 / (2 * planned_rounds)
    int64_t modeled_queries = 0; // planned_rounds * per-run qmf cost
    int64_t scan_evaluations = 0; // planned_rounds * vertex_count
};

IterationBoundReport iteration_bound_report(const DpInstance& inst, const SolveConfig& cfg);

} // namespace mwdp

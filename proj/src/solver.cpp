#include "mwdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mwdp/log.hpp"

namespace mwdp {

namespace {

double default_delta(const DpInstance& inst) {
    return 1.0 / (2.0 * static_cast<double>(inst.num_actions));
}

int64_t ceil_log2_int(int64_t x) {
    int64_t d = 0;
    while ((int64_t{1} << d) < x) ++d;
    return d;
}

int64_t planned_probes(int64_t rho) { return ceil_log2_int(rho) + 1; }

/// Per-run failure probability that keeps total failure mass <= 1/2 over
/// every planned round: 1 / (2 * probes * K(delta, ell = 2 rho)).
double planned_fail_prob(const DpInstance& inst, int64_t rho, double delta,
                         bool exact_variant) {
    SigmaContext widest = make_sigma_context(inst, rho, rho);
    FeasibilityConfig k = compute_config(delta, 2.0 * static_cast<double>(rho),
                                         widest.num_constraints, exact_variant);
    int64_t planned = planned_probes(rho) * k.rounds;
    return 1.0 / (2.0 * static_cast<double>(planned));
}

OracleStrategy resolve_strategy(const DpInstance& inst, int64_t rho, double delta,
                                const SolveConfig& cfg) {
    OracleStrategy s = cfg.strategy;
    if (s.kind == StrategyKind::simulated_qmf)
        s.fail_prob = cfg.qmf_fail_prob.value_or(
            planned_fail_prob(inst, rho, delta, cfg.exact_variant));
    return s;
}

} // namespace

ProbeResult feasibility_at_sigma(const DpInstance& inst, int64_t sigma, int64_t rho,
                                 double delta, const OracleStrategy& strategy,
                                 const SolveConfig& cfg, std::mt19937_64& rng,
                                 QueryLedger& ledger) {
    SigmaContext ctx = make_sigma_context(inst, sigma, rho);
    FeasibilityConfig fc =
        compute_config(delta, ctx.ell, ctx.num_constraints, cfg.exact_variant);
    FeasibilityRunOptions opts;
    opts.rounds_override = cfg.rounds_override;
    opts.record_transcript = cfg.record_transcript;
    opts.record_p = cfg.record_p;
    FeasibilityOracle oracle = oracle_for_mwum(ctx, strategy, delta, rng, ledger);

    ProbeResult out;
    out.rounds_planned = fc.rounds;
    out.outcome = run_feasibility(fc, oracle, opts);
    out.feasible = out.outcome.feasible;
    if (out.feasible) {
        out.average = accumulate(ctx, out.outcome);
        out.dual_check = check_dual_feasibility(ctx, out.average, delta);
    }
    return out;
}

SearchResult binary_search_sigma(const DpInstance& inst, int64_t rho, double delta,
                                 const OracleStrategy& strategy, const SolveConfig& cfg,
                                 std::mt19937_64& rng, QueryLedger& ledger) {
    SearchResult out;
    auto probe = [&](int64_t sigma) -> ProbeResult {
        MWDP_LOG_DEBUG("probe sigma=" << sigma << " delta=" << delta);
        ProbeResult r = feasibility_at_sigma(inst, sigma, rho, delta, strategy, cfg,
                                             rng, ledger);
        out.probes.push_back({sigma, r.rounds_planned, r.outcome.rounds_executed,
                              r.feasible});
        return r;
    };

    ProbeResult at_one = probe(1);
    if (!at_one.feasible) {
        // Exact scans cannot reject sigma = 1 (every level up to the optimum
        // is exactly feasible); a QMF failure can. Observed pattern is then
        // non-monotone, so scan down from the top instead of bisecting.
        out.fallback_used = true;
        for (int64_t sigma = rho; sigma >= 1; --sigma) {
            ProbeResult r = probe(sigma);
            if (r.feasible) {
                out.sigma_bar = sigma;
                out.average = r.average;
                out.transcript = std::move(r.outcome.transcript);
                return out;
            }
        }
        throw solver_negative(errc::all_infeasible,
                              "no feasible objective level in [1, rho]");
    }

    out.sigma_bar = 1;
    out.average = at_one.average;
    out.transcript = std::move(at_one.outcome.transcript);
    int64_t lo = 1, hi = rho;
    while (lo < hi) {
        int64_t mid = lo + (hi - lo + 1) / 2;
        ProbeResult r = probe(mid);
        if (r.feasible) {
            lo = mid;
            out.sigma_bar = mid;
            out.average = r.average;
            out.transcript = std::move(r.outcome.transcript);
        } else {
            hi = mid - 1;
        }
    }
    return out;
}

int32_t extract_action(const DpInstance& inst, const SigmaContext& ctx,
                       const AveragedSolution& avg, double /*delta_used*/) {
    std::vector<double> mass = lambda_at_start(ctx, avg);
    int32_t best = 0;
    for (int32_t a = 1; a < inst.num_actions; ++a)
        if (mass[a] > mass[best]) best = a;
    double threshold = 1.0 / (2.0 * static_cast<double>(inst.num_actions));
    if (!(mass[best] >= threshold - 1e-12))
        throw solver_negative(errc::extraction_below_threshold,
                              "no action holds enough dual mass at the start pair");
    return best;
}

SolveReport solve_dp(const DpInstance& inst, const SolveConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    int64_t rho = compute_rho(inst, cfg.rho_override);
    double delta = cfg.delta.value_or(default_delta(inst));
    if (!(delta > 0) || delta > 0.5)
        throw input_error(errc::bad_parameter, "delta must lie in (0, 1/2]");
    std::mt19937_64 rng(cfg.seed);

    SolveReport rep;
    rep.delta_used = delta;
    for (int32_t attempt = 0;; ++attempt) {
        OracleStrategy strategy = resolve_strategy(inst, rho, delta, cfg);
        SearchResult search =
            binary_search_sigma(inst, rho, delta, strategy, cfg, rng, rep.ledger);
        rep.sigma_bar = search.sigma_bar;
        rep.delta_used = delta;
        rep.escalations = attempt;
        rep.fallback_used = search.fallback_used;
        rep.bisection_steps = static_cast<int64_t>(search.probes.size());
        for (const ProbeStats& ps : search.probes) {
            rep.total_rounds += ps.rounds_executed;
            rep.probes.push_back(ps);
            if (ps.sigma == search.sigma_bar && ps.feasible)
                rep.rounds_per_probe = ps.rounds_planned;
        }
        SigmaContext ctx = make_sigma_context(inst, search.sigma_bar, rho);
        rep.lambda_at_start_pair = lambda_at_start(ctx, search.average);
        rep.transcript = std::move(search.transcript);
        try {
            rep.chosen_action = extract_action(inst, ctx, search.average, delta);
        } catch (const solver_negative&) {
            if (attempt >= cfg.escalation_limit) {
                MWDP_LOG_INFO("extraction failed after " << attempt << " escalations");
                throw solver_negative(errc::extraction_failed,
                                      "dual mass at the start pair stayed below threshold");
            }
            delta /= 2;
            MWDP_LOG_INFO("extraction below threshold, halving delta to " << delta);
            continue;
        }
        break;
    }
    rep.certified = !cfg.rounds_override.has_value() && !rep.fallback_used;
    auto t1 = std::chrono::steady_clock::now();
    rep.wallclock_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
            .count();
    return rep;
}

DpInstance suffix_instance(const DpInstance& inst, int32_t steps, int32_t new_start) {
    if (steps < 0 || steps >= inst.horizon)
        throw input_error(errc::bad_parameter, "suffix must keep at least one step");
    if (new_start < 0 || new_start >= inst.num_states)
        throw input_error(errc::dangling_state_index, "suffix start out of range");
    DpInstance out = inst;
    out.horizon = inst.horizon - steps;
    out.initial_state = new_start;
    if (inst.time_dependent) {
        std::size_t row = static_cast<std::size_t>(inst.num_states) * inst.num_actions;
        out.transitions.assign(inst.transitions.begin() + steps * row,
                               inst.transitions.end());
    }
    if (inst.layered)
        for (int32_t s = 0; s < inst.num_states; ++s) out.layer_of[s] -= steps;
    return out;
}

PolicyTrace solve_policy(const DpInstance& inst, const SolveConfig& cfg) {
    PolicyTrace trace;
    DpInstance cur = inst;
    int32_t state = inst.initial_state;
    for (int32_t t = 0; t < inst.horizon; ++t) {
        SolveConfig step_cfg = cfg;
        step_cfg.seed = cfg.seed + static_cast<uint64_t>(t) * 0x9e3779b97f4a7c15ull;
        SolveReport rep = solve_dp(cur, step_cfg);
        const Transition& tr = cur.at(0, state, rep.chosen_action);
        trace.steps.push_back({state, t, rep.chosen_action, tr.reward});
        trace.total_reward += tr.reward;
        state = tr.next;
        if (t + 1 < inst.horizon) cur = suffix_instance(cur, 1, state);
    }
    trace.total_reward_unshifted =
        trace.total_reward - inst.reward_shift * static_cast<int64_t>(inst.horizon);
    return trace;
}

PolicyTrace rollout_policy(const DpInstance& inst) {
    BellmanResult res = bellman_solve(inst);
    PolicyTrace trace;
    int32_t state = inst.initial_state;
    for (int32_t t = 0; t < inst.horizon; ++t) {
        int32_t a = res.policy.at(t, state);
        const Transition& tr = inst.at(t, state, a);
        trace.steps.push_back({state, t, a, tr.reward});
        trace.total_reward += tr.reward;
        state = tr.next;
    }
    trace.total_reward_unshifted =
        trace.total_reward - inst.reward_shift * static_cast<int64_t>(inst.horizon);
    return trace;
}

IterationBoundReport iteration_bound_report(const DpInstance& inst, const SolveConfig& cfg) {
    IterationBoundReport out;
    int64_t rho = compute_rho(inst, cfg.rho_override);
    out.delta = cfg.delta.value_or(default_delta(inst));
    out.ell = 2.0 * static_cast<double>(rho);
    SigmaContext widest = make_sigma_context(inst, rho, rho);
    out.num_constraints = widest.num_constraints;
    out.vertex_count = widest.vertex_count();
    FeasibilityConfig fc =
        compute_config(out.delta, out.ell, out.num_constraints, cfg.exact_variant);
    out.rounds_per_probe = fc.rounds;
    out.probes = planned_probes(rho);
    out.planned_rounds = out.probes * out.rounds_per_probe;
    out.qmf_fail_prob = 1.0 / (2.0 * static_cast<double>(out.planned_rounds));
    out.modeled_queries =
        out.planned_rounds * modeled_queries_per_run(out.vertex_count, out.qmf_fail_prob);
    out.scan_evaluations = out.planned_rounds * out.vertex_count;
    return out;
}

} // namespace mwdp

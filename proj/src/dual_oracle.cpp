#include "mwdp/dual_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mwdp/generators.hpp"

namespace mwdp {

int32_t SigmaContext::constraint_index(int32_t s, int32_t t) const {
    if (layered) return state_cindex[s];
    return t * inst->num_states + s;
}

SigmaContext make_sigma_context(const DpInstance& inst, int64_t sigma, int64_t rho) {
    if (sigma < 1 || sigma > rho)
        throw input_error(errc::sigma_out_of_range, "sigma must lie in [1, rho]");

    SigmaContext ctx;
    ctx.inst = &inst;
    ctx.sigma = static_cast<double>(sigma);
    ctx.ell = 2.0 * ctx.sigma;
    ctx.layered = inst.layered;

    if (ctx.layered) {
        ctx.state_cindex.assign(inst.num_states, -1);
        int32_t rows = 0;
        for (int32_t s = 0; s < inst.num_states; ++s)
            if (inst.layer_of[s] >= 0 && inst.layer_of[s] < inst.horizon)
                ctx.state_cindex[s] = rows++;
        ctx.num_constraints = rows;
        ctx.budget_index = ctx.state_cindex[inst.initial_state];
        for (int32_t s = 0; s < inst.num_states; ++s) {
            if (ctx.state_cindex[s] < 0) continue;
            int32_t t = inst.layer_of[s];
            for (int32_t a = 0; a < inst.num_actions; ++a) {
                const Transition& tr = inst.at(inst.time_dependent ? t : 0, s, a);
                ctx.v_state.push_back(s);
                ctx.v_action.push_back(a);
                ctx.v_time.push_back(t);
                ctx.v_mass.push_back(ctx.sigma / static_cast<double>(tr.reward));
                ctx.v_own.push_back(ctx.state_cindex[s]);
                ctx.v_succ.push_back(ctx.state_cindex[tr.next]); // -1 past the last layer
            }
        }
    } else {
        ctx.num_constraints = inst.horizon * inst.num_states;
        ctx.budget_index = inst.initial_state; // row of (s0, t=0)
        for (int32_t s = 0; s < inst.num_states; ++s) {
            for (int32_t a = 0; a < inst.num_actions; ++a) {
                for (int32_t t = 0; t < inst.horizon; ++t) {
                    const Transition& tr = inst.at(t, s, a);
                    ctx.v_state.push_back(s);
                    ctx.v_action.push_back(a);
                    ctx.v_time.push_back(t);
                    ctx.v_mass.push_back(ctx.sigma / static_cast<double>(tr.reward));
                    ctx.v_own.push_back(t * inst.num_states + s);
                    ctx.v_succ.push_back(t + 1 < inst.horizon
                                             ? (t + 1) * inst.num_states + tr.next
                                             : -1);
                }
            }
        }
    }
    return ctx;
}

double eval_f(const SigmaContext& ctx, std::span<const double> w, int64_t vertex) {
    if (vertex < 0 || vertex >= ctx.vertex_count())
        throw input_error(errc::bad_parameter, "vertex out of range");
    if (static_cast<int64_t>(w.size()) != ctx.num_constraints)
        throw input_error(errc::dimension_mismatch, "weight vector width != constraint count");
    int32_t succ = ctx.v_succ[vertex];
    double ws = succ >= 0 ? w[succ] : 0.0;
    return w[ctx.budget_index] + ctx.v_mass[vertex] * (ws - w[ctx.v_own[vertex]]);
}

std::vector<std::pair<int32_t, double>> residuals(const SigmaContext& ctx, int64_t vertex) {
    if (vertex < 0 || vertex >= ctx.vertex_count())
        throw input_error(errc::bad_parameter, "vertex out of range");
    double mass = ctx.v_mass[vertex];
    int32_t own = ctx.v_own[vertex];
    int32_t succ = ctx.v_succ[vertex];
    std::vector<std::pair<int32_t, double>> out;
    if (own == ctx.budget_index) {
        out.emplace_back(ctx.budget_index, 1.0 - mass);
    } else {
        out.emplace_back(ctx.budget_index, 1.0);
        out.emplace_back(own, -mass);
    }
    if (succ >= 0) out.emplace_back(succ, mass);
    return out;
}

ArgmaxResult exact_argmax(const SigmaContext& ctx, std::span<const double> w, double w_sum) {
    if (static_cast<int64_t>(w.size()) != ctx.num_constraints)
        throw input_error(errc::dimension_mismatch, "weight vector width != constraint count");
    if (!(w_sum > 0))
        throw input_error(errc::bad_parameter, "weight sum must be positive");
    const double wb = w[ctx.budget_index];
    const int64_t n = ctx.vertex_count();
    double best = -std::numeric_limits<double>::infinity();
    int64_t arg = -1;
    for (int64_t v = 0; v < n; ++v) {
        int32_t succ = ctx.v_succ[v];
        double ws = succ >= 0 ? w[succ] : 0.0;
        double f = wb + ctx.v_mass[v] * (ws - w[ctx.v_own[v]]);
        if (f > best) { best = f; arg = v; }
    }
    return {arg, best / w_sum};
}

void QueryLedger::add_qmf(int64_t vertex_count, double fail_prob) {
    qmf_runs += 1;
    modeled_queries += modeled_queries_per_run(vertex_count, fail_prob);
}

void QueryLedger::add_scan(int64_t vertex_count) { scan_evaluations += vertex_count; }

QueryLedger& QueryLedger::operator+=(const QueryLedger& other) {
    qmf_runs += other.qmf_runs;
    modeled_queries += other.modeled_queries;
    scan_evaluations += other.scan_evaluations;
    return *this;
}

int64_t modeled_queries_per_run(int64_t vertex_count, double fail_prob) {
    int64_t root = static_cast<int64_t>(
        std::ceil(std::sqrt(static_cast<double>(vertex_count))));
    int64_t amp = static_cast<int64_t>(std::ceil(std::log2(1.0 / fail_prob)));
    return root * std::max<int64_t>(amp, 1);
}

QmfResult simulated_qmf(const SigmaContext& ctx, std::span<const double> w, double w_sum,
                        double delta, double fail_prob, std::mt19937_64& rng,
                        QueryLedger& ledger) {
    if (!(fail_prob > 0) || !(fail_prob < 1))
        throw input_error(errc::bad_parameter, "fail_prob must lie in (0, 1)");
    if (!(delta > 0))
        throw input_error(errc::bad_parameter, "delta must be positive");
    ledger.add_qmf(ctx.vertex_count(), fail_prob);

    QmfResult out;
    ArgmaxResult top = exact_argmax(ctx, w, w_sum);
    if (rng_unit(rng) < fail_prob) {
        out.failed = true;
        out.vertex = static_cast<int64_t>(rng_below(rng, ctx.vertex_count()));
        out.value = eval_f(ctx, w, out.vertex) / w_sum;
    } else {
        out.vertex = top.vertex;
        out.value = top.value;
    }
    double grid = delta / 2;
    out.quantized_value = std::floor(out.value / grid) * grid;
    out.accepted = out.quantized_value >= -grid;
    return out;
}

FeasibilityOracle oracle_for_mwum(const SigmaContext& ctx, const OracleStrategy& strategy,
                                  double delta, std::mt19937_64& rng, QueryLedger& ledger) {
    if (strategy.kind == StrategyKind::exact_scan) {
        return [&ctx, &ledger, delta](std::span<const double> w, double w_sum,
                                      int64_t) -> OracleDecision {
            ledger.add_scan(ctx.vertex_count());
            ArgmaxResult top = exact_argmax(ctx, w, w_sum);
            OracleDecision dec;
            dec.value = top.value;
            if (top.value >= -delta) {
                dec.feasible = true;
                dec.token = top.vertex;
                dec.residual = residuals(ctx, top.vertex);
            }
            return dec;
        };
    }
    double p = strategy.fail_prob;
    return [&ctx, &rng, &ledger, delta, p](std::span<const double> w, double w_sum,
                                           int64_t) -> OracleDecision {
        QmfResult q = simulated_qmf(ctx, w, w_sum, delta, p, rng, ledger);
        OracleDecision dec;
        dec.value = q.value;
        if (q.accepted) {
            dec.feasible = true;
            dec.token = q.vertex;
            dec.residual = residuals(ctx, q.vertex);
        }
        return dec;
    };
}

AveragedSolution accumulate(const SigmaContext& ctx, const FeasibilityOutcome& outcome) {
    AveragedSolution avg;
    avg.sigma = static_cast<int64_t>(ctx.sigma);
    avg.rounds = outcome.rounds_executed;
    avg.vertex_counts = outcome.token_counts;
    return avg;
}

double lambda_value(const SigmaContext& ctx, const AveragedSolution& avg, int64_t vertex) {
    for (auto [v, c] : avg.vertex_counts)
        if (v == vertex)
            return ctx.v_mass[vertex] * static_cast<double>(c) / static_cast<double>(avg.rounds);
    return 0.0;
}

std::vector<double> lambda_at_start(const SigmaContext& ctx, const AveragedSolution& avg) {
    std::vector<double> out(static_cast<std::size_t>(ctx.inst->num_actions), 0.0);
    for (auto [v, c] : avg.vertex_counts) {
        if (ctx.v_state[v] != ctx.inst->initial_state || ctx.v_time[v] != 0) continue;
        out[ctx.v_action[v]] +=
            ctx.v_mass[v] * static_cast<double>(c) / static_cast<double>(avg.rounds);
    }
    return out;
}

DualCheck check_dual_feasibility(const SigmaContext& ctx, const AveragedSolution& avg,
                                 double delta) {
    std::vector<double> residual(static_cast<std::size_t>(ctx.num_constraints), 0.0);
    residual[ctx.budget_index] = 1.0;
    double mass_total = 0;
    for (auto [v, c] : avg.vertex_counts) {
        if (v < 0 || v >= ctx.vertex_count())
            throw input_error(errc::bad_parameter, "vertex out of range");
        double x = ctx.v_mass[v] * static_cast<double>(c) / static_cast<double>(avg.rounds);
        const Transition& tr = ctx.inst->at(
            ctx.inst->time_dependent ? ctx.v_time[v] : 0, ctx.v_state[v], ctx.v_action[v]);
        mass_total += x * static_cast<double>(tr.reward);
        residual[ctx.v_own[v]] -= x;
        if (ctx.v_succ[v] >= 0) residual[ctx.v_succ[v]] += x;
    }
    if (std::abs(mass_total - ctx.sigma) > 1e-9)
        throw solver_negative(errc::not_on_simplex, "objective mass of the point is not sigma");

    DualCheck out;
    out.min_residual = std::numeric_limits<double>::infinity();
    for (int32_t i = 0; i < ctx.num_constraints; ++i) {
        if (residual[i] < out.min_residual) { out.min_residual = residual[i]; out.worst_row = i; }
    }
    out.ok = out.min_residual >= -delta - 1e-9;
    return out;
}

} // namespace mwdp

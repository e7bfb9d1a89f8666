#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mwdp/instance.hpp"
#include "mwdp/mwum.hpp"

namespace mwdp {

/// Geometry of the dual feasibility question at one objective level sigma.
///
/// Constraints: one budget row for the start pair plus one flow row per
/// other (state, time) pair; when the instance is layered the time index is
/// dropped and rows exist only for states in layers [0, horizon). Candidate
/// points are the simplex vertices putting all objective mass sigma on a
/// single (state, action, time) coordinate, i.e. mass sigma / reward there.
///
/// Vertex order is lexicographic in (s, a, t) (general) or (s, a) (layered);
/// scans and tie-breaks follow this order.
struct SigmaContext {
    const DpInstance* inst = nullptr;
    double sigma = 0;
    double ell = 0; // 2 * sigma
    bool layered = false;
    int32_t num_constraints = 0;
    int32_t budget_index = 0;

    // per-vertex tables
    std::vector<int32_t> v_state, v_action, v_time;
    std::vector<double> v_mass;
    std::vector<int32_t> v_own;  // constraint owned by the vertex's (s, t)
    std::vector<int32_t> v_succ; // successor constraint, -1 when none binds

    // constraint indexing
    std::vector<int32_t> state_cindex; // layered: state -> row, -1 when none

    int64_t vertex_count() const { return static_cast<int64_t>(v_state.size()); }

    /// Row of constraint (s, t): t * num_states + s in general mode; the
    /// state's dense row in layered mode (t must be the state's layer).
    int32_t constraint_index(int32_t s, int32_t t) const;
};

/// Builds the vertex and constraint tables for integer 1 <= sigma <= rho.
/// Throws input_error(sigma_out_of_range) outside that range.
SigmaContext make_sigma_context(const DpInstance& inst, int64_t sigma, int64_t rho);

/// Weighted residual of one vertex against weights w (indexed by constraint
/// row, non-negative, not necessarily normalized):
///   w[budget] + mass * (w[succ] - w[own])
/// which equals the dot product of w with the vertex's residual vector.
double eval_f(const SigmaContext& ctx, std::span<const double> w, int64_t vertex);

/// Sparse residual A x - b of the vertex's simplex point: +1 on the budget
/// row, -mass on the owned row (merged when they coincide), +mass on the
/// successor row when one binds.
std::vector<std::pair<int32_t, double>> residuals(const SigmaContext& ctx, int64_t vertex);

struct ArgmaxResult {
    int64_t vertex = -1;
    double value = 0; // normalized: computed against w / sum(w)
};

/// Full scan over all vertices; first vertex in scan order wins ties.
ArgmaxResult exact_argmax(const SigmaContext& ctx, std::span<const double> w, double w_sum);

enum class StrategyKind { exact_scan, simulated_qmf };

/// How the per-round inner maximization runs. ExactScan always returns the
/// true argmax and accepts iff its value is >= -delta. SimulatedQmf models a
/// quantum minimum-finding call: with probability fail_prob the candidate is
/// a uniformly random vertex instead of the argmax, the candidate's value is
/// floored to the grid delta/2, and the round accepts iff the floored value
/// is >= -delta/2 (which certifies a true value >= -delta).
struct OracleStrategy {
    StrategyKind kind = StrategyKind::exact_scan;
    double fail_prob = 1e-3; // simulated_qmf only, in (0, 1)
    uint64_t seed = 0;       // used when a strategy-owned stream is needed
};

/// Query accounting. A simulated QMF run books ceil(sqrt(N)) iterations
/// amplified by ceil(log2(1/fail_prob)); an exact scan books N evaluations.
struct QueryLedger {
    int64_t qmf_runs = 0;
    int64_t modeled_queries = 0;
    int64_t scan_evaluations = 0;

    void add_qmf(int64_t vertex_count, double fail_prob);
    void add_scan(int64_t vertex_count);
    QueryLedger& operator+=(const QueryLedger& other);
};

int64_t modeled_queries_per_run(int64_t vertex_count, double fail_prob);

struct QmfResult {
    bool accepted = false;
    int64_t vertex = -1;
    double value = 0;           // true normalized value of the candidate
    double quantized_value = 0; // floored to the delta/2 grid
    bool failed = false;        // the candidate came from the failure branch
};

/// One simulated QMF call at threshold delta. Draws from `rng`; books one
/// run in `ledger`.
QmfResult simulated_qmf(const SigmaContext& ctx, std::span<const double> w, double w_sum,
                        double delta, double fail_prob, std::mt19937_64& rng,
                        QueryLedger& ledger);

/// Adapts a strategy to the feasibility driver's per-round interface. The
/// returned callable holds references: ctx, rng and ledger must outlive it.
FeasibilityOracle oracle_for_mwum(const SigmaContext& ctx, const OracleStrategy& strategy,
                                  double delta, std::mt19937_64& rng, QueryLedger& ledger);

/// Sparse average of the vertices a feasibility run accepted; the implied
/// dual point puts counts/rounds of each vertex's mass on its coordinate.
struct AveragedSolution {
    int64_t sigma = 0;
    int64_t rounds = 0;
    std::vector<std::pair<int64_t, int64_t>> vertex_counts;
};

AveragedSolution accumulate(const SigmaContext& ctx, const FeasibilityOutcome& outcome);

/// lambda value of one coordinate of the averaged point.
double lambda_value(const SigmaContext& ctx, const AveragedSolution& avg, int64_t vertex);

/// lambda at the start pair, one entry per action.
std::vector<double> lambda_at_start(const SigmaContext& ctx, const AveragedSolution& avg);

struct DualCheck {
    bool ok = true;
    double min_residual = 0;
    int32_t worst_row = -1;
};

/// Evaluates every constraint row at the averaged point and verifies
/// residual >= -delta - 1e-9. Throws solver_negative(not_on_simplex) when
/// the point's objective mass is not sigma (tolerance 1e-9).
DualCheck check_dual_feasibility(const SigmaContext& ctx, const AveragedSolution& avg,
                                 double delta);

} // namespace mwdp

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mwdp/errors.hpp"

namespace mwdp {

/// Per-round cost vector handed to the weight update; every entry must lie
/// in [-1, 1] (checked at construction, cost_out_of_range otherwise).
struct CostVector {
    std::vector<double> m;
    explicit CostVector(std::vector<double> entries);
};

/// Expert weights. Stays strictly positive under updates with
/// epsilon <= 1/2: each factor 1 - epsilon*m_i is >= 1/2.
struct WeightState {
    std::vector<double> w;
    int64_t round = 0;

    explicit WeightState(int32_t n) : w(static_cast<std::size_t>(n), 1.0) {}
    double sum() const;
    std::vector<double> distribution() const; // w / sum(w)
};

/// One multiplicative step: w_i <- w_i * (1 - epsilon * m_i).
/// epsilon must lie in (0, 1/2]; dimensions must agree.
WeightState mw_update(const WeightState& s, const CostVector& m, double epsilon);

/// A recorded run: the distribution announced each round and the cost vector
/// then observed.
struct GenericTranscript {
    struct Round {
        std::vector<double> p;
        std::vector<double> m;
    };
    std::vector<Round> rounds;
};

using CostSource = std::function<std::vector<double>(int64_t round, std::span<const double> p)>;

/// Runs the generic experts loop for `rounds` rounds over n experts and
/// records every (p, m) pair.
GenericTranscript mw_run_generic(int32_t n, double epsilon, const CostSource& costs,
                                 int64_t rounds);

/// Audit of the guarantee
///   sum_t p.m  <=  sum_t m_i + epsilon * sum_t |m_i| + ln(n)/epsilon
/// for every expert i, at tolerance 1e-9. Also replays the weight dynamics
/// from the recorded costs and reports how far the recorded distributions
/// drift from the replay (a fabricated transcript shows up here).
struct RegretAuditResult {
    bool pass = true;
    double worst_margin = 0;     // min over experts of (rhs_i - lhs)
    int32_t worst_expert = -1;
    bool p_consistent = true;    // recorded p matches replay within 1e-9
    double max_p_deviation = 0;
};

RegretAuditResult regret_audit(const GenericTranscript& tr, double epsilon, int32_t n);

/// Parameters for a feasibility run, from the driver analysis: with
/// epsilon = delta/(6*ell) and rounds = ceil(18*ell^2*ln(s)/delta^2) the
/// averaged iterate lands within delta of every constraint. The exact
/// variant (a comparison switch) uses delta/(4*ell) and 8*ell^2*ln(s)/delta^2
/// and requires ell >= delta/2 instead of delta/3.
struct FeasibilityConfig {
    double delta = 0;
    double ell = 0;
    int64_t num_constraints = 0;
    double epsilon = 0;
    int64_t rounds = 0;       // always >= 1
    bool exact_variant = false;
};

FeasibilityConfig compute_config(double delta, double ell, int64_t num_constraints,
                                 bool exact_variant = false);

/// What the per-round oracle reports back. On `feasible` the driver needs a
/// caller-meaningful token for averaging, the normalized weighted residual
/// `value` of the returned point (its own acceptance evidence), and the
/// sparse residual vector A x - b used to build the cost vector.
struct OracleDecision {
    bool feasible = false;
    int64_t token = -1;
    double value = 0;
    std::vector<std::pair<int32_t, double>> residual;
};

/// The oracle sees the current weights plus their sum (i.e. the normalized
/// distribution, factored to spare a divide per constraint per round).
using FeasibilityOracle =
    std::function<OracleDecision(std::span<const double> w, double w_sum, int64_t round)>;

struct FeasibilityTranscript {
    bool record_p = false;
    struct Round {
        int64_t round = 0;
        int64_t token = -1;
        double value = 0;
        std::vector<std::pair<int32_t, double>> m_sparse;
        bool accepted = true;
        std::vector<double> p; // only when record_p
    };
    std::vector<Round> rounds;
};

/// Result of a feasibility run. On success `token_counts` histograms the
/// oracle's accepted tokens over all executed rounds; the average solution
/// is counts/rounds. On declared infeasibility the distribution that
/// witnessed it is kept as the certificate.
struct FeasibilityOutcome {
    bool feasible = false;
    std::vector<std::pair<int64_t, int64_t>> token_counts; // token -> rounds chosen
    int64_t rounds_executed = 0;
    std::vector<double> certificate; // distribution at the declaring round
    int64_t infeasible_round = -1;
    std::optional<FeasibilityTranscript> transcript;
};

struct FeasibilityRunOptions {
    std::optional<int64_t> rounds_override; // forfeits the guarantee when used
    bool record_transcript = false;
    bool record_p = false;
};

/// Drives the weight dynamics against the oracle: each accepted round
/// contributes its token to the average and its residual, scaled by 1/ell,
/// to the costs; a declared-infeasible round stops everything and surrenders
/// the current distribution. Every accepted round must satisfy
/// p . (A x - b) >= -delta (throws residual_exceeds_ell when a residual
/// entry exceeds ell in magnitude, solver-side contract).
FeasibilityOutcome run_feasibility(const FeasibilityConfig& cfg, const FeasibilityOracle& oracle,
                                   const FeasibilityRunOptions& opts = {});

} // namespace mwdp

#include "mwdp/mwum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mwdp {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0) || epsilon > 0.5)
        throw input_error(errc::epsilon_out_of_range, "epsilon must lie in (0, 1/2]");
}

} // namespace

CostVector::CostVector(std::vector<double> entries) : m(std::move(entries)) {
    for (double x : m)
        if (!(std::abs(x) <= 1.0 + 1e-12))
            throw input_error(errc::cost_out_of_range, "cost entries must lie in [-1, 1]");
}

double WeightState::sum() const {
    double s = 0;
    for (double x : w) s += x;
    return s;
}

std::vector<double> WeightState::distribution() const {
    double s = sum();
    std::vector<double> p(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) p[i] = w[i] / s;
    return p;
}

WeightState mw_update(const WeightState& s, const CostVector& m, double epsilon) {
    check_epsilon(epsilon);
    if (m.m.size() != s.w.size())
        throw input_error(errc::dimension_mismatch, "cost vector size != number of experts");
    WeightState out = s;
    for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] = s.w[i] * (1.0 - epsilon * m.m[i]);
    out.round = s.round + 1;
    return out;
}

GenericTranscript mw_run_generic(int32_t n, double epsilon, const CostSource& costs,
                                 int64_t rounds) {
    check_epsilon(epsilon);
    if (n < 1) throw input_error(errc::bad_parameter, "need at least one expert");
    GenericTranscript tr;
    tr.rounds.reserve(static_cast<std::size_t>(rounds));
    WeightState st(n);
    for (int64_t k = 0; k < rounds; ++k) {
        GenericTranscript::Round rec;
        rec.p = st.distribution();
        rec.m = costs(k, rec.p);
        CostVector cv(rec.m);
        if (static_cast<int32_t>(rec.m.size()) != n)
            throw input_error(errc::dimension_mismatch, "cost source emitted wrong width");
        st = mw_update(st, cv, epsilon);
        tr.rounds.push_back(std::move(rec));
    }
    return tr;
}

RegretAuditResult regret_audit(const GenericTranscript& tr, double epsilon, int32_t n) {
    check_epsilon(epsilon);
    if (n < 1) throw input_error(errc::bad_parameter, "need at least one expert");
    RegretAuditResult out;
    double lhs = 0;
    std::vector<double> sum_m(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sum_abs(static_cast<std::size_t>(n), 0.0);
    std::vector<double> replay(static_cast<std::size_t>(n), 1.0);
    for (const auto& r : tr.rounds) {
        if (static_cast<int32_t>(r.p.size()) != n || static_cast<int32_t>(r.m.size()) != n)
            throw input_error(errc::dimension_mismatch, "transcript width != number of experts");
        double rs = 0;
        for (double x : replay) rs += x;
        for (int32_t i = 0; i < n; ++i) {
            double dev = std::abs(r.p[i] - replay[i] / rs);
            out.max_p_deviation = std::max(out.max_p_deviation, dev);
            lhs += r.p[i] * r.m[i];
            sum_m[i] += r.m[i];
            sum_abs[i] += std::abs(r.m[i]);
            replay[i] *= 1.0 - epsilon * r.m[i];
        }
    }
    out.p_consistent = out.max_p_deviation <= 1e-9;
    double log_n = std::log(static_cast<double>(n));
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (int32_t i = 0; i < n; ++i) {
        double rhs = sum_m[i] + epsilon * sum_abs[i] + log_n / epsilon;
        double margin = rhs - lhs;
        if (margin < out.worst_margin) { out.worst_margin = margin; out.worst_expert = i; }
        if (margin < -1e-9) out.pass = false;
    }
    return out;
}

FeasibilityConfig compute_config(double delta, double ell, int64_t num_constraints,
                                 bool exact_variant) {
    if (!(delta > 0))
        throw input_error(errc::bad_parameter, "delta must be positive");
    if (num_constraints < 1)
        throw input_error(errc::bad_parameter, "need at least one constraint");
    double floor = exact_variant ? delta / 2 : delta / 3;
    if (!(ell >= floor))
        throw input_error(errc::ell_too_small, "width ell below the driver hypothesis");
    FeasibilityConfig cfg;
    cfg.delta = delta;
    cfg.ell = ell;
    cfg.num_constraints = num_constraints;
    cfg.exact_variant = exact_variant;
    double log_s = std::log(static_cast<double>(num_constraints));
    if (exact_variant) {
        cfg.epsilon = delta / (4 * ell);
        cfg.rounds = static_cast<int64_t>(std::ceil(8 * ell * ell * log_s / (delta * delta)));
    } else {
        cfg.epsilon = delta / (6 * ell);
        cfg.rounds = static_cast<int64_t>(std::ceil(18 * ell * ell * log_s / (delta * delta)));
    }
    cfg.rounds = std::max<int64_t>(cfg.rounds, 1);
    return cfg;
}

FeasibilityOutcome run_feasibility(const FeasibilityConfig& cfg, const FeasibilityOracle& oracle,
                                   const FeasibilityRunOptions& opts) {
    check_epsilon(cfg.epsilon);
    int64_t rounds = opts.rounds_override.value_or(cfg.rounds);
    if (rounds < 1) throw input_error(errc::bad_parameter, "rounds override must be >= 1");
    std::size_t s = static_cast<std::size_t>(cfg.num_constraints);

    std::vector<double> w(s, 1.0);
    double w_sum = static_cast<double>(s);
    FeasibilityOutcome out;
    std::map<int64_t, int64_t> counts;
    if (opts.record_transcript) {
        out.transcript.emplace();
        out.transcript->record_p = opts.record_p;
    }

    for (int64_t k = 0; k < rounds; ++k) {
        OracleDecision dec = oracle(std::span<const double>(w.data(), s), w_sum, k);
        if (!dec.feasible) {
            out.feasible = false;
            out.infeasible_round = k;
            out.certificate.resize(s);
            for (std::size_t i = 0; i < s; ++i) out.certificate[i] = w[i] / w_sum;
            out.rounds_executed = k;
            if (out.transcript) {
                FeasibilityTranscript::Round rec;
                rec.round = k;
                rec.accepted = false;
                rec.value = dec.value;
                if (opts.record_p) rec.p = out.certificate;
                out.transcript->rounds.push_back(std::move(rec));
            }
            return out;
        }
        // Oracle contract: the accepted point is within delta on the
        // weighted residual, so p.m >= -delta/ell holds round by round.
        if (!(dec.value >= -cfg.delta - 1e-12))
            throw solver_negative(errc::residual_exceeds_ell,
                                  "oracle accepted a point below the delta threshold");
        counts[dec.token] += 1;
        FeasibilityTranscript::Round rec;
        if (out.transcript) {
            rec.round = k;
            rec.token = dec.token;
            rec.value = dec.value;
            rec.accepted = true;
            if (opts.record_p) {
                rec.p.resize(s);
                for (std::size_t i = 0; i < s; ++i) rec.p[i] = w[i] / w_sum;
            }
        }
        for (auto [i, r] : dec.residual) {
            if (i < 0 || static_cast<std::size_t>(i) >= s)
                throw input_error(errc::dimension_mismatch, "residual index out of range");
            double mi = r / cfg.ell;
            if (!(std::abs(mi) <= 1.0 + 1e-12))
                throw solver_negative(errc::residual_exceeds_ell,
                                      "residual entry larger than the width bound");
            if (out.transcript) rec.m_sparse.emplace_back(i, mi);
            double before = w[i];
            w[i] = before * (1.0 - cfg.epsilon * mi);
            w_sum += w[i] - before;
        }
        if (out.transcript) out.transcript->rounds.push_back(std::move(rec));
        // Guard the running sum against drift and the weights against
        // under/overflow on long runs; rescaling leaves the distribution,
        // and hence every decision, unchanged.
        if ((k & 1023) == 1023 || w_sum < 1e-140 || w_sum > 1e140) {
            double fresh = 0;
            for (double x : w) fresh += x;
            if (fresh < 1e-140 || fresh > 1e140) {
                for (double& x : w) x /= fresh;
                fresh = 0;
                for (double x : w) fresh += x;
            }
            w_sum = fresh;
        }
    }
    out.feasible = true;
    out.rounds_executed = rounds;
    out.token_counts.assign(counts.begin(), counts.end());
    return out;
}

} // namespace mwdp

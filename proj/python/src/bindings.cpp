#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mwdp/bellman.hpp"
#include "mwdp/cli.hpp"
#include "mwdp/encoders.hpp"
#include "mwdp/generators.hpp"
#include "mwdp/instance.hpp"
#include "mwdp/io.hpp"
#include "mwdp/mwum.hpp"
#include "mwdp/solver.hpp"
#include "mwdp/verify.hpp"

namespace py = pybind11;
using namespace mwdp;

namespace {

SolveConfig config_from_kwargs(const std::string& strategy, std::optional<double> delta,
                               std::optional<int64_t> rho, uint64_t seed,
                               std::optional<int64_t> rounds_override, bool exact_variant,
                               std::optional<double> fail_prob, int32_t escalation_limit) {
    SolveConfig cfg;
    if (strategy == "qmf")
        cfg.strategy.kind = StrategyKind::simulated_qmf;
    else if (strategy == "exact")
        cfg.strategy.kind = StrategyKind::exact_scan;
    else
        throw input_error(errc::bad_parameter, "strategy must be 'exact' or 'qmf'");
    cfg.delta = delta;
    cfg.rho_override = rho;
    cfg.seed = seed;
    cfg.rounds_override = rounds_override;
    cfg.exact_variant = exact_variant;
    cfg.qmf_fail_prob = fail_prob;
    cfg.escalation_limit = escalation_limit;
    return cfg;
}

std::vector<std::vector<int64_t>> value_rows(const DpInstance& inst, const ValueTable& v) {
    std::vector<std::vector<int64_t>> rows;
    for (int32_t t = 0; t <= inst.horizon; ++t) {
        std::vector<int64_t> row;
        for (int32_t s = 0; s < inst.num_states; ++s) row.push_back(v.at(t, s));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::vector<int32_t>> policy_rows(const DpInstance& inst, const Policy& p) {
    std::vector<std::vector<int32_t>> rows;
    for (int32_t t = 0; t < inst.horizon; ++t) {
        std::vector<int32_t> row;
        for (int32_t s = 0; s < inst.num_states; ++s) row.push_back(p.at(t, s));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-horizon DP solving via multiplicative weights on the dual LP";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<solver_negative>(m, "SolverNegative", PyExc_RuntimeError);

    py::class_<DpInstance>(m, "DpInstance")
        .def_readonly("num_states", &DpInstance::num_states)
        .def_readonly("num_actions", &DpInstance::num_actions)
        .def_readonly("horizon", &DpInstance::horizon)
        .def_readonly("initial_state", &DpInstance::initial_state)
        .def_readonly("time_dependent", &DpInstance::time_dependent)
        .def_readonly("layered", &DpInstance::layered)
        .def_readonly("reward_bound", &DpInstance::reward_bound)
        .def_readonly("reward_shift", &DpInstance::reward_shift)
        .def("at",
             [](const DpInstance& inst, int32_t t, int32_t s, int32_t a) {
                 if (t < 0 || t >= inst.horizon || s < 0 || s >= inst.num_states ||
                     a < 0 || a >= inst.num_actions)
                     throw input_error(errc::bad_parameter, "transition index out of range");
                 const Transition& tr = inst.at(t, s, a);
                 return py::make_tuple(tr.next, tr.reward);
             },
             py::arg("t"), py::arg("s"), py::arg("a"),
             "(next_state, reward) for one transition")
        .def("__repr__", [](const DpInstance& inst) {
            std::ostringstream os;
            os << "DpInstance(states=" << inst.num_states << ", actions="
               << inst.num_actions << ", horizon=" << inst.horizon << ")";
            return os.str();
        });

    m.def("make_instance",
          [](int32_t num_states, int32_t num_actions, int32_t horizon,
             int32_t initial_state, bool time_dependent,
             const std::vector<std::pair<int32_t, int64_t>>& transitions,
             std::optional<std::vector<int32_t>> layer_of,
             std::optional<int64_t> reward_bound) {
              InstanceData d;
              d.num_states = num_states;
              d.num_actions = num_actions;
              d.horizon = horizon;
              d.initial_state = initial_state;
              d.time_dependent = time_dependent;
              if (layer_of) {
                  d.layered = true;
                  d.layer_of = *layer_of;
              }
              d.reward_bound = reward_bound;
              for (auto& [next, reward] : transitions) d.transitions.push_back({next, reward});
              return validate_instance(d);
          },
          py::arg("num_states"), py::arg("num_actions"), py::arg("horizon"),
          py::arg("initial_state") = 0, py::arg("time_dependent") = false,
          py::arg("transitions") = std::vector<std::pair<int32_t, int64_t>>{},
          py::arg("layer_of") = py::none(), py::arg("reward_bound") = py::none(),
          "Validate a flat (next, reward) transition table into an instance");

    m.def("load_instance", &load_instance_json, py::arg("text"));
    m.def("load_instance_file", &load_instance_file, py::arg("path"));
    m.def("save_instance", &save_instance_json, py::arg("instance"));

    m.def("gen_random",
          [](int32_t states, int32_t actions, int32_t horizon, int64_t reward_max,
             bool time_dependent, uint64_t seed) {
              RandomInstanceParams p;
              p.num_states = states;
              p.num_actions = actions;
              p.horizon = horizon;
              p.reward_max = reward_max;
              p.time_dependent = time_dependent;
              p.seed = seed;
              return gen_random_instance(p);
          },
          py::arg("states"), py::arg("actions"), py::arg("horizon"),
          py::arg("reward_max") = 3, py::arg("time_dependent") = false,
          py::arg("seed") = 0);

    py::class_<AdversarialPair>(m, "AdversarialPair")
        .def_readonly("instance_1", &AdversarialPair::instance_1)
        .def_readonly("instance_2", &AdversarialPair::instance_2)
        .def_readonly("special_state", &AdversarialPair::special_state)
        .def_readonly("special_action", &AdversarialPair::special_action)
        .def_readonly("tree_depth", &AdversarialPair::tree_depth);

    m.def("gen_adversarial",
          [](int32_t n, int32_t horizon, int32_t actions, uint64_t seed,
             std::optional<int32_t> special_state, std::optional<int32_t> special_action) {
              AdversarialParams p;
              p.n = n;
              p.horizon = horizon;
              p.num_actions = actions;
              p.seed = seed;
              p.special_state = special_state;
              p.special_action = special_action;
              return gen_adversarial_pair(p);
          },
          py::arg("n"), py::arg("horizon"), py::arg("actions") = 3, py::arg("seed") = 0,
          py::arg("special_state") = py::none(), py::arg("special_action") = py::none(),
          "Two instances differing at a single hidden (state, action)");

    m.def("bellman",
          [](const DpInstance& inst) {
              BellmanResult res = bellman_solve(inst);
              py::dict d;
              d["v_star"] = res.v_star;
              d["values"] = value_rows(inst, res.values);
              d["policy"] = policy_rows(inst, res.policy);
              d["optimal_start_actions"] =
                  optimal_action_set(inst, inst.initial_state, 0);
              return d;
          },
          py::arg("instance"), "Exact backward induction");

    py::class_<QueryLedger>(m, "QueryLedger")
        .def_readonly("qmf_runs", &QueryLedger::qmf_runs)
        .def_readonly("modeled_queries", &QueryLedger::modeled_queries)
        .def_readonly("scan_evaluations", &QueryLedger::scan_evaluations);

    py::class_<ProbeStats>(m, "ProbeStats")
        .def_readonly("sigma", &ProbeStats::sigma)
        .def_readonly("rounds_planned", &ProbeStats::rounds_planned)
        .def_readonly("rounds_executed", &ProbeStats::rounds_executed)
        .def_readonly("feasible", &ProbeStats::feasible);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("sigma_bar", &SolveReport::sigma_bar)
        .def_readonly("chosen_action", &SolveReport::chosen_action)
        .def_readonly("lambda_at_start_pair", &SolveReport::lambda_at_start_pair)
        .def_readonly("delta_used", &SolveReport::delta_used)
        .def_readonly("escalations", &SolveReport::escalations)
        .def_readonly("rounds_per_probe", &SolveReport::rounds_per_probe)
        .def_readonly("bisection_steps", &SolveReport::bisection_steps)
        .def_readonly("total_rounds", &SolveReport::total_rounds)
        .def_readonly("ledger", &SolveReport::ledger)
        .def_readonly("certified", &SolveReport::certified)
        .def_readonly("fallback_used", &SolveReport::fallback_used)
        .def_readonly("wallclock_ms", &SolveReport::wallclock_ms)
        .def_readonly("probes", &SolveReport::probes)
        .def("json", [](const SolveReport& rep) { return report_json(rep); });

    m.def("solve",
          [](const DpInstance& inst, const std::string& strategy,
             std::optional<double> delta, std::optional<int64_t> rho, uint64_t seed,
             std::optional<int64_t> rounds_override, bool exact_variant,
             std::optional<double> fail_prob, int32_t escalation_limit) {
              return solve_dp(inst, config_from_kwargs(strategy, delta, rho, seed,
                                                       rounds_override, exact_variant,
                                                       fail_prob, escalation_limit));
          },
          py::arg("instance"), py::arg("strategy") = "exact",
          py::arg("delta") = py::none(), py::arg("rho") = py::none(),
          py::arg("seed") = 0, py::arg("rounds_override") = py::none(),
          py::arg("exact_variant") = false, py::arg("fail_prob") = py::none(),
          py::arg("escalation_limit") = 3,
          "Objective bisection over feasibility runs, then action extraction");

    py::class_<TraceStep>(m, "TraceStep")
        .def_readonly("state", &TraceStep::state)
        .def_readonly("time", &TraceStep::time)
        .def_readonly("action", &TraceStep::action)
        .def_readonly("reward", &TraceStep::reward);

    py::class_<PolicyTrace>(m, "PolicyTrace")
        .def_readonly("steps", &PolicyTrace::steps)
        .def_readonly("total_reward", &PolicyTrace::total_reward)
        .def_readonly("total_reward_unshifted", &PolicyTrace::total_reward_unshifted);

    m.def("solve_policy",
          [](const DpInstance& inst, const std::string& strategy,
             std::optional<double> delta, std::optional<int64_t> rho, uint64_t seed,
             std::optional<int64_t> rounds_override, bool exact_variant,
             std::optional<double> fail_prob, int32_t escalation_limit) {
              return solve_policy(inst, config_from_kwargs(strategy, delta, rho, seed,
                                                           rounds_override, exact_variant,
                                                           fail_prob, escalation_limit));
          },
          py::arg("instance"), py::arg("strategy") = "exact",
          py::arg("delta") = py::none(), py::arg("rho") = py::none(),
          py::arg("seed") = 0, py::arg("rounds_override") = py::none(),
          py::arg("exact_variant") = false, py::arg("fail_prob") = py::none(),
          py::arg("escalation_limit") = 3,
          "Full trajectory by re-solving the suffix problem each step");

    m.def("rollout", &rollout_policy, py::arg("instance"),
          "Trajectory of the exact backward-induction policy");

    py::class_<IterationBoundReport>(m, "IterationBoundReport")
        .def_readonly("delta", &IterationBoundReport::delta)
        .def_readonly("ell", &IterationBoundReport::ell)
        .def_readonly("num_constraints", &IterationBoundReport::num_constraints)
        .def_readonly("vertex_count", &IterationBoundReport::vertex_count)
        .def_readonly("rounds_per_probe", &IterationBoundReport::rounds_per_probe)
        .def_readonly("probes", &IterationBoundReport::probes)
        .def_readonly("planned_rounds", &IterationBoundReport::planned_rounds)
        .def_readonly("qmf_fail_prob", &IterationBoundReport::qmf_fail_prob)
        .def_readonly("modeled_queries", &IterationBoundReport::modeled_queries)
        .def_readonly("scan_evaluations", &IterationBoundReport::scan_evaluations);

    m.def("iteration_bounds",
          [](const DpInstance& inst, std::optional<double> delta,
             std::optional<int64_t> rho, bool exact_variant) {
              SolveConfig cfg;
              cfg.delta = delta;
              cfg.rho_override = rho;
              cfg.exact_variant = exact_variant;
              return iteration_bound_report(inst, cfg);
          },
          py::arg("instance"), py::arg("delta") = py::none(), py::arg("rho") = py::none(),
          py::arg("exact_variant") = false,
          "Planned iteration and query counts without running anything");

    m.def("mw_update",
          [](const std::vector<double>& w, const std::vector<double>& costs, double eps) {
              WeightState s(static_cast<int32_t>(w.size()));
              s.w = w;
              return mw_update(s, CostVector(costs), eps).w;
          },
          py::arg("w"), py::arg("costs"), py::arg("epsilon"),
          "One multiplicative step w_i * (1 - epsilon * m_i)");

    m.def("feasibility_constants",
          [](double delta, double ell, int64_t num_constraints, bool exact_variant) {
              FeasibilityConfig fc =
                  compute_config(delta, ell, num_constraints, exact_variant);
              return py::make_tuple(fc.epsilon, fc.rounds);
          },
          py::arg("delta"), py::arg("ell"), py::arg("num_constraints"),
          py::arg("exact_variant") = false, "(epsilon, rounds) for a feasibility run");

    py::class_<TspGraph>(m, "TspGraph")
        .def(py::init([](int32_t n, int64_t cost_bound,
                         std::vector<std::vector<int64_t>> costs) {
                 TspGraph g;
                 g.n = n;
                 g.cost_bound = cost_bound;
                 g.costs = std::move(costs);
                 return g;
             }),
             py::arg("n"), py::arg("cost_bound"), py::arg("costs"))
        .def_readonly("n", &TspGraph::n)
        .def_readonly("cost_bound", &TspGraph::cost_bound)
        .def_readonly("costs", &TspGraph::costs);

    py::class_<TspSolution>(m, "TspSolution")
        .def_readonly("tour", &TspSolution::tour)
        .def_readonly("cost", &TspSolution::cost);

    m.def("load_tsp", &load_tsp_json, py::arg("text"));
    m.def("save_tsp", &save_tsp_json, py::arg("graph"));
    m.def("tsp_brute", &brute_force_tsp, py::arg("graph"),
          "Exhaustive minimum over all tours");
    m.def("tsp_instance",
          [](const TspGraph& g) { return encode_tsp(g).instance; }, py::arg("graph"),
          "The layered DP the tour problem encodes into");
    m.def("tsp_bellman",
          [](const TspGraph& g) {
              TspEncoding enc = encode_tsp(g);
              return decode_tsp(enc, rollout_policy(enc.instance));
          },
          py::arg("graph"), "Optimal tour via the encoding and exact induction");
    m.def("tsp_mwum",
          [](const TspGraph& g, const std::string& strategy, std::optional<double> delta,
             uint64_t seed, std::optional<int64_t> rounds_override) {
              TspEncoding enc = encode_tsp(g);
              SolveConfig cfg = config_from_kwargs(strategy, delta, {}, seed,
                                                   rounds_override, false, {}, 3);
              SolveReport rep = solve_dp(enc.instance, cfg);
              // the answer lives in the decoded policy, not in sigma_bar
              TspSolution sol = decode_tsp(enc, solve_policy(enc.instance, cfg));
              return py::make_tuple(sol.cost, rep);
          },
          py::arg("graph"), py::arg("strategy") = "exact", py::arg("delta") = py::none(),
          py::arg("seed") = 0, py::arg("rounds_override") = py::none(),
          "(tour cost, report) from the iterative pipeline");

    py::class_<MscInstance>(m, "MscInstance")
        .def(py::init([](int32_t universe_size, std::vector<std::vector<int32_t>> sets) {
                 MscInstance in;
                 in.universe_size = universe_size;
                 in.sets = std::move(sets);
                 return in;
             }),
             py::arg("universe_size"), py::arg("sets"))
        .def_readonly("universe_size", &MscInstance::universe_size)
        .def_readonly("sets", &MscInstance::sets);

    py::class_<MscSolution>(m, "MscSolution")
        .def_readonly("covered", &MscSolution::covered)
        .def_readonly("chosen", &MscSolution::chosen)
        .def_readonly("size", &MscSolution::size);

    m.def("load_msc", &load_msc_json, py::arg("text"));
    m.def("save_msc", &save_msc_json, py::arg("instance"));
    m.def("msc_brute", &brute_force_msc, py::arg("instance"),
          "Exhaustive minimum over all subfamilies");
    m.def("msc_instance",
          [](const MscInstance& in) { return encode_msc(in).instance; },
          py::arg("instance"), "The layered DP the cover problem encodes into");
    m.def("msc_bellman",
          [](const MscInstance& in) {
              MscEncoding enc = encode_msc(in);
              return decode_msc(enc, rollout_policy(enc.instance));
          },
          py::arg("instance"), "Minimum cover via the encoding and exact induction");
    m.def("msc_mwum",
          [](const MscInstance& in, const std::string& strategy,
             std::optional<double> delta, uint64_t seed,
             std::optional<int64_t> rounds_override) {
              MscEncoding enc = encode_msc(in);
              SolveConfig cfg = config_from_kwargs(strategy, delta, {}, seed,
                                                   rounds_override, false, {}, 3);
              SolveReport rep = solve_dp(enc.instance, cfg);
              // read the cover off the decoded policy, not off sigma_bar
              MscSolution sol = decode_msc(enc, solve_policy(enc.instance, cfg));
              return py::make_tuple(sol.covered, sol.size, rep);
          },
          py::arg("instance"), py::arg("strategy") = "exact",
          py::arg("delta") = py::none(), py::arg("seed") = 0,
          py::arg("rounds_override") = py::none(),
          "(coverable, minimum size, report) from the iterative pipeline");

    m.def("self_check",
          []() {
              std::ostringstream os;
              bool ok = run_verify(os);
              return py::make_tuple(ok, os.str());
          },
          "(all passed, printed matrix) from the quick battery");

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int code = run_cli(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "(exit code, stdout, stderr) of an in-process CLI call");
}

#include "mwdp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mwdp/bellman.hpp"
#include "mwdp/encoders.hpp"
#include "mwdp/generators.hpp"
#include "mwdp/instance.hpp"
#include "mwdp/io.hpp"
#include "mwdp/solver.hpp"
#include "mwdp/verify.hpp"

namespace mwdp {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;

/// Flags shared by every subcommand that runs the iterative solver.
struct SolverFlags {
    std::string strategy = "exact";
    std::optional<double> delta;
    std::optional<int64_t> rho;
    std::optional<uint64_t> seed;
    std::optional<int64_t> rounds_override;
    int32_t escalation_limit = 3;
    bool exact_variant = false;
    std::optional<double> fail_prob;
};

void attach_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--strategy", f.strategy, "inner oracle: exact | qmf")
        ->check(CLI::IsMember({"exact", "qmf"}));
    cmd->add_option("--delta", f.delta, "slack tolerance in (0, 1/2], default 1/(2|A|)");
    cmd->add_option("--rho", f.rho, "override for the objective search upper bound");
    cmd->add_option("--seed", f.seed, "RNG seed (required with --strategy qmf)");
    cmd->add_option("--rounds-override", f.rounds_override,
                    "cap rounds per probe; marks the report non-certified");
    cmd->add_option("--escalation-limit", f.escalation_limit,
                    "tolerance halvings allowed after a failed extraction");
    cmd->add_flag("--exact-variant", f.exact_variant,
                  "use the tighter feasibility constants");
    cmd->add_option("--fail-prob", f.fail_prob,
                    "per-run qmf failure probability override");
}

SolveConfig make_config(const SolverFlags& f) {
    SolveConfig cfg;
    if (f.strategy == "qmf") {
        if (!f.seed)
            throw input_error(errc::bad_parameter,
                              "--seed is required with --strategy qmf");
        cfg.strategy.kind = StrategyKind::simulated_qmf;
    } else {
        cfg.strategy.kind = StrategyKind::exact_scan;
    }
    cfg.delta = f.delta;
    cfg.rho_override = f.rho;
    cfg.seed = f.seed.value_or(0);
    cfg.rounds_override = f.rounds_override;
    cfg.escalation_limit = f.escalation_limit;
    cfg.exact_variant = f.exact_variant;
    cfg.qmf_fail_prob = f.fail_prob;
    return cfg;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw input_error(errc::schema_error, "cannot open for writing: " + path);
    out << text;
}

void print_kv(std::ostream& out, const std::string& key, const std::string& value) {
    out << "  " << std::left << std::setw(18) << key << value << "\n";
}

void print_report_table(std::ostream& out, const SolveReport& rep) {
    print_kv(out, "sigma_bar", std::to_string(rep.sigma_bar));
    print_kv(out, "chosen_action", std::to_string(rep.chosen_action));
    {
        std::ostringstream d;
        d << rep.delta_used;
        print_kv(out, "delta_used", d.str());
    }
    print_kv(out, "escalations", std::to_string(rep.escalations));
    print_kv(out, "rounds_per_probe", std::to_string(rep.rounds_per_probe));
    print_kv(out, "probes", std::to_string(rep.bisection_steps));
    print_kv(out, "total_rounds", std::to_string(rep.total_rounds));
    print_kv(out, "qmf_runs", std::to_string(rep.ledger.qmf_runs));
    print_kv(out, "modeled_queries", std::to_string(rep.ledger.modeled_queries));
    print_kv(out, "scan_evaluations", std::to_string(rep.ledger.scan_evaluations));
    print_kv(out, "certified", rep.certified ? "true" : "false");
    print_kv(out, "fallback_used", rep.fallback_used ? "true" : "false");
    {
        std::ostringstream w;
        w << std::fixed << std::setprecision(2) << rep.wallclock_ms;
        print_kv(out, "wallclock_ms", w.str());
    }
    std::ostringstream lam;
    lam << "[";
    for (std::size_t i = 0; i < rep.lambda_at_start_pair.size(); ++i)
        lam << (i ? ", " : "") << rep.lambda_at_start_pair[i];
    lam << "]";
    print_kv(out, "lambda_at_start", lam.str());
}

void maybe_write_outputs(const SolveReport& rep, const std::string& out_path,
                         const std::string& transcript_path) {
    if (!out_path.empty()) write_text_file(out_path, report_json(rep));
    if (!transcript_path.empty()) {
        if (!rep.transcript)
            throw solver_negative(errc::bad_parameter, "no transcript was recorded");
        std::ofstream os(transcript_path, std::ios::binary);
        if (!os)
            throw input_error(errc::schema_error,
                              "cannot open for writing: " + transcript_path);
        write_transcript_jsonl(*rep.transcript, os);
    }
}

// ---------------------------------------------------------------- gen ----

struct GenFlags {
    std::string type = "random";
    int32_t states = 4;
    int32_t actions = 2;
    int32_t horizon = 3;
    int64_t reward_max = 3;
    bool time_dependent = false;
    int32_t band = 4;
    std::optional<int32_t> special_state;
    std::optional<int32_t> special_action;
    uint64_t seed = 0;
    std::string out_path;
    std::string out2_path;
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
    if (f.type == "random") {
        RandomInstanceParams p;
        p.num_states = f.states;
        p.num_actions = f.actions;
        p.horizon = f.horizon;
        p.reward_max = f.reward_max;
        p.time_dependent = f.time_dependent;
        p.seed = f.seed;
        DpInstance inst = gen_random_instance(p);
        save_instance_file(inst, f.out_path);
        out << "wrote " << f.out_path << ": " << inst.num_states << " states, "
            << inst.num_actions << " actions, horizon " << inst.horizon
            << ", optimal value " << bellman_solve(inst).v_star << "\n";
        return 0;
    }
    if (f.out2_path.empty())
        throw input_error(errc::bad_parameter,
                          "--type adversarial needs --out2 for the second instance");
    AdversarialParams p;
    p.n = f.band;
    p.horizon = f.horizon;
    p.num_actions = f.actions;
    p.seed = f.seed;
    p.special_state = f.special_state;
    p.special_action = f.special_action;
    AdversarialPair pair = gen_adversarial_pair(p);
    save_instance_file(pair.instance_1, f.out_path);
    save_instance_file(pair.instance_2, f.out2_path);
    out << "wrote " << f.out_path << " and " << f.out2_path << ": "
        << pair.instance_1.num_states << " states, differing only at state "
        << pair.special_state << " action " << pair.special_action
        << " (band of " << f.band << " behind a depth-" << pair.tree_depth
        << " routing tree)\n";
    return 0;
}

// ------------------------------------------------------------- bellman ----

int cmd_bellman(const std::string& instance_path, const std::string& format,
                bool dump_tables, std::ostream& out) {
    DpInstance inst = load_instance_file(instance_path);
    BellmanResult res = bellman_solve(inst);
    std::vector<int32_t> opt = optimal_action_set(inst, inst.initial_state, 0);
    if (format == "json") {
        ordered_json j;
        j["v_star"] = res.v_star;
        j["optimal_start_actions"] = opt;
        j["reward_shift"] = inst.reward_shift;
        ordered_json values = ordered_json::array();
        for (int32_t t = 0; t <= inst.horizon; ++t) {
            ordered_json row = ordered_json::array();
            for (int32_t s = 0; s < inst.num_states; ++s) row.push_back(res.values.at(t, s));
            values.push_back(std::move(row));
        }
        j["values"] = std::move(values);
        ordered_json policy = ordered_json::array();
        for (int32_t t = 0; t < inst.horizon; ++t) {
            ordered_json row = ordered_json::array();
            for (int32_t s = 0; s < inst.num_states; ++s) row.push_back(res.policy.at(t, s));
            policy.push_back(std::move(row));
        }
        j["policy"] = std::move(policy);
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "v*(start) = " << res.v_star << "\n";
    out << "optimal start actions:";
    for (int32_t a : opt) out << " " << a;
    out << "\n";
    if (inst.reward_shift != 0)
        out << "reward shift applied: " << inst.reward_shift << " (value of the raw rewards: "
            << res.v_star - inst.reward_shift * static_cast<int64_t>(inst.horizon) << ")\n";
    if (dump_tables) {
        out << "values:\n";
        for (int32_t t = 0; t <= inst.horizon; ++t) {
            out << "  t=" << t << ":";
            for (int32_t s = 0; s < inst.num_states; ++s) out << " " << res.values.at(t, s);
            out << "\n";
        }
        out << "greedy policy:\n";
        for (int32_t t = 0; t < inst.horizon; ++t) {
            out << "  t=" << t << ":";
            for (int32_t s = 0; s < inst.num_states; ++s) out << " " << res.policy.at(t, s);
            out << "\n";
        }
    }
    return 0;
}

// --------------------------------------------------------------- solve ----

int cmd_solve(const std::string& instance_path, const SolverFlags& f,
              const std::string& format, const std::string& out_path,
              const std::string& transcript_path, bool transcript_p, std::ostream& out) {
    DpInstance inst = load_instance_file(instance_path);
    SolveConfig cfg = make_config(f);
    cfg.record_transcript = !transcript_path.empty();
    cfg.record_p = transcript_p;
    SolveReport rep = solve_dp(inst, cfg);
    maybe_write_outputs(rep, out_path, transcript_path);
    if (format == "json")
        out << report_json(rep) << "\n";
    else
        print_report_table(out, rep);
    return 0;
}

// -------------------------------------------------------------- policy ----

int cmd_policy(const std::string& instance_path, const SolverFlags& f,
               const std::string& format, std::ostream& out) {
    DpInstance inst = load_instance_file(instance_path);
    PolicyTrace trace = solve_policy(inst, make_config(f));
    if (format == "json") {
        ordered_json j;
        ordered_json steps = ordered_json::array();
        for (const TraceStep& st : trace.steps)
            steps.push_back({{"time", st.time},
                             {"state", st.state},
                             {"action", st.action},
                             {"reward", st.reward}});
        j["steps"] = std::move(steps);
        j["total_reward"] = trace.total_reward;
        j["total_reward_unshifted"] = trace.total_reward_unshifted;
        out << j.dump(2) << "\n";
        return 0;
    }
    for (const TraceStep& st : trace.steps)
        out << "  t=" << st.time << "  state " << st.state << "  action " << st.action
            << "  reward " << st.reward << "\n";
    out << "total reward " << trace.total_reward;
    if (trace.total_reward_unshifted != trace.total_reward)
        out << " (" << trace.total_reward_unshifted << " before the shift)";
    out << "\n";
    return 0;
}

// ----------------------------------------------------------------- tsp ----

int cmd_tsp(const std::string& instance_path, const std::string& mode,
            const SolverFlags& f, bool full_policy, const std::string& out_path,
            std::ostream& out) {
    TspGraph g = load_tsp_file(instance_path);
    TspEncoding enc = encode_tsp(g);
    if (mode == "bellman") {
        TspSolution sol = decode_tsp(enc, rollout_policy(enc.instance));
        out << "tour cost " << sol.cost << "\ntour:";
        for (int32_t v : sol.tour) out << " " << v;
        out << "\n";
        return 0;
    }
    SolveConfig cfg = make_config(f);
    SolveReport rep = solve_dp(enc.instance, cfg);
    maybe_write_outputs(rep, out_path, "");
    // sigma_bar alone cannot be trusted as a cost readout: the relaxed
    // feasibility window lets the objective level land above the optimum.
    // Recover the tour itself by extracting a full policy step by step.
    TspSolution sol = decode_tsp(enc, solve_policy(enc.instance, cfg));
    out << "tour cost " << sol.cost << " (objective level " << rep.sigma_bar
        << ", certified " << (rep.certified ? "true" : "false") << ")\n";
    if (full_policy) {
        out << "tour:";
        for (int32_t v : sol.tour) out << " " << v;
        out << "\n";
    }
    return 0;
}

// ----------------------------------------------------------------- msc ----

int cmd_msc(const std::string& instance_path, const std::string& mode,
            const SolverFlags& f, bool full_policy, const std::string& out_path,
            std::ostream& out, std::ostream& err) {
    MscInstance in = load_msc_file(instance_path);
    MscEncoding enc = encode_msc(in);
    if (mode == "bellman") {
        MscSolution sol = decode_msc(enc, rollout_policy(enc.instance));
        if (!sol.covered) {
            err << "no cover exists\n";
            return 1;
        }
        out << "minimum cover size " << sol.size << "\nsets:";
        for (int32_t i : sol.chosen) out << " " << i;
        out << "\n";
        return 0;
    }
    SolveConfig cfg = make_config(f);
    SolveReport rep = solve_dp(enc.instance, cfg);
    maybe_write_outputs(rep, out_path, "");
    // same story as the tour pipeline: read the answer off a decoded
    // policy, not off sigma_bar
    MscSolution sol = decode_msc(enc, solve_policy(enc.instance, cfg));
    if (!sol.covered) {
        err << "no cover exists (objective level " << rep.sigma_bar << ")\n";
        return 1;
    }
    out << "minimum cover size " << sol.size << " (objective level " << rep.sigma_bar
        << ", certified " << (rep.certified ? "true" : "false") << ")\n";
    if (full_policy) {
        out << "sets:";
        for (int32_t i : sol.chosen) out << " " << i;
        out << "\n";
    }
    return 0;
}

// --------------------------------------------------------------- bench ----

struct BenchFlags {
    int32_t states = 3;
    std::vector<int32_t> actions_list;
    std::vector<int64_t> rho_list;
    bool actions_seen = false;
    bool rho_seen = false;
    std::string strategy = "both";
    std::optional<double> delta;
    uint64_t seed = 0;
    int32_t jobs = 1;
    std::string out_path;
    bool no_wallclock = false;
};

struct BenchRow {
    std::string strategy;
    int32_t actions = 0;
    int64_t rho = 0;
    std::vector<std::string> cells; // everything after the index column
};

const char* kBenchHeader =
    "index,strategy,states,actions,horizon,reward_bound,rho,delta,"
    "planned_rounds_per_probe,planned_probes,sigma_bar,total_rounds,qmf_runs,"
    "modeled_queries,scan_evaluations,certified,error,wallclock_ms";

/// One grid cell: a pinned-rho random instance, its planned iteration
/// counts, and a full solve. Failures land in the error column and the
/// sweep keeps going.
BenchRow bench_one(const BenchFlags& f, const std::string& strategy, int32_t actions,
                   int64_t rho, uint64_t row_seed) {
    BenchRow row;
    row.strategy = strategy;
    row.actions = actions;
    row.rho = rho;
    auto num = [](auto v) { return std::to_string(v); };
    try {
        RandomInstanceParams rp;
        rp.num_states = f.states;
        rp.num_actions = actions;
        // split rho into horizon * reward bound so the search range is exact
        rp.horizon = static_cast<int32_t>(rho % 2 == 0 ? rho / 2 : rho);
        rp.reward_max = rho % 2 == 0 ? 2 : 1;
        rp.seed = row_seed;
        DpInstance inst = gen_random_instance(rp);
        inst.reward_bound = rp.reward_max;

        SolveConfig cfg;
        cfg.strategy.kind = strategy == "qmf" ? StrategyKind::simulated_qmf
                                              : StrategyKind::exact_scan;
        cfg.delta = f.delta;
        cfg.rho_override = rho;
        cfg.seed = row_seed;
        IterationBoundReport ib = iteration_bound_report(inst, cfg);
        SolveReport rep = solve_dp(inst, cfg);

        std::ostringstream delta_s, wall_s;
        delta_s << rep.delta_used;
        wall_s << std::fixed << std::setprecision(3)
               << (f.no_wallclock ? 0.0 : rep.wallclock_ms);
        row.cells = {num(f.states), num(actions), num(inst.horizon),
                     num(inst.reward_bound), num(rho), delta_s.str(),
                     num(ib.rounds_per_probe), num(ib.probes), num(rep.sigma_bar),
                     num(rep.total_rounds), num(rep.ledger.qmf_runs),
                     num(rep.ledger.modeled_queries), num(rep.ledger.scan_evaluations),
                     rep.certified ? "true" : "false", "", wall_s.str()};
    } catch (const input_error& e) {
        row.cells = {num(f.states), num(actions), "", "", num(rho), "", "", "",
                     "", "", "", "", "", "", errc_name(e.code), ""};
    } catch (const solver_negative& e) {
        row.cells = {num(f.states), num(actions), "", "", num(rho), "", "", "",
                     "", "", "", "", "", "", errc_name(e.code), ""};
    }
    return row;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
    std::vector<std::string> strategies;
    if (f.strategy == "both")
        strategies = {"exact", "qmf"};
    else
        strategies = {f.strategy};
    std::vector<int32_t> actions = f.actions_seen ? f.actions_list
                                                  : std::vector<int32_t>{2, 3};
    std::vector<int64_t> rhos =
        f.rho_seen ? f.rho_list : std::vector<int64_t>{2, 3, 4, 5, 6, 7, 8};

    struct Cell {
        std::string strategy;
        int32_t a;
        int64_t rho;
    };
    std::vector<Cell> grid;
    for (const std::string& s : strategies)
        for (int32_t a : actions)
            for (int64_t rho : rhos) grid.push_back({s, a, rho});

    std::vector<BenchRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            rows[i] = bench_one(f, grid[i].strategy, grid[i].a, grid[i].rho,
                                f.seed + static_cast<uint64_t>(i) * kSeedStride);
        }
    };
    int32_t jobs = std::max(1, std::min<int32_t>(f.jobs,
                                                 static_cast<int32_t>(grid.size() ? grid.size() : 1)));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int32_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::ostringstream csv;
    csv << kBenchHeader << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << i << "," << rows[i].strategy;
        for (const std::string& c : rows[i].cells) csv << "," << c;
        csv << "\n";
    }
    if (f.out_path.empty())
        out << csv.str();
    else
        write_text_file(f.out_path, csv.str());
    return 0;
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-horizon DP solving via multiplicative weights on the dual LP"};
    app.name("mwdp");
    app.require_subcommand(1);

    GenFlags gf;
    CLI::App* gen = app.add_subcommand("gen", "generate instance files");
    gen->add_option("--type", gf.type, "random | adversarial")
        ->check(CLI::IsMember({"random", "adversarial"}));
    gen->add_option("--states", gf.states, "state count (random)");
    CLI::Option* gen_actions = gen->add_option("--actions", gf.actions, "action count");
    gen->add_option("--horizon", gf.horizon, "horizon");
    gen->add_option("--reward-max", gf.reward_max, "rewards drawn from {1..max} (random)");
    gen->add_flag("--time-dependent", gf.time_dependent, "draw a table per time step");
    gen->add_option("--n", gf.band, "hidden band size (adversarial)");
    gen->add_option("--special-state", gf.special_state,
                    "band index of the differing state (adversarial)");
    gen->add_option("--special-action", gf.special_action,
                    "differing action (adversarial)");
    gen->add_option("--seed", gf.seed, "RNG seed")->required();
    gen->add_option("--out", gf.out_path, "output instance path")->required();
    gen->add_option("--out2", gf.out2_path, "second instance path (adversarial)");

    std::string bellman_instance, bellman_format = "table";
    bool bellman_tables = false;
    CLI::App* bell = app.add_subcommand("bellman", "exact reference solve");
    bell->add_option("--instance", bellman_instance, "instance JSON path")->required();
    bell->add_option("--format", bellman_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));
    bell->add_flag("--values", bellman_tables, "print the full value and policy tables");

    std::string solve_instance, solve_format = "table", solve_out, solve_transcript;
    bool solve_transcript_p = false;
    SolverFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "iterative dual solve");
    solve->add_option("--instance", solve_instance, "instance JSON path")->required();
    attach_solver_flags(solve, solve_flags);
    solve->add_option("--format", solve_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));
    solve->add_option("--out", solve_out, "write the report JSON here");
    solve->add_option("--transcript", solve_transcript,
                      "write per-round JSONL of the accepted probe here");
    solve->add_flag("--transcript-p", solve_transcript_p,
                    "record the weight distribution each round too");

    std::string policy_instance, policy_format = "table";
    SolverFlags policy_flags;
    CLI::App* policy = app.add_subcommand("policy", "full trajectory via repeated solves");
    policy->add_option("--instance", policy_instance, "instance JSON path")->required();
    attach_solver_flags(policy, policy_flags);
    policy->add_option("--format", policy_format, "table | json")
        ->check(CLI::IsMember({"table", "json"}));

    std::string tsp_instance, tsp_mode = "bellman", tsp_out;
    bool tsp_full = false;
    SolverFlags tsp_flags;
    CLI::App* tsp = app.add_subcommand("tsp", "tour problems through the layered encoding");
    tsp->add_option("--instance", tsp_instance, "graph JSON path")->required();
    tsp->add_option("--mode", tsp_mode, "bellman | mwum")
        ->check(CLI::IsMember({"bellman", "mwum"}));
    attach_solver_flags(tsp, tsp_flags);
    tsp->add_flag("--full-policy", tsp_full, "reconstruct the tour by repeated solves (mwum)");
    tsp->add_option("--out", tsp_out, "write the report JSON here (mwum)");

    std::string msc_instance, msc_mode = "bellman", msc_out;
    bool msc_full = false;
    SolverFlags msc_flags;
    CLI::App* msc = app.add_subcommand("msc", "set cover through the layered encoding");
    msc->add_option("--instance", msc_instance, "cover JSON path")->required();
    msc->add_option("--mode", msc_mode, "bellman | mwum")
        ->check(CLI::IsMember({"bellman", "mwum"}));
    attach_solver_flags(msc, msc_flags);
    msc->add_flag("--full-policy", msc_full, "reconstruct the chosen sets (mwum)");
    msc->add_option("--out", msc_out, "write the report JSON here (mwum)");

    CLI::App* verify = app.add_subcommand("verify", "run the self-check battery");

    BenchFlags bf;
    CLI::App* bench = app.add_subcommand("bench", "CSV sweep over a parameter grid");
    bench->add_option("--states", bf.states, "state count for every row");
    std::string bench_actions_csv, bench_rho_csv;
    CLI::Option* opt_actions =
        bench->add_option("--actions-list", bench_actions_csv,
                          "comma-joined action counts to sweep")
            ->expected(0, 1);
    CLI::Option* opt_rho =
        bench->add_option("--rho-list", bench_rho_csv,
                          "comma-joined objective bounds to sweep")
            ->expected(0, 1);
    bench->add_option("--strategy", bf.strategy, "exact | qmf | both")
        ->check(CLI::IsMember({"exact", "qmf", "both"}));
    bench->add_option("--delta", bf.delta, "slack tolerance for every row");
    bench->add_option("--seed", bf.seed, "base RNG seed")->required();
    bench->add_option("--jobs", bf.jobs, "rows solved concurrently");
    bench->add_option("--out", bf.out_path, "write the CSV here instead of stdout");
    bench->add_flag("--no-wallclock", bf.no_wallclock,
                    "zero the wallclock column for byte-stable output");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    // comma-joined sweep lists; an empty piece contributes nothing, so a
    // bare flag selects an empty sweep
    auto parse_int_list = [](const std::string& csv) {
        std::vector<int64_t> values;
        std::size_t pos = 0;
        for (;;) {
            std::size_t comma = csv.find(',', pos);
            std::string piece = csv.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!piece.empty()) {
                try {
                    values.push_back(std::stoll(piece));
                } catch (const std::exception&) {
                    throw input_error(errc::bad_parameter, "not an integer: " + piece);
                }
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return values;
    };

    try {
        if (app.got_subcommand(gen)) {
            // the two-instance family needs room for its routing actions
            if (gf.type == "adversarial" && gen_actions->count() == 0) gf.actions = 3;
            return cmd_gen(gf, out);
        }
        if (app.got_subcommand(bell))
            return cmd_bellman(bellman_instance, bellman_format, bellman_tables, out);
        if (app.got_subcommand(solve))
            return cmd_solve(solve_instance, solve_flags, solve_format, solve_out,
                             solve_transcript, solve_transcript_p, out);
        if (app.got_subcommand(policy))
            return cmd_policy(policy_instance, policy_flags, policy_format, out);
        if (app.got_subcommand(tsp))
            return cmd_tsp(tsp_instance, tsp_mode, tsp_flags, tsp_full, tsp_out, out);
        if (app.got_subcommand(msc))
            return cmd_msc(msc_instance, msc_mode, msc_flags, msc_full, msc_out, out, err);
        if (app.got_subcommand(verify)) return run_verify(out) ? 0 : 1;
        if (app.got_subcommand(bench)) {
            bf.actions_seen = opt_actions->count() > 0;
            bf.rho_seen = opt_rho->count() > 0;
            for (int64_t a : parse_int_list(bench_actions_csv))
                bf.actions_list.push_back(static_cast<int32_t>(a));
            bf.rho_list = parse_int_list(bench_rho_csv);
            return cmd_bench(bf, out);
        }
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const solver_negative& e) {
        err << "solver: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace mwdp

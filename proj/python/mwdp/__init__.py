"""Finite-horizon deterministic DP solving via multiplicative weights on the
dual LP, with exact-scan and simulated quantum-minimum-finding inner oracles.
Thin re-export of the compiled core."""

from ._core import (
    AdversarialPair,
    DpInstance,
    InputError,
    IterationBoundReport,
    MscInstance,
    MscSolution,
    PolicyTrace,
    ProbeStats,
    QueryLedger,
    SolveReport,
    SolverNegative,
    TraceStep,
    TspGraph,
    TspSolution,
    bellman,
    feasibility_constants,
    gen_adversarial,
    gen_random,
    iteration_bounds,
    load_instance,
    load_instance_file,
    load_msc,
    load_tsp,
    make_instance,
    msc_bellman,
    msc_brute,
    msc_instance,
    msc_mwum,
    mw_update,
    rollout,
    run_cli,
    save_instance,
    save_msc,
    save_tsp,
    self_check,
    solve,
    solve_policy,
    tsp_bellman,
    tsp_brute,
    tsp_instance,
    tsp_mwum,
)

__all__ = [
    "AdversarialPair",
    "DpInstance",
    "InputError",
    "IterationBoundReport",
    "MscInstance",
    "MscSolution",
    "PolicyTrace",
    "ProbeStats",
    "QueryLedger",
    "SolveReport",
    "SolverNegative",
    "TraceStep",
    "TspGraph",
    "TspSolution",
    "bellman",
    "feasibility_constants",
    "gen_adversarial",
    "gen_random",
    "iteration_bounds",
    "load_instance",
    "load_instance_file",
    "load_msc",
    "load_tsp",
    "make_instance",
    "msc_bellman",
    "msc_brute",
    "msc_instance",
    "msc_mwum",
    "mw_update",
    "rollout",
    "run_cli",
    "save_instance",
    "save_msc",
    "save_tsp",
    "self_check",
    "solve",
    "solve_policy",
    "tsp_bellman",
    "tsp_brute",
    "tsp_instance",
    "tsp_mwum",
]

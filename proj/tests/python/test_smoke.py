"""End-to-end smoke tests for the python package."""

import json

import pytest

import mwdp


def tiny():
    # two states, two actions: stay-and-collect-1 vs swap-and-collect-2
    return mwdp.make_instance(
        num_states=2,
        num_actions=2,
        horizon=2,
        initial_state=0,
        transitions=[(0, 1), (1, 2), (1, 1), (0, 2)],
    )


def test_bellman_matches_hand_computation():
    inst = tiny()
    res = mwdp.bellman(inst)
    assert res["v_star"] == 4
    assert res["optimal_start_actions"] == [1]
    assert res["values"][0] == [4, 4]
    assert res["values"][2] == [0, 0]
    assert res["policy"][0] == [1, 1]
    assert inst.at(0, 0, 1) == (1, 2)


def test_solve_exact_recovers_the_optimum():
    rep = mwdp.solve(tiny())
    assert rep.sigma_bar == 4
    assert rep.chosen_action == 1
    assert rep.certified
    assert rep.escalations == 0
    assert rep.ledger.scan_evaluations > 0
    assert rep.ledger.qmf_runs == 0
    doc = json.loads(rep.json())
    assert doc["schema"] == "dp-report/1"
    assert doc["sigma_bar"] == 4


def test_solve_qmf_is_seeded_and_reproducible():
    a = mwdp.solve(tiny(), strategy="qmf", seed=3)
    b = mwdp.solve(tiny(), strategy="qmf", seed=3)
    assert a.sigma_bar == 4
    assert a.chosen_action == 1
    assert a.ledger.modeled_queries == b.ledger.modeled_queries
    assert a.ledger.qmf_runs == a.total_rounds


def test_policy_walks_the_optimal_trajectory():
    trace = mwdp.solve_policy(tiny())
    assert trace.total_reward == 4
    assert [s.action for s in trace.steps] == [1, 1]
    reference = mwdp.rollout(tiny())
    assert trace.total_reward == reference.total_reward


def test_serialization_round_trip():
    inst = tiny()
    text = mwdp.save_instance(inst)
    again = mwdp.load_instance(text)
    assert mwdp.save_instance(again) == text
    assert again.num_states == 2


def test_generators_are_deterministic():
    a = mwdp.gen_random(states=4, actions=2, horizon=3, seed=11)
    b = mwdp.gen_random(states=4, actions=2, horizon=3, seed=11)
    assert mwdp.save_instance(a) == mwdp.save_instance(b)
    pair = mwdp.gen_adversarial(n=4, horizon=6, seed=2)
    v1 = mwdp.bellman(pair.instance_1)["v_star"]
    v2 = mwdp.bellman(pair.instance_2)["v_star"]
    assert v1 != v2


def test_tsp_pipeline():
    g = mwdp.TspGraph(3, 5, [[0, 1, 4], [1, 0, 2], [3, 2, 0]])
    assert mwdp.tsp_brute(g).cost == 6
    sol = mwdp.tsp_bellman(g)
    assert sol.cost == 6
    assert sol.tour == [1, 2, 3]
    cost, rep = mwdp.tsp_mwum(g)
    assert cost == 6
    assert rep.certified


def test_msc_pipeline():
    inst = mwdp.MscInstance(4, [[1, 2], [3, 4], [1, 3]])
    assert mwdp.msc_brute(inst).size == 2
    assert mwdp.msc_bellman(inst).chosen == [0, 1]
    coverable, k, rep = mwdp.msc_mwum(inst)
    assert coverable and k == 2
    # the objective level can stop above the optimum; the decoded cover is
    # the answer, the level only bounds it from above
    assert rep.sigma_bar >= mwdp.bellman(mwdp.msc_instance(inst))["v_star"]


def test_planning_helpers():
    eps, rounds = mwdp.feasibility_constants(1.0, 1.0, 3)
    assert rounds == 20
    assert eps == pytest.approx(1.0 / 6.0)
    assert mwdp.mw_update([1.0, 1.0], [1.0, -1.0], 0.5) == [0.5, 1.5]
    ib = mwdp.iteration_bounds(tiny())
    assert ib.ell == 8.0
    assert ib.planned_rounds == ib.probes * ib.rounds_per_probe


def test_errors_surface_as_python_exceptions():
    with pytest.raises(mwdp.InputError):
        mwdp.make_instance(num_states=1, num_actions=1, horizon=0,
                           transitions=[(0, 1)])
    with pytest.raises(ValueError):  # InputError subclasses ValueError
        mwdp.feasibility_constants(0.0, 1.0, 3)


def test_cli_entry_point(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(mwdp.save_instance(tiny()) + "\n")
    code, out, err = mwdp.run_cli(["bellman", "--instance", str(path)])
    assert code == 0
    assert "v*(start) = 4" in out
    code, out, err = mwdp.run_cli(["solve", "--instance", "/nonexistent.json"])
    assert code == 2
    assert "input error" in err


def test_self_check_battery():
    ok, report = mwdp.self_check()
    assert ok
    assert "15/15 checks passed" in report

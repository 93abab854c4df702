"""Configurations, contraction to the minimal model, K3 verdicts, fixed loci."""

import pytest

from pqk3.curves import CurveAction, GroupSpec, eigenspace_profile, dp_curve, dp_tau_curve
from pqk3.minimal_model import (
    CurveConfiguration,
    build_configuration,
    central_self_intersection,
    contract_to_minimal,
    fixed_locus,
    fixed_locus_euler_expected,
    run_pipeline,
)
from pqk3.surfaces import SurfacePair, evaluate_pair, pair_admissible
from pqk3.exact import mod_inverse

G3 = GroupSpec(3)
G5 = GroupSpec(5)
G6 = GroupSpec(3, doubled=True)


def with_profile(action):
    return action, eigenspace_profile(action)


def candidate_for(c1_data, group, second, twist=None):
    c1 = with_profile(CurveAction.build(group, c1_data))
    pairs = pair_admissible(c1, with_profile(second))
    if twist is not None:
        pairs = [p for p in pairs if p.twist == twist]
    return evaluate_pair(pairs[0])


def test_central_self_intersection_values():
    assert central_self_intersection([(1, 5), (1, 5), (3, 5)]) == -1
    assert central_self_intersection([(2, 5)] * 5) == -2
    assert central_self_intersection([(2, 3)] * 3) == -2
    with pytest.raises(ValueError):
        central_self_intersection([(1, 5), (1, 5)])


def test_example_5_3_configuration_census():
    cand = candidate_for([(5, 4, 5)], G5, dp_curve(5))
    config = build_configuration(cand.pair)
    central1 = [n for n in config.nodes if n.kind == "central1"]
    central2 = [n for n in config.nodes if n.kind == "central2"]
    chains = [n for n in config.nodes if n.kind == "chain"]
    assert [n.self_int for n in central1] == [-1] * 5
    assert sorted(n.self_int for n in central2) == [-2, -1, -1]
    assert sorted(n.self_int for n in chains) == [-5] * 10 + [-3, -3, -3, -3, -3] + [-2] * 5
    # the -2 member of each [2,3] string hangs on the first-fibration central
    for node in chains:
        if node.self_int == -2 and node.label[0] == "chain" and node.label[5] == 0:
            neighbors = [config.nodes[i].kind for i in config.neighbors(node.id)]
            assert "central1" in neighbors


def test_example_5_3_pipeline():
    cand = candidate_for([(5, 4, 5)], G5, dp_curve(5))
    result = run_pipeline(cand)
    assert result.contractions == 12
    assert result.verdict.is_k3 is True
    assert result.fixed.as_triple() == (7, 0, 1)
    assert result.fixed.unverified == ()
    inv = cand.invariants
    assert inv.euler - result.contractions == 24
    assert inv.h11 - result.contractions == 20


def test_minimal_rows_contract_nothing():
    # the K^2 = 0 row of the prime table and the elliptic-square quotient
    cand = candidate_for([(3, 1, 3)], G3, dp_curve(3))
    result = run_pipeline(cand)
    assert result.contractions == 0
    assert result.verdict.is_k3 is True
    assert result.fixed.as_triple() == (9, 0, 6)

    d3 = with_profile(dp_curve(3))
    square = evaluate_pair(pair_admissible(d3, d3)[0])
    assert square.invariants.K2 == 0
    square_result = run_pipeline(square)
    assert square_result.contractions == 0
    assert square_result.verdict.is_k3 is True


def test_hodge_gate_rejects_without_contraction():
    d3, profile = with_profile(dp_curve(3))
    pair = SurfacePair(d3, profile, d3, profile, 1)  # p_g = 0 quotient
    cand = evaluate_pair(pair)
    result = run_pipeline(cand)
    assert result.verdict.is_k3 is False
    assert "Hodge gate" in result.verdict.reasons[0]
    assert result.fixed is None


def test_table2_row1_pipeline():
    cand = candidate_for([(6, 1, 12)], G6, dp_tau_curve(3))
    result = run_pipeline(cand)
    assert result.contractions == 36
    assert result.verdict.is_k3 is True
    assert result.fixed.as_triple() == (0, 5, 2)


def test_chain_component_fixed_in_long_string():
    # two (6,5)-points force 1/6(1,5) strings whose middle curve is fixed
    cand = candidate_for([(6, 5, 2), (6, 1, 2)], G6, dp_tau_curve(3), twist=1)
    result = run_pipeline(cand)
    assert result.verdict.is_k3 is True
    assert result.fixed.as_triple() == (8, 1, 6)
    config = build_configuration(cand.pair)
    fixed_chain = [
        n for n in config.nodes if n.kind == "chain" and n.pointwise_fixed
    ]
    assert fixed_chain and all(n.label[5] == 2 for n in fixed_chain)


def test_swap_invariance_of_verdict_and_locus():
    samples = [
        ([(5, 4, 5)], G5, dp_curve(5)),
        ([(6, 5, 1), (6, 1, 3), (3, 1, 4)], G6, dp_tau_curve(3)),
        ([(3, 2, 6)], G3, dp_curve(3)),
    ]
    for data, group, second in samples:
        cand = candidate_for(data, group, second)
        pair = cand.pair
        swapped = SurfacePair(
            pair.second_action,
            pair.second_profile,
            pair.first_action,
            pair.first_profile,
            mod_inverse(pair.twist, group.order),
        )
        res = run_pipeline(cand)
        res_swapped = run_pipeline(evaluate_pair(swapped))
        assert res.verdict.is_k3 is res_swapped.verdict.is_k3 is True
        assert res.fixed.as_triple() == res_swapped.fixed.as_triple()


def test_contraction_guard_reports_undetermined():
    config = CurveConfiguration(order=3, prime=3, exponent=1)
    a = config.add_node(
        kind="chain", self_int=-1, pa=0, geometric_genus=0,
        invariant=True, pointwise_fixed=False, label=("chain", 0),
    )
    b = config.add_node(
        kind="chain", self_int=-2, pa=0, geometric_genus=0,
        invariant=True, pointwise_fixed=False, label=("chain", 1),
    )
    config.add_inter(a.id, b.id, 1)
    result = contract_to_minimal(config, k2_initial=0)
    assert result.count == 0
    assert result.status.startswith("undetermined")


def test_contraction_updates_arithmetic_genus():
    # a neighbor met twice acquires a singular point: pa rises by one
    config = CurveConfiguration(order=3, prime=3, exponent=1)
    e = config.add_node(
        kind="chain", self_int=-1, pa=0, geometric_genus=0,
        invariant=True, pointwise_fixed=False, label=("chain", 0),
    )
    c = config.add_node(
        kind="chain", self_int=-4, pa=0, geometric_genus=0,
        invariant=True, pointwise_fixed=False, label=("chain", 1),
    )
    config.add_inter(e.id, c.id, 2)
    result = contract_to_minimal(config, k2_initial=-1)
    assert result.count == 1
    assert config.nodes[c.id].self_int == 0
    assert config.nodes[c.id].pa == 1


def test_lefschetz_cross_check_agrees_on_anchors():
    for data, group, second, expected in (
        ([(5, 4, 5)], G5, dp_curve(5), 9),
        ([(6, 1, 12)], G6, dp_tau_curve(3), -6),
        ([(3, 1, 3)], G3, dp_curve(3), 21),
    ):
        cand = candidate_for(data, group, second)
        config = build_configuration(cand.pair)
        contraction = contract_to_minimal(config, cand.invariants.K2)
        assert fixed_locus_euler_expected(cand, contraction) == expected
        locus = fixed_locus(cand, contraction)
        pieces = locus.n_points + sum(
            2 - 2 * n.pa
            for n in contraction.config.alive_nodes()
            if n.pointwise_fixed
        )
        assert pieces == expected


def test_verdict_json_schema():
    cand = candidate_for([(5, 4, 5)], G5, dp_curve(5))
    record = run_pipeline(cand).to_json_dict()
    assert record["is_k3"] is True
    assert record["contractions"] == 12
    assert record["fixed_locus"] == [7, 0, 1]

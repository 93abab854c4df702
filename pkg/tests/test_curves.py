"""Curve actions: genus, admissibility, eigenspaces, enumeration."""

import math
from fractions import Fraction

import pytest

from pqk3.curves import (
    AdmissibilityError,
    BoundsError,
    CurveAction,
    EigenspaceProfile,
    GroupSpec,
    canonical_key,
    canonicalize,
    dp_curve,
    dp_tau_curve,
    eigenspace_profile,
    enumerate_curves,
    genus,
    intermediate_quotient_genus,
    is_admissible,
    lefschetz_check,
    max_genus_bound,
)
from oracles import brute_force_triple_classes

G3 = GroupSpec(3)
G5 = GroupSpec(5)
G6 = GroupSpec(3, doubled=True)


def action_from_xi(group, exponents):
    """Build a curve action from spherical exponents (one per base point)."""
    n = group.order
    data = {}
    for xi in exponents:
        m = n // math.gcd(xi, n)
        theta = pow((xi * m // n), -1, m)
        key = (m, theta)
        data[key] = data.get(key, 0) + n // m
    return CurveAction.build(group, [(m, t, c) for (m, t), c in data.items()])


def test_genus_examples():
    assert genus(CurveAction.build(G3, [(3, 2, 6)])) == 4
    for p in (3, 5, 7, 11, 13, 17, 19):
        assert genus(dp_curve(p)) == (p - 1) // 2
        assert genus(dp_tau_curve(p)) == (p - 1) // 2
    # ten order-6 points plus one order-3 base branch point
    action = CurveAction.build(G6, [(6, 1, 10), (3, 1, 2)])
    assert genus(action) == 22


def test_admissibility():
    ok, _ = is_admissible(CurveAction.build(G3, [(3, 2, 6)]))
    assert ok
    ok, why = is_admissible(CurveAction.build(G3, [(3, 1, 1)]))
    assert not ok and "3 branch points" in why
    # the rigid curve's spherical system (x^(p-1), x^(p-1), x^2)
    for p in (3, 5, 7):
        ok, _ = is_admissible(dp_curve(p))
        assert ok
    # monodromy failure: exponents 1, 1, 1 mod 5 sum to 3
    ok, why = is_admissible(action_from_xi(G5, [1, 1, 1]))
    assert not ok and "monodromy" in why


def test_ramification_counts_must_fill_fibers():
    # an order-p point of an order-2p action carries two ramification points
    bad = CurveAction.build(G6, [(6, 1, 10), (3, 1, 1)])
    ok, why = is_admissible(bad)
    assert not ok and "fiber" in why


def test_eigenspace_profiles_match_table_anchors():
    assert eigenspace_profile(CurveAction.build(G3, [(3, 2, 6)])).dims == (3, 1)
    # rigid curve: one-dimensional eigenspaces at the first (p-1)/2 powers
    for p in (3, 5, 7, 11):
        dims = eigenspace_profile(dp_curve(p)).dims
        assert dims == tuple(1 if s <= (p - 1) // 2 else 0 for s in range(1, p))
    # order-2p action on the rigid curve: eigenvalues -zeta_p^j only
    for p in (3, 5, 7):
        dims = eigenspace_profile(dp_tau_curve(p)).dims
        expected = {p + 2 * j for j in range(1, (p + 1) // 2)}
        assert {s for s in range(1, 2 * p) if dims[s - 1]} == expected
        assert all(dims[s - 1] == 1 for s in expected)


def test_profile_requires_admissible_input():
    with pytest.raises(AdmissibilityError):
        eigenspace_profile(CurveAction.build(G5, [(5, 1, 3)]))


def test_lefschetz_check_is_eigenvalue_separating():
    d5 = dp_curve(5)
    profile = eigenspace_profile(d5)
    assert lefschetz_check(d5, profile)
    perturbed = EigenspaceProfile(order=5, dims=(1, 0, 1, 0))
    assert not lefschetz_check(d5, perturbed)


def test_max_genus_bound():
    assert max_genus_bound(G3) == (4, 6)
    assert max_genus_bound(G5) == (16, 10)
    assert max_genus_bound(G6, primitive_only=True) == (25, 12)
    with pytest.raises(BoundsError):
        max_genus_bound(G6, primitive_only=False)


def test_enumerate_p3_matches_printed_classes():
    found = {canonical_key(a) for a, _ in enumerate_curves(G3)}
    printed = [
        [(3, 1, 0), (3, 2, 6)],
        [(3, 1, 1), (3, 2, 4)],
        [(3, 1, 2), (3, 2, 2)],
        [(3, 1, 3), (3, 2, 0)],
    ]
    expected = {
        canonical_key(CurveAction.build(G3, row)) for row in printed
    }
    assert found == expected


def test_enumerate_contains_rigid_curve_for_every_prime():
    for p in (3, 5, 7, 11, 13, 17, 19):
        group = GroupSpec(p)
        keys = {
            canonical_key(a)
            for a, _ in enumerate_curves(group, branch_points=3)
        }
        assert canonical_key(dp_curve(p)) in keys


def test_enumerate_triples_match_brute_force_oracle():
    oracle = brute_force_triple_classes(5)
    mine = enumerate_curves(G5, branch_points=3, require_dim1=False)
    keys = {tuple(a.spherical_exponents()) for a, _ in mine}
    assert keys == oracle


def test_enumerate_unbounded_request_errors():
    with pytest.raises(BoundsError):
        enumerate_curves(G5, require_dim1=False)
    with pytest.raises(BoundsError):
        enumerate_curves(G6, branch_points=99)


def test_canonicalize_idempotent_and_twist_invariant():
    d3 = dp_curve(3)
    canon = canonicalize(d3)
    assert canon.spherical_exponents() == [1, 1, 1]
    assert canonicalize(canon) == canon
    # {4,4,2} and its twist {3,3,4} have the same canonical form
    a = action_from_xi(G5, [4, 4, 2])
    b = action_from_xi(G5, [3, 3, 4])
    assert canonical_key(a) == canonical_key(b)
    assert canonicalize(a) == canonicalize(b)


def test_intermediate_quotient_genus():
    profile = EigenspaceProfile(order=6, dims=(1, 3, 5, 7, 9))
    assert intermediate_quotient_genus(profile, 6) == 0  # whole group
    assert intermediate_quotient_genus(profile, 3) == 5  # quotient by g^2
    assert intermediate_quotient_genus(profile, 1) == 25  # trivial subgroup
    tau = eigenspace_profile(dp_tau_curve(3))
    assert intermediate_quotient_genus(tau, 2) == 0
    with pytest.raises(ValueError):
        intermediate_quotient_genus(profile, 4)


def test_monodromy_equivalent_to_integrality():
    # the count-vector condition sum i^{-1} a_i = 0 mod p holds exactly when
    # the closed form for the last eigenspace dimension is an integer
    p = 5
    from itertools import product

    for a in product(range(4), repeat=p - 1):
        if not 3 <= sum(a) <= 6:
            continue
        monodromy = (
            sum(pow(i, -1, p) * a[i - 1] for i in range(1, p)) % p == 0
        )
        value = -1 + Fraction(
            sum(a[l - 1] * ((pow(l, -1, p) * (p - 1)) % p) for l in range(1, p)),
            p,
        )
        assert monodromy == (value.denominator == 1)


def test_curve_json_schema():
    record = dp_curve(5).to_json_dict()
    assert set(record) == {"order", "branch", "genus", "alpha"}
    assert record["order"] == 5
    assert record["genus"] == 2
    assert record["alpha"] == [1, 1, 0, 0]
    assert sorted(record["branch"]) == [[5, 3, 1], [5, 4, 2]]

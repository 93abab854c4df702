"""Diagonal quotients of a product of two curves by a cyclic group.

Two curve actions (C_1, g_1), (C_2, g_2) with the same group Z/n are glued
along a twist t (a unit mod n): the quotient surface is

    Y = (C_1 x C_2) / <g_1 x g_2^t>,

and X denotes its minimal resolution.  A point P x Q where the stabilizer
orders are h and k maps to a cyclic quotient singularity of order
d = gcd(h, k) and oriented type 1/d(1, q) with q = theta_P * theta_Q^(-1)
mod d (local action of the first factor over the second); the number of
such points is a*b*d/n for ramification counts a, b.

The numerical invariants of X are assembled from the per-singularity
corrections h_x, e_x:

    K_X^2  = 8 (g1-1)(g2-1)/n + sum count * h_x
    e(X)   = 4 (g1-1)(g2-1)/n + sum count * e_x
    chi    = (K^2 + e)/12            (Noether)
    p_g    = sum_s alpha_s beta_{n-s},   q = 0,
    h^{1,1} = 2 (1 + sum_s alpha_s beta_s) + sum count * (string length).

All quantities are exact; non-integral K^2, e or chi on admissible input
raises ``InvariantViolation`` rather than being rounded away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import (
    BoundsError,
    CurveAction,
    EigenspaceProfile,
    GroupSpec,
    enumerate_curves,
    twist_action,
    twist_profile,
    units,
)
from .exact import mod_inverse, singularity_invariants


class InvariantViolation(ArithmeticError):
    """An exact identity failed; indicates invalid data or an internal bug."""


@dataclass(frozen=True)
class SurfacePair:
    """Two curve actions glued by the twist t: quotient by <g_1 x g_2^t>."""

    first_action: CurveAction
    first_profile: EigenspaceProfile
    second_action: CurveAction
    second_profile: EigenspaceProfile
    twist: int

    def __post_init__(self):
        if self.first_action.group != self.second_action.group:
            raise ValueError("cannot pair curves with different groups")
        if math.gcd(self.twist, self.order) != 1:
            raise ValueError(f"twist {self.twist} is not a unit")

    @property
    def order(self) -> int:
        return self.first_action.order

    @property
    def group(self) -> GroupSpec:
        return self.first_action.group

    def effective_second_action(self) -> CurveAction:
        return twist_action(self.second_action, self.twist)

    def effective_second_profile(self) -> EigenspaceProfile:
        return twist_profile(self.second_profile, self.twist)

    def geometric_genera(self) -> tuple[int, int]:
        return self.first_profile.genus, self.second_profile.genus


def pair_pg(pair: SurfacePair) -> int:
    """h^{2,0} of the resolution: sum_s alpha_s * beta_{n-s}."""
    n = pair.order
    alpha = pair.first_profile
    beta = pair.effective_second_profile()
    return sum(alpha.dim(s) * beta.dim(n - s) for s in range(1, n))


def pair_q(pair: SurfacePair) -> int:
    """h^{1,0}; zero since both quotient curves are rational."""
    return 0


def pairing_index(pair: SurfacePair) -> int | None:
    """The unique s with alpha_s = beta_{n-s} = 1 when p_g = 1."""
    n = pair.order
    alpha = pair.first_profile
    beta = pair.effective_second_profile()
    hits = [
        s
        for s in range(1, n)
        if alpha.dim(s) * beta.dim(n - s) != 0
    ]
    if len(hits) == 1 and alpha.dim(hits[0]) == 1:
        return hits[0]
    return None


def pair_admissible(
    first: tuple[CurveAction, EigenspaceProfile],
    second: tuple[CurveAction, EigenspaceProfile],
) -> list[SurfacePair]:
    """All twists gluing the two curves into a surface with p_g=1, q=0."""
    a_action, a_profile = first
    b_action, b_profile = second
    if a_action.group != b_action.group:
        raise ValueError("group mismatch between the two curve actions")
    n = a_action.order
    p = a_action.group.prime
    if not a_action.group.doubled:
        zeros = sum(1 for d in a_profile.dims if d == 0)
        zeros += sum(1 for d in b_profile.dims if d == 0)
        if zeros < p - 2:
            return []
    out = []
    for t in units(n):
        pair = SurfacePair(a_action, a_profile, b_action, b_profile, t)
        if pair_pg(pair) == 1 and pair_q(pair) == 0:
            out.append(pair)
    return out


@dataclass(frozen=True)
class SingularityRecord:
    """count singularities of oriented type 1/d(1, q) from one class pair."""

    d: int
    q: int
    count: int
    # (stabilizer order, local rotation, ramification count) on each side
    first_class: tuple[int, int, int]
    second_class: tuple[int, int, int]


def singularity_multiset(pair: SurfacePair) -> list[SingularityRecord]:
    """Singular points of the quotient model, grouped by class pair."""
    n = pair.order
    records = []
    second = pair.effective_second_action()
    for h, theta_p, a in pair.first_action.classes():
        for k, theta_q, b in second.classes():
            d = math.gcd(h, k)
            if d == 1:
                continue
            q = (theta_p * mod_inverse(theta_q % d, d)) % d
            count = a * b * d // n
            if count * n != a * b * d:
                raise InvariantViolation(
                    "singular orbit count is not an integer"
                )
            records.append(
                SingularityRecord(
                    d=d,
                    q=q,
                    count=count,
                    first_class=(h, theta_p, a),
                    second_class=(k, theta_q, b),
                )
            )
    records.sort(key=lambda r: (r.d, r.q, r.first_class, r.second_class))
    return records


def singularity_counter(sings) -> dict[tuple[int, int], int]:
    """Collapse records to a {(d, q): total count} multiset."""
    out: dict[tuple[int, int], int] = {}
    for rec in sings:
        key = (rec.d, rec.q)
        out[key] = out.get(key, 0) + rec.count
    return {key: c for key, c in sorted(out.items()) if c}


@dataclass(frozen=True)
class SurfaceInvariants:
    g1: int
    g2: int
    K2: int
    euler: int
    chi: int
    pg: int
    q: int
    h11: int
    moduli_dim: int


def chern_invariants(pair: SurfacePair, sings) -> tuple[int, int, int]:
    """(K^2, e, chi) of the resolution, all exact integers."""
    n = pair.order
    g1, g2 = pair.geometric_genera()
    base = Fraction(8 * (g1 - 1) * (g2 - 1), n)
    k2 = base
    euler = base / 2
    for rec in sings:
        inv = singularity_invariants(rec.d, rec.q)
        k2 += rec.count * inv.h
        euler += rec.count * inv.e
    chi = (k2 + euler) / 12
    for name, value in (("K^2", k2), ("euler", euler), ("chi", chi)):
        if value.denominator != 1:
            raise InvariantViolation(
                f"{name} is not an integer on an admissible pair: {value}"
            )
    return int(k2), int(euler), int(chi)


def hodge_numbers(pair: SurfacePair, sings) -> tuple[int, int, int]:
    """(p_g, q, h^{1,1}) of the resolution."""
    n = pair.order
    alpha = pair.first_profile
    beta = pair.effective_second_profile()
    pg = pair_pg(pair)
    diag = sum(alpha.dim(s) * beta.dim(s) for s in range(1, n))
    h11 = 2 * (1 + diag)
    for rec in sings:
        inv = singularity_invariants(rec.d, rec.q)
        h11 += rec.count * inv.num_curves
    return pg, 0, h11


def moduli_dimension(pair: SurfacePair) -> int:
    """Moduli of the family: r_1 + r_2 - 6 base branch points."""
    r1 = pair.first_action.num_base_points
    r2 = pair.second_action.num_base_points
    if r1 < 3 or r2 < 3:
        raise ValueError("each factor needs at least 3 branch points")
    return r1 + r2 - 6


@dataclass(frozen=True)
class Candidate:
    """A p_g = 1, q = 0 pair with all invariants of its resolution."""

    pair: SurfacePair
    invariants: SurfaceInvariants
    singularities: tuple[tuple[int, int, int], ...]  # (count, d, q)
    notes: tuple[str, ...]

    @property
    def is_k3_candidate(self) -> bool:
        return self.invariants.chi == 2

    def to_json_dict(self) -> dict:
        inv = self.invariants
        return {
            "order": self.pair.order,
            "curve1": self.pair.first_action.to_json_dict(),
            "curve2": self.pair.second_action.to_json_dict(),
            "twist": self.pair.twist,
            "singularities": [list(s) for s in self.singularities],
            "K2": inv.K2,
            "euler": inv.euler,
            "chi": inv.chi,
            "pg": inv.pg,
            "q": inv.q,
            "h11": inv.h11,
            "moduli_dim": inv.moduli_dim,
            "notes": list(self.notes),
        }


def evaluate_pair(pair: SurfacePair) -> Candidate:
    """Assemble the full invariant record of one admissible pair."""
    sings = singularity_multiset(pair)
    k2, euler, chi = chern_invariants(pair, sings)
    pg, q, h11 = hodge_numbers(pair, sings)
    if euler != 2 - 4 * q + 2 * pg + h11:
        raise InvariantViolation("Betti consistency e = 2 - 4q + 2pg + h11 failed")
    g1, g2 = pair.geometric_genera()
    notes = []
    if g1 == 1 and g2 == 1:
        notes.append("K^2 formula used in its equality form with g(C_1) = g(C_2) = 1")
    inv = SurfaceInvariants(
        g1=g1,
        g2=g2,
        K2=k2,
        euler=euler,
        chi=chi,
        pg=pg,
        q=q,
        h11=h11,
        moduli_dim=moduli_dimension(pair),
    )
    counter = singularity_counter(sings)
    flat = tuple((c, d, q_) for (d, q_), c in counter.items())
    return Candidate(pair=pair, invariants=inv, singularities=flat, notes=tuple(notes))


def canonical_pair_key(pair: SurfacePair):
    """Dedup key: minimal form under generator changes and factor swap."""
    n = pair.order
    a, b, t = pair.first_action, pair.second_action, pair.twist
    best = None
    for first, second, tw in ((a, b, t), (b, a, mod_inverse(t, n))):
        for u in units(n):
            left = twist_action(first, u).branch
            for v in units(n):
                right = twist_action(second, v).branch
                t2 = (tw * u * mod_inverse(v, n)) % n
                key = (left, right, t2)
                if best is None or key < best:
                    best = key
    return best


def _pair_and_collect(curves1, curves2, same: bool) -> list[Candidate]:
    seen = {}
    for i, first in enumerate(curves1):
        second_list = curves2[i:] if same else curves2
        for second in second_list:
            for pair in pair_admissible(first, second):
                key = canonical_pair_key(pair)
                if key in seen:
                    continue
                seen[key] = evaluate_pair(pair)
    return [seen[key] for key in sorted(seen)]


def scan(group: GroupSpec, t1: int, t2: int) -> list[Candidate]:
    """All p_g=1, q=0 pairs with t1 resp. t2 base branch points."""
    if t1 < 3 or t2 < 3:
        raise BoundsError("each factor needs at least 3 branch points")
    if group.doubled and t1 + t2 > 25:
        raise BoundsError(
            "t1 + t2 > 25 exceeds the moduli bound for the order-2p search"
        )
    curves1 = enumerate_curves(group, branch_points=t1, require_dim1=True)
    if t2 == t1:
        return _pair_and_collect(curves1, curves1, same=True)
    curves2 = enumerate_curves(group, branch_points=t2, require_dim1=True)
    return _pair_and_collect(curves1, curves2, same=False)


def full_scan(group: GroupSpec, jobs: int = 1) -> list[Candidate]:
    """Complete classification for prime order: every admissible pair."""
    if group.doubled:
        raise BoundsError("full_scan is only bounded for groups of prime order")
    curves = enumerate_curves(group, require_dim1=True)
    if jobs > 1:
        return _full_scan_parallel(curves, jobs)
    return _pair_and_collect(curves, curves, same=True)


def _scan_chunk(args):
    curves, start, step = args
    out = []
    for i in range(start, len(curves), step):
        for second in curves[i:]:
            for pair in pair_admissible(curves[i], second):
                out.append(pair)
    return out


def _full_scan_parallel(curves, jobs: int) -> list[Candidate]:
    # deterministic: results are merged by canonical key, so chunking
    # cannot change the output
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        chunks = pool.map(
            _scan_chunk, [(curves, s, jobs) for s in range(jobs)]
        )
    seen = {}
    for chunk in chunks:
        for pair in chunk:
            key = canonical_pair_key(pair)
            if key not in seen:
                seen[key] = evaluate_pair(pair)
    return [seen[key] for key in sorted(seen)]

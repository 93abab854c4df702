"""Configuration geometry: contraction to the minimal model and fixed loci.

The resolution X of (C_1 x C_2)/<g_1 x g_2^t> carries two isotrivial
fibrations.  Over each branch point the reduced fiber is a central
component plus Hirzebruch-Jung strings, one per singular point on it; the
string of a singularity of oriented type 1/d(1, q) has self-intersections
given by the continued fraction of d/q, attached to the first-fibration
central at its first curve and to the second-fibration central at its
last.  Centrals of the two fibrations whose stabilizer orders are coprime
meet directly (the product point is smooth), n/(h*k) times per fiber pair.

``contract_to_minimal`` repeatedly blows down smooth rational (-1)-nodes,
keeping the intersection table, the arithmetic genus of the images (a
neighbor met with multiplicity m gains m(m-1)/2 to its arithmetic genus
and m^2 to its self-intersection) and a contact log used later to group
contracted curves into connected clusters.

``fixed_locus`` analyzes the automorphism of order p induced on the
minimal model by the identity on the first factor times the order-p part
of the second action.  Its restriction to each central component is the
residual action on an intermediate quotient curve; its action on each
exceptional chain is toric, so componentwise fixedness is decided exactly
from integer characters attached to the resolution rays.  Isolated fixed
points come from configuration nodes joining two invariant non-fixed
components and from blown-down clusters that touch no surviving fixed
curve.  An independent topological Lefschetz count (via the dimension of
the invariant part of H^2) cross-checks every reported locus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curves import intermediate_quotient_genus
from .exact import continued_fraction, mod_inverse
from .surfaces import (
    Candidate,
    SurfacePair,
    pairing_index,
    singularity_multiset,
)


def central_self_intersection(fiber_types) -> int:
    """Self-intersection -sum(q_i/n_i) of a central component; must be integral."""
    total = Fraction(0)
    for q, n in fiber_types:
        total -= Fraction(q, n)
    if total.denominator != 1:
        raise ValueError(
            f"fiber type {fiber_types} gives non-integral self-intersection {total}"
        )
    return int(total)


@dataclass
class CurveNode:
    id: int
    kind: str  # "central1" | "central2" | "chain"
    self_int: int
    pa: int  # arithmetic genus of the (image) curve, updated on contraction
    geometric_genus: int
    invariant: bool
    pointwise_fixed: bool
    label: tuple
    alive: bool = True


@dataclass(frozen=True)
class PointRecord:
    """An intersection point set of the initial configuration."""

    a: int
    b: int
    npoints: int
    fixed: bool  # the points are fixed by the induced automorphism


@dataclass
class CurveConfiguration:
    order: int
    prime: int
    exponent: int  # power of [id x g_2] whose fixed locus is analyzed
    nodes: list[CurveNode] = field(default_factory=list)
    inter: dict[tuple[int, int], int] = field(default_factory=dict)
    point_records: list[PointRecord] = field(default_factory=list)
    K2_initial: int = 0
    K2_current: int = 0
    euler_ledger: int = 0
    h11_ledger: int = 0
    contracted: list[tuple[int, dict[int, int]]] = field(default_factory=list)
    contacts: list[tuple[int, int]] = field(default_factory=list)
    chain_class_data: list[tuple[int, int, int, bool]] = field(
        default_factory=list
    )  # (number of chains, chain length, orbit size, invariant)

    def add_node(self, **kwargs) -> CurveNode:
        node = CurveNode(id=len(self.nodes), **kwargs)
        self.nodes.append(node)
        return node

    def add_inter(self, i: int, j: int, mult: int = 1) -> None:
        if i == j:
            raise ValueError("a node cannot intersect itself in the table")
        key = (min(i, j), max(i, j))
        self.inter[key] = self.inter.get(key, 0) + mult

    def multiplicity(self, i: int, j: int) -> int:
        return self.inter.get((min(i, j), max(i, j)), 0)

    def neighbors(self, i: int) -> dict[int, int]:
        out = {}
        for (a, b), m in self.inter.items():
            if m == 0:
                continue
            if a == i and self.nodes[b].alive:
                out[b] = m
            elif b == i and self.nodes[a].alive:
                out[a] = m
        return out

    def alive_nodes(self) -> list[CurveNode]:
        return [node for node in self.nodes if node.alive]


def _crt_lift(e: int, n: int, h: int, k: int) -> int:
    """Smallest j >= 0 with j = 0 mod n/h and j = e mod n/k."""
    m1, m2 = n // h, n // k
    for j in range(0, n + 1, m1):
        if (j - e) % m2 == 0:
            return j
    raise ArithmeticError(f"no lift for e={e} with moduli {m1}, {m2}")


def _chain_rays(d: int, q: int):
    """Unscaled ray coordinates (x_t, y_t), t = 0..k+1, of the resolution fan."""
    bs = continued_fraction(d, q)
    xs = [d, q]
    ys = [0, 1]
    for b in bs:
        xs.append(b * xs[-1] - xs[-2])
        ys.append(b * ys[-1] - ys[-2])
    # trailing entries correspond to the second axis: x_{k+1} = 0, y_{k+1} = d
    assert xs[-1] == 0 and ys[-1] == d
    return bs, xs, ys


def _chain_fixed_flags(
    d: int, q: int, n: int, lam1: int, lam2: int
) -> list[bool]:
    """Pointwise-fixedness of each chain curve under the toric lift.

    lam1, lam2 are the zeta_n-exponents of the lifted automorphism acting
    on the two local coordinates; curve E_t is fixed exactly when the
    primitive invariant character perpendicular to its ray is killed.
    """
    bs, xs, ys = _chain_rays(d, q)
    q_prime = mod_inverse(q, d)  # z-normalized weight of the second coordinate
    flags = []
    for t in range(1, len(bs) + 1):
        a, b = ys[t], -xs[t]
        g = math.gcd(abs(a), abs(b))
        a, b = a // g, b // g
        residue = (a + q_prime * b) % d
        scale = d // math.gcd(d, residue) if residue else 1
        a, b = a * scale, b * scale
        flags.append((a * lam1 + b * lam2) % n == 0)
    return flags


def build_configuration(
    pair: SurfacePair, sings=None
) -> CurveConfiguration:
    """Central components, HJ strings and direct crossings of X.

    The fixed-locus annotations are for the order-p automorphism induced
    by id x g_2 when the group order is p, and by its (p+1)-st power (the
    order-p part, id x delta_p for the standard second factor) when the
    group order is 2p.
    """
    n = pair.order
    p = pair.group.prime
    e = 1 if not pair.group.doubled else p + 1
    if sings is None:
        sings = singularity_multiset(pair)

    config = CurveConfiguration(order=n, prime=p, exponent=e)
    alpha = pair.first_profile
    beta = pair.effective_second_profile()
    second = pair.effective_second_action()

    first_classes = list(pair.first_action.classes())
    second_classes = list(second.classes())

    # one central per base branch point of each factor
    central1: dict[tuple[int, int], list[int]] = {}
    for h, theta_p, a in first_classes:
        fiber_types = []
        for k, theta_q, b in second_classes:
            d = math.gcd(h, k)
            if d > 1:
                q = (theta_p * mod_inverse(theta_q % d, d)) % d
                fiber_types += [(q, d)] * (b * d // h)
        self_int = central_self_intersection(fiber_types)
        genus = intermediate_quotient_genus(beta, h)
        ids = []
        for _ in range(a * h // n):
            node = config.add_node(
                kind="central1",
                self_int=self_int,
                pa=genus,
                geometric_genus=genus,
                invariant=True,
                pointwise_fixed=(e % (n // h) == 0),
                label=("central1", h, theta_p),
            )
            ids.append(node.id)
        central1[(h, theta_p)] = ids

    central2: dict[tuple[int, int], list[int]] = {}
    for k, theta_q, b in second_classes:
        fiber_types = []
        for h, theta_p, a in first_classes:
            d = math.gcd(h, k)
            if d > 1:
                q_inv = (theta_q * mod_inverse(theta_p % d, d)) % d
                fiber_types += [(q_inv, d)] * (a * d // k)
        self_int = central_self_intersection(fiber_types)
        genus = intermediate_quotient_genus(alpha, k)
        ids = []
        for _ in range(b * k // n):
            node = config.add_node(
                kind="central2",
                self_int=self_int,
                pa=genus,
                geometric_genus=genus,
                invariant=True,
                pointwise_fixed=(e % (n // k) == 0),
                label=("central2", k, theta_q),
            )
            ids.append(node.id)
        central2[(k, theta_q)] = ids

    # strings and crossings, distributed over fiber pairs
    for h, theta_p, a in first_classes:
        for k, theta_q, b in second_classes:
            d = math.gcd(h, k)
            gamma = n // math.lcm(h, k)
            invariant = e % gamma == 0
            c1_ids = central1[(h, theta_p)]
            c2_ids = central2[(k, theta_q)]
            if d == 1:
                npoints = n // (h * k)
                for i in c1_ids:
                    for j in c2_ids:
                        config.add_inter(i, j, npoints)
                        config.point_records.append(
                            PointRecord(i, j, npoints, fixed=invariant)
                        )
                continue
            q = (theta_p * mod_inverse(theta_q % d, d)) % d
            per_pair = n * d // (h * k)
            chain, _xs, _ys = _chain_rays(d, q)
            if invariant:
                j0 = _crt_lift(e, n, h, k)
                lam1 = ((n // h) * ((-j0 * h // n * theta_p) % h)) % n
                lam2 = ((n // k) * (((e - j0) * k // n * theta_q) % k)) % n
                flags = _chain_fixed_flags(d, q, n, lam1, lam2)
            else:
                flags = [False] * len(chain)
            orbit = 1 if invariant else gamma // math.gcd(gamma, e)
            total_chains = a * b * d // n
            config.chain_class_data.append(
                (total_chains, len(chain), orbit, invariant)
            )
            for i in c1_ids:
                for j in c2_ids:
                    for _copy in range(per_pair):
                        prev = i
                        for idx, bt in enumerate(chain):
                            node = config.add_node(
                                kind="chain",
                                self_int=-bt,
                                pa=0,
                                geometric_genus=0,
                                invariant=invariant,
                                pointwise_fixed=flags[idx],
                                label=("chain", h, theta_p, k, theta_q, idx),
                            )
                            config.add_inter(prev, node.id, 1)
                            config.point_records.append(
                                PointRecord(prev, node.id, 1, fixed=invariant)
                            )
                            prev = node.id
                        config.add_inter(prev, j, 1)
                        config.point_records.append(
                            PointRecord(prev, j, 1, fixed=invariant)
                        )

    # cross-check the chain census against the singularity multiset
    expected = {}
    for rec in sings:
        key = (rec.d, rec.q)
        expected[key] = expected.get(key, 0) + rec.count
    built: dict[tuple[int, int], int] = {}
    for node in config.nodes:
        if node.kind == "chain" and node.label[5] == 0:
            h, theta_p, k, theta_q = node.label[1:5]
            d = math.gcd(h, k)
            q = (theta_p * mod_inverse(theta_q % d, d)) % d
            built[(d, q)] = built.get((d, q), 0) + 1
    if built != expected:
        raise ValueError(
            f"chain census {built} does not match singularities {expected}"
        )
    return config


@dataclass
class ContractionResult:
    config: CurveConfiguration
    count: int
    status: str  # "minimal" or "undetermined: ..."
    log: list[tuple[int, dict[int, int]]]


def contract_to_minimal(
    config: CurveConfiguration, k2_initial: int
) -> ContractionResult:
    """Greedy blow-down of smooth rational (-1)-nodes, smallest id first.

    Every contraction raises K^2 by one and lowers the Euler number by
    one; performing more than -K^2 contractions is reported as an
    undetermined outcome instead of continuing silently.
    """
    config.K2_initial = k2_initial
    config.K2_current = k2_initial
    allowed = max(0, -k2_initial)
    count = 0
    status = "minimal"
    while True:
        candidates = [
            node
            for node in config.alive_nodes()
            if node.self_int == -1 and node.pa == 0
        ]
        if not candidates:
            break
        if count >= allowed:
            status = (
                "undetermined: a (-1)-curve remains after -K^2 contractions"
            )
            break
        node = min(candidates, key=lambda nd: nd.id)
        neighbors = config.neighbors(node.id)
        for j, m in neighbors.items():
            config.nodes[j].self_int += m * m
            config.nodes[j].pa += m * (m - 1) // 2
            config.contacts.append((node.id, j))
        items = sorted(neighbors.items())
        for idx, (j1, m1) in enumerate(items):
            for j2, m2 in items[idx + 1 :]:
                config.add_inter(j1, j2, m1 * m2)
        node.alive = False
        config.contracted.append((node.id, neighbors))
        config.K2_current += 1
        count += 1
    return ContractionResult(
        config=config, count=count, status=status, log=list(config.contracted)
    )


@dataclass(frozen=True)
class Verdict:
    is_k3: bool | None  # None encodes "undetermined"
    contractions: int
    reasons: tuple[str, ...]

    def to_json_dict(self, fixed=None) -> dict:
        out = {
            "is_k3": self.is_k3,
            "contractions": self.contractions,
        }
        if fixed is not None:
            out["fixed_locus"] = [
                fixed.n_points,
                fixed.top_genus,
                fixed.num_curves,
            ]
            if fixed.unverified:
                out["unverified"] = list(fixed.unverified)
        if self.is_k3 is not True:
            out["undetermined_reason"] = "; ".join(self.reasons)
        return out


def k3_verdict(candidate: Candidate, contraction: ContractionResult) -> Verdict:
    """Decide whether the minimal model is a K3 surface."""
    inv = candidate.invariants
    reasons = []
    if not (inv.pg == 1 and inv.q == 0 and inv.chi == 2):
        return Verdict(
            is_k3=False,
            contractions=0,
            reasons=(f"Hodge gate failed: pg={inv.pg}, q={inv.q}, chi={inv.chi}",),
        )
    config = contraction.config
    count = contraction.count
    if contraction.status != "minimal":
        reasons.append(contraction.status)
    if count != -inv.K2:
        reasons.append(
            f"contracted {count} curves but -K^2 = {-inv.K2}"
        )
    for node in config.alive_nodes():
        if node.self_int == -1 and node.pa == 0:
            reasons.append(f"(-1)-curve {node.id} survives")
        if node.self_int != 2 * node.pa - 2:
            reasons.append(
                f"adjunction fails on node {node.id}: "
                f"C^2={node.self_int}, pa={node.pa}"
            )
    if inv.euler - count != 24:
        reasons.append(f"Euler ledger {inv.euler - count} != 24")
    if inv.h11 - count != 20:
        reasons.append(f"h11 ledger {inv.h11 - count} != 20")
    if reasons:
        return Verdict(is_k3=None, contractions=count, reasons=tuple(reasons))
    return Verdict(is_k3=True, contractions=count, reasons=())


@dataclass(frozen=True)
class FixedLocus:
    """(number of isolated points, top genus or None, number of curves)."""

    n_points: int
    top_genus: int | None
    num_curves: int
    unverified: tuple[str, ...] = ()

    def as_triple(self):
        return (self.n_points, self.top_genus, self.num_curves)


def invariant_h2_dimension(
    candidate: Candidate, contraction: ContractionResult
) -> int | None:
    """dim H^2(S)^sigma for the induced order-p automorphism, or None.

    Counts the invariant Kunneth classes (v_1 (x) v_2 is fixed exactly
    when the second-factor character dies under the analyzed power), the
    exceptional chain classes orbit by orbit, and removes the invariant
    classes of the contracted curves.
    """
    pair = candidate.pair
    config = contraction.config
    n = pair.order
    e = config.exponent
    alpha = pair.first_profile
    beta = pair.effective_second_profile()
    kunneth = 0
    for s in range(1, n):
        if (e * (n - s)) % n == 0:
            kunneth += (alpha.dim(s) + alpha.dim(n - s)) * (
                beta.dim(n - s) + beta.dim(s)
            )
    chains = 0
    for total, length, orbit, _invariant in config.chain_class_data:
        if total % orbit:
            return None
        chains += length * (total // orbit)
    m1 = 2 + kunneth + chains
    for node_id, _nbrs in contraction.log:
        if not config.nodes[node_id].invariant:
            return None
        m1 -= 1
    return m1


def fixed_locus_euler_expected(
    candidate: Candidate, contraction: ContractionResult
) -> int | None:
    """Euler number of the fixed locus via topological Lefschetz."""
    m1 = invariant_h2_dimension(candidate, contraction)
    if m1 is None:
        return None
    p = candidate.pair.group.prime
    rest = 22 - m1
    if rest % (p - 1):
        return None
    return 2 + m1 - rest // (p - 1)


def fixed_locus(
    candidate: Candidate, contraction: ContractionResult
) -> FixedLocus:
    """Fixed locus (n, g, k+1) of the induced order-p automorphism on S."""
    config = contraction.config
    unverified: list[str] = []

    idx = pairing_index(candidate.pair)
    if idx is None:
        unverified.append("no unique pairing eigenvalue")
    elif (config.exponent * (candidate.pair.order - idx)) % candidate.pair.order == 0:
        unverified.append(
            "analyzed power acts trivially on the 2-form; locus not certified"
        )

    fixed_nodes = [
        node
        for node in config.alive_nodes()
        if node.pointwise_fixed
    ]
    for node in fixed_nodes:
        if node.pa != node.geometric_genus:
            unverified.append(
                f"fixed curve {node.id} acquired a singular point"
            )
    for i, a_node in enumerate(fixed_nodes):
        for b_node in fixed_nodes[i + 1 :]:
            if config.multiplicity(a_node.id, b_node.id):
                unverified.append(
                    f"fixed curves {a_node.id} and {b_node.id} intersect"
                )

    num_curves = len(fixed_nodes)
    top_genus = max((node.pa for node in fixed_nodes), default=None)

    n_points = 0
    # nodes of the surviving configuration joining two invariant,
    # non-fixed components
    for rec in config.point_records:
        node_a, node_b = config.nodes[rec.a], config.nodes[rec.b]
        if not (node_a.alive and node_b.alive):
            continue
        if not rec.fixed:
            continue
        if node_a.pointwise_fixed or node_b.pointwise_fixed:
            continue
        if node_a.invariant and node_b.invariant:
            n_points += rec.npoints

    # one point per blown-down connected cluster, unless a surviving fixed
    # curve passes through it
    contracted_ids = {node_id for node_id, _ in contraction.log}
    parent = {i: i for i in contracted_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touches_fixed = {i: False for i in contracted_ids}
    touches_nonfixed_alive = {i: False for i in contracted_ids}
    for a, b in config.contacts:
        if b in contracted_ids:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        else:
            node_b = config.nodes[b]
            if node_b.alive and node_b.pointwise_fixed:
                touches_fixed[a] = True

    clusters: dict[int, list[int]] = {}
    for i in contracted_ids:
        clusters.setdefault(find(i), []).append(i)
    for members in clusters.values():
        if any(not config.nodes[i].invariant for i in members):
            unverified.append("a contracted curve is not invariant")
            continue
        if any(touches_fixed[i] for i in members):
            continue
        n_points += 1

    locus = FixedLocus(
        n_points=n_points,
        top_genus=top_genus,
        num_curves=num_curves,
        unverified=tuple(sorted(set(unverified))),
    )

    expected = fixed_locus_euler_expected(candidate, contraction)
    if expected is not None:
        actual = locus.n_points + sum(2 - 2 * node.pa for node in fixed_nodes)
        if actual != expected:
            locus = FixedLocus(
                n_points=locus.n_points,
                top_genus=locus.top_genus,
                num_curves=locus.num_curves,
                unverified=locus.unverified
                + (
                    f"Lefschetz cross-check failed: locus Euler number "
                    f"{actual} != {expected}",
                ),
            )
    return locus


@dataclass(frozen=True)
class PipelineResult:
    candidate: Candidate
    verdict: Verdict
    fixed: FixedLocus | None
    contractions: int

    def to_json_dict(self) -> dict:
        out = self.candidate.to_json_dict()
        out.update(self.verdict.to_json_dict(self.fixed))
        return out


def run_pipeline(candidate: Candidate) -> PipelineResult:
    """Resolution configuration -> contraction -> verdict -> fixed locus."""
    inv = candidate.invariants
    if not (inv.pg == 1 and inv.q == 0 and inv.chi == 2):
        verdict = Verdict(
            is_k3=False,
            contractions=0,
            reasons=(f"Hodge gate failed: pg={inv.pg}, q={inv.q}, chi={inv.chi}",),
        )
        return PipelineResult(
            candidate=candidate, verdict=verdict, fixed=None, contractions=0
        )
    config = build_configuration(candidate.pair)
    contraction = contract_to_minimal(config, inv.K2)
    verdict = k3_verdict(candidate, contraction)
    fixed = None
    if verdict.is_k3 is True:
        fixed = fixed_locus(candidate, contraction)
    return PipelineResult(
        candidate=candidate,
        verdict=verdict,
        fixed=fixed,
        contractions=contraction.count,
    )

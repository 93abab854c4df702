"""Curves with a cyclic automorphism group of order p or 2p over P^1.

A pair (C, g) -- a smooth curve with an automorphism g of order n in
{p, 2p} such that C/g is rational -- is encoded by its branch data: a
multiset of local rotations (m, theta), one entry per ramification point,
where m is the stabilizer order and the canonical stabilizer generator
g^(n/m) acts near the point as multiplication by zeta_m^theta.  A branch
point of the base of order m carries n/m ramification points with
identical data, so ramification counts are stored per class.

The spherical exponent of a base branch point with data (m, theta) is

    xi = (n/m) * (theta^(-1) mod m)  (mod n),

and (C, g) exists exactly when the xi generate Z/n and sum to 0 mod n
(with at least three base branch points).  For n = p the sum condition
reads sum_i i^(-1) a_i = 0 mod p on the local-action counts a_i.

The eigenspace dimensions alpha_s of g acting on the holomorphic 1-forms
(eigenvalue zeta_n^s) are produced by the Chevalley-Weil count

    alpha_s = -1 + sum_over_base_points <xi * s / n>,

<.> the fractional part; ``lefschetz_check`` verifies each profile against
the holomorphic fixed-point formula by exact cyclotomic evaluation, which
is a genuinely independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import CyclotomicNumber, root_of_unity
from .exact import mod_inverse

SUPPORTED_PRIMES = (3, 5, 7, 11, 13, 17, 19)

# Remark 4.6 scale: a K3-bound search never needs more ramification points
# on one factor than moduli of projective K3s allow (25 total, >= 3 each).
NONPRIMITIVE_BRANCH_CAP = 22


class AdmissibilityError(ValueError):
    """Branch data that cannot come from an actual cyclic cover of P^1."""


class BoundsError(ValueError):
    """Request outside the provable enumeration bounds."""


def units(n: int) -> list[int]:
    return [u for u in range(1, n) if math.gcd(u, n) == 1]


@dataclass(frozen=True, order=True)
class GroupSpec:
    """Cyclic group Z/n with n = p (doubled=False) or n = 2p."""

    prime: int
    doubled: bool = False

    def __post_init__(self):
        if self.prime not in SUPPORTED_PRIMES:
            raise ValueError(
                f"prime must be an odd prime <= 19, got {self.prime}"
            )

    @property
    def order(self) -> int:
        return 2 * self.prime if self.doubled else self.prime


@dataclass(frozen=True, order=True)
class BranchPoint:
    """Local rotation datum (m, theta) of a ramification point."""

    m: int
    theta: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"stabilizer order must be >= 2, got {self.m}")
        if not 1 <= self.theta < self.m or math.gcd(self.theta, self.m) != 1:
            raise ValueError(
                f"theta must be a unit in 1..m-1, got ({self.m}, {self.theta})"
            )

    def spherical_exponent(self, n: int) -> int:
        """xi = (n/m) * theta^(-1) mod n; generates the order-m subgroup."""
        if n % self.m:
            raise ValueError(f"stabilizer order {self.m} does not divide {n}")
        return ((n // self.m) * mod_inverse(self.theta, self.m)) % n


@dataclass(frozen=True)
class CurveAction:
    """Branch data of (C, g); ``branch`` maps (m, theta) -> ramification count."""

    group: GroupSpec
    branch: tuple[tuple[int, int, int], ...]  # (m, theta, ram_count), sorted

    @staticmethod
    def build(group: GroupSpec, data) -> "CurveAction":
        """Normalize {(m, theta): ram_count}-like data into a CurveAction."""
        counts: dict[tuple[int, int], int] = {}
        for m, theta, count in data:
            if count <= 0:
                continue
            BranchPoint(m, theta)
            counts[(m, theta)] = counts.get((m, theta), 0) + count
        branch = tuple(sorted((m, t, c) for (m, t), c in counts.items()))
        return CurveAction(group=group, branch=branch)

    @property
    def order(self) -> int:
        return self.group.order

    def classes(self):
        return self.branch

    def base_classes(self):
        """(m, theta, number of base branch points) per class."""
        n = self.order
        out = []
        for m, theta, ram in self.branch:
            fiber = n // m
            if ram % fiber:
                raise AdmissibilityError(
                    f"ramification count {ram} of class ({m},{theta}) is not "
                    f"a multiple of the fiber size {fiber}"
                )
            out.append((m, theta, ram // fiber))
        return out

    @property
    def num_base_points(self) -> int:
        return sum(b for _, _, b in self.base_classes())

    def spherical_exponents(self) -> list[int]:
        """One exponent per base branch point, with multiplicity."""
        n = self.order
        out = []
        for m, theta, base in self.base_classes():
            xi = BranchPoint(m, theta).spherical_exponent(n)
            out.extend([xi] * base)
        return sorted(out)

    def to_json_dict(self) -> dict:
        profile = eigenspace_profile(self)
        return {
            "order": self.order,
            "branch": [[m, t, c] for m, t, c in self.branch],
            "genus": genus(self),
            "alpha": list(profile.dims),
        }


@dataclass(frozen=True)
class EigenspaceProfile:
    """dims[s-1] = dim of the zeta_n^s eigenspace of g on H^{1,0}(C)."""

    order: int
    dims: tuple[int, ...]

    @property
    def genus(self) -> int:
        return sum(self.dims)

    def dim(self, s: int) -> int:
        s %= self.order
        if s == 0:
            return 0  # the invariant part vanishes since C/g = P^1
        return self.dims[s - 1]


def genus(action: CurveAction) -> int:
    """Genus from the Riemann-Hurwitz relation; errors if not integral."""
    n = action.order
    total = Fraction(-2)
    for m, _theta, base in action.base_classes():
        total += base * (1 - Fraction(1, m))
    two_g = n * total + 2
    if two_g.denominator != 1 or two_g.numerator % 2 or two_g < 0:
        raise AdmissibilityError(
            f"Riemann-Hurwitz gives non-genus value {two_g}/2"
        )
    return int(two_g) // 2


def is_admissible(action: CurveAction) -> tuple[bool, str]:
    """Existence test for the cover; returns (ok, first failed condition)."""
    n = action.order
    try:
        base = action.base_classes()
    except AdmissibilityError as exc:
        return False, str(exc)
    for m, _t, _b in base:
        if n % m:
            return False, f"stabilizer order {m} does not divide {n}"
    r = sum(b for _, _, b in base)
    if r < 3:
        return False, f"needs at least 3 branch points, got {r}"
    exps = action.spherical_exponents()
    if sum(exps) % n:
        return False, "monodromy: spherical exponents do not sum to 0 mod n"
    if math.gcd(n, *exps) != 1:
        return False, "generation: exponents generate a proper subgroup"
    return True, "ok"


def eigenspace_profile(action: CurveAction) -> EigenspaceProfile:
    """Chevalley-Weil eigenspace dimensions of g on H^{1,0}(C)."""
    ok, why = is_admissible(action)
    if not ok:
        raise AdmissibilityError(why)
    n = action.order
    exps = action.spherical_exponents()
    dims = []
    for s in range(1, n):
        total = Fraction(-1)
        for xi in exps:
            total += Fraction((xi * s) % n, n)
        if total.denominator != 1 or total < 0:
            raise AdmissibilityError(
                f"non-integral eigenspace dimension alpha_{s} = {total}"
            )
        dims.append(int(total))
    profile = EigenspaceProfile(order=n, dims=tuple(dims))
    if profile.genus != genus(action):
        raise AdmissibilityError(
            "eigenspace dimensions do not sum to the Riemann-Hurwitz genus"
        )
    return profile


@lru_cache(maxsize=None)
def _lefschetz_term(p: int, n: int, m: int, exponent: int) -> CyclotomicNumber:
    """1/(1 - zeta_m^exponent) evaluated exactly inside Q(zeta_p)."""
    zeta = root_of_unity(p, n, (n // m) * exponent)
    return (CyclotomicNumber.one(p) - zeta).inverse()


def lefschetz_check(action: CurveAction, profile: EigenspaceProfile) -> bool:
    """Exact holomorphic Lefschetz fixed-point identity for every g^k.

    g^k fixes a ramification point of stabilizer order m iff (n/m) | k, and
    acts there as zeta_m^(theta * t) for k = (n/m) * t.  The identity

        1 - sum_s alpha_s zeta_n^(ks) = sum_fixed 1/(1 - zeta_P)

    must hold in the cyclotomic field for k = 1..n-1.
    """
    n = action.order
    p = action.group.prime
    if profile.order != n or len(profile.dims) != n - 1:
        return False
    for k in range(1, n):
        lhs = CyclotomicNumber.one(p)
        for s, alpha in enumerate(profile.dims, start=1):
            if alpha:
                lhs = lhs - alpha * root_of_unity(p, n, k * s)
        rhs = CyclotomicNumber.zero(p)
        for m, theta, ram in action.branch:
            step = n // m
            if k % step:
                continue
            t = k // step
            rhs = rhs + ram * _lefschetz_term(p, n, m, (theta * t) % m)
        if lhs != rhs:
            return False
    return True


def max_genus_bound(group: GroupSpec, primitive_only: bool = False):
    """(g_max, r_max) for curves carrying a 1-dimensional eigenspace."""
    p = group.prime
    if not group.doubled:
        return (p - 1) ** 2, 2 * p
    if not primitive_only:
        raise BoundsError(
            "no genus bound exists for order-2p actions without the "
            "primitive-eigenvalue constraint; supply an explicit "
            "ramification cap instead"
        )
    return (2 * p - 1) ** 2, 4 * p


def _branch_point_classes(group: GroupSpec):
    """All (m, theta, ram points per base point) classes for the group."""
    n = group.order
    p = group.prime
    if not group.doubled:
        return [(p, theta, 1) for theta in range(1, p)]
    classes = [(2 * p, theta, 1) for theta in units(2 * p)]
    classes += [(p, theta, 2) for theta in range(1, p)]
    classes += [(2, 1, p)]
    return classes


def _compositions(total: int, slots: int):
    """Non-negative integer vectors of given length summing to total."""
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, slots - 1):
            yield (head,) + rest


def twist_action(action: CurveAction, t: int) -> CurveAction:
    """Branch data of (C, g^u) for the unit u with u*t = 1, i.e. theta -> t*theta."""
    n = action.order
    if math.gcd(t, n) != 1:
        raise ValueError(f"twist {t} is not a unit mod {n}")
    data = [(m, (theta * t) % m, c) for m, theta, c in action.branch]
    return CurveAction.build(action.group, data)


def twist_profile(profile: EigenspaceProfile, t: int) -> EigenspaceProfile:
    """Profile of the twisted generator: new alpha_s = old alpha_{s t^{-1}}."""
    n = profile.order
    t_inv = mod_inverse(t, n)
    dims = tuple(profile.dims[(s * t_inv) % n - 1] for s in range(1, n))
    return EigenspaceProfile(order=n, dims=dims)


def canonical_key(action: CurveAction) -> tuple[int, ...]:
    """Minimal sorted spherical-exponent multiset over all twists."""
    n = action.order
    best = None
    for t in units(n):
        key = tuple(twist_action(action, t).spherical_exponents())
        if best is None or key < best:
            best = key
    return best


def canonicalize(action: CurveAction) -> CurveAction:
    """Canonical representative of the twist/permutation class."""
    n = action.order
    best = None
    best_action = action
    for t in units(n):
        twisted = twist_action(action, t)
        key = tuple(twisted.spherical_exponents())
        if best is None or key < best:
            best, best_action = key, twisted
    return best_action


def intermediate_quotient_genus(profile: EigenspaceProfile, m: int) -> int:
    """Genus of C/H for the order-m subgroup H = <g^(n/m)>.

    An eigenvector of eigenvalue zeta_n^s is H-invariant iff m | s, so the
    quotient genus is the sum of those alpha_s.  m = n gives C/g = P^1.
    """
    n = profile.order
    if m < 1 or n % m:
        raise ValueError(f"{m} does not divide the group order {n}")
    return sum(profile.dims[s - 1] for s in range(1, n) if s % m == 0)


def _branch_cap(group: GroupSpec, require_dim1: bool, primitive_only: bool) -> int:
    if not group.doubled:
        if require_dim1:
            return 2 * group.prime
        raise BoundsError(
            "unbounded request: enumeration without the dim-1 filter needs "
            "an explicit branch-point cap"
        )
    if primitive_only:
        return 4 * group.prime
    return NONPRIMITIVE_BRANCH_CAP


def enumerate_curves(
    group: GroupSpec,
    branch_points: int | None = None,
    max_branch_points: int | None = None,
    require_dim1: bool = True,
    primitive_only: bool = False,
) -> list[tuple[CurveAction, EigenspaceProfile]]:
    """All admissible (C, g) up to canonical equivalence.

    Exactly one of ``branch_points`` (exact base branch point count) or
    ``max_branch_points`` may be given; otherwise the provable cap for the
    requested filter is used.  With ``require_dim1`` only curves carrying a
    one-dimensional eigenspace are kept (of primitive eigenvalue order when
    ``primitive_only``).  Output is sorted by canonical key, duplicate-free.
    """
    n = group.order
    if branch_points is not None and max_branch_points is not None:
        raise ValueError("give either branch_points or max_branch_points")
    if branch_points is not None:
        # an exact count is itself a bound; mode caps still apply when the
        # corresponding filters are requested
        if not group.doubled and not require_dim1:
            cap = branch_points
        else:
            cap = _branch_cap(group, require_dim1, primitive_only)
        if not 3 <= branch_points <= cap:
            raise BoundsError(
                f"branch point count {branch_points} outside 3..{cap}"
            )
        r_values = [branch_points]
    else:
        cap = _branch_cap(group, require_dim1, primitive_only)
        top = cap if max_branch_points is None else max_branch_points
        if top > cap:
            raise BoundsError(f"branch point cap {top} exceeds bound {cap}")
        r_values = list(range(3, top + 1))

    classes = _branch_point_classes(group)
    g_cap = None
    if require_dim1:
        try:
            g_cap, _ = max_genus_bound(group, primitive_only)
        except BoundsError:
            g_cap = None

    seen: dict[tuple[int, ...], tuple[CurveAction, EigenspaceProfile]] = {}
    for r in r_values:
        for counts in _compositions(r, len(classes)):
            data = [
                (m, theta, base * ram_per_base)
                for (m, theta, ram_per_base), base in zip(classes, counts)
                if base
            ]
            if not data:
                continue
            action = CurveAction.build(group, data)
            ok, _why = is_admissible(action)
            if not ok:
                continue
            profile = eigenspace_profile(action)
            if require_dim1:
                hits = [
                    s
                    for s in range(1, n)
                    if profile.dims[s - 1] == 1
                    and (not primitive_only or math.gcd(s, n) == 1)
                ]
                if not hits:
                    continue
                if g_cap is not None and profile.genus > g_cap:
                    # the genus bound is a theorem for filtered curves;
                    # exceeding it means corrupted data, never skip silently
                    raise AdmissibilityError(
                        f"filtered curve of genus {profile.genus} exceeds "
                        f"the bound {g_cap}"
                    )
            key = canonical_key(action)
            if key not in seen:
                canon = canonicalize(action)
                seen[key] = (canon, eigenspace_profile(canon))
    return [seen[key] for key in sorted(seen)]


def dp_curve(p: int) -> CurveAction:
    """The rigid hyperelliptic curve u^p = v^2 - 1 with its order-p action.

    The order-p automorphism multiplies u by a p-th root of unity; the
    local rotations are zeta_p^(p-1) at two points and zeta_p^((p+1)/2)
    at the third.
    """
    group = GroupSpec(prime=p, doubled=False)
    return CurveAction.build(
        group, [(p, p - 1, 2), (p, (p + 1) // 2, 1)]
    )


def dp_tau_curve(p: int) -> CurveAction:
    """The same curve with the order-2p action (rotation times involution).

    One point of full stabilizer (local action the canonical primitive
    2p-th root), one base point of order p (two ramification points), and
    one of order 2 (p ramification points).
    """
    group = GroupSpec(prime=p, doubled=True)
    return CurveAction.build(
        group, [(2 * p, 1, 1), (p, p - 2, 2), (2, 1, p)]
    )

"""Exact arithmetic for cyclic quotient singularities.

Everything in this package is computed over the rationals; floating point
is banned because every downstream check is an exact integer or rational
identity.  Rational numbers are ``fractions.Fraction`` throughout.

A cyclic quotient singularity of type 1/n(1, q) (the plane divided by
diag(zeta_n, zeta_n^q), gcd(q, n) = 1) is resolved by a Hirzebruch-Jung
string of rational curves whose self-intersections -b_1, ..., -b_k come
from the negative-regular continued fraction

    n/q = b_1 - 1/(b_2 - 1/(... - 1/b_k)),    b_i >= 2.

The per-singularity correction terms used for K^2 and the Euler number of
a product-quotient surface are

    h = 2 - (2 + q + q')/n - sum(b_i - 2),    e = k + 1 - 1/n,

with q' the inverse of q mod n.  Swapping q for q' reverses the string and
leaves h and e unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def mod_inverse(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m``, in 1..m-1.

    Raises ValueError when gcd(a, m) != 1; a wrong value is never returned.
    """
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    a %= m
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return pow(a, -1, m)


def continued_fraction(n: int, q: int) -> list[int]:
    """Negative-regular (Hirzebruch-Jung) continued fraction of n/q.

    Returns [b_1, ..., b_k] with all b_i >= 2 such that the nested fraction
    b_1 - 1/(b_2 - ...) equals n/q exactly.
    """
    if not 0 < q < n:
        raise ValueError(f"need 0 < q < n, got q={q}, n={n}")
    if math.gcd(n, q) != 1:
        raise ValueError(f"need gcd(q, n) = 1, got q={q}, n={n}")
    chain = []
    r = Fraction(n, q)
    while True:
        b = -(-r.numerator // r.denominator)  # ceiling
        chain.append(b)
        if b == r:
            break
        r = 1 / (b - r)
    return chain


def hj_evaluate(chain: list[int]) -> Fraction:
    """Value of the nested fraction b_1 - 1/(b_2 - 1/(...))."""
    if not chain:
        raise ValueError("empty Hirzebruch-Jung string")
    value = Fraction(chain[-1])
    for b in reversed(chain[:-1]):
        value = b - 1 / value
    return value


@dataclass(frozen=True)
class SingularityInvariants:
    """Resolution data of the cyclic quotient singularity 1/n(1, q)."""

    order: int
    q: int
    q_prime: int
    chain: tuple[int, ...]
    h: Fraction
    e: Fraction

    @property
    def num_curves(self) -> int:
        return len(self.chain)


def singularity_invariants(n: int, q: int) -> SingularityInvariants:
    """h, e and the resolution string of the singularity 1/n(1, q)."""
    chain = continued_fraction(n, q)
    q_prime = mod_inverse(q, n)
    h = 2 - Fraction(2 + q + q_prime, n) - sum(b - 2 for b in chain)
    e = len(chain) + 1 - Fraction(1, n)
    return SingularityInvariants(
        order=n, q=q, q_prime=q_prime, chain=tuple(chain), h=h, e=e
    )

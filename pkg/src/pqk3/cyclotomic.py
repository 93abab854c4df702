"""Exact arithmetic in the p-th cyclotomic field, p an odd prime.

Elements are stored by their coordinates in the power basis
1, z, ..., z^(p-2) of Q(z), z a primitive p-th root of unity.  The normal
form is unique: products are reduced with z^p = 1 followed by elimination
of z^(p-1) via 1 + z + ... + z^(p-1) = 0, so equality is decidable and
structural.

Roots of unity of order 2p live in the same field (the 2p-th and p-th
cyclotomic fields coincide for odd p); the canonical choice here is

    zeta_2p := -z^((p+1)/2),

which satisfies zeta_2p^2 = z and zeta_2p^p = -1.  ``root_of_unity``
produces zeta_n^j for n = p or n = 2p in this representation, so the
holomorphic Lefschetz identities for both group orders are evaluated in a
single field.
"""

from __future__ import annotations

from fractions import Fraction

_SMALL_ODD_PRIMES = (3, 5, 7, 11, 13, 17, 19)


def _check_prime(p: int) -> None:
    if p not in _SMALL_ODD_PRIMES and not _is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if p == 2:
        raise ValueError("the field is only defined for odd primes")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class CyclotomicNumber:
    """An element of Q(zeta_p) in reduced power-basis coordinates."""

    __slots__ = ("prime", "coeffs")

    def __init__(self, prime: int, coeffs):
        _check_prime(prime)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != prime - 1:
            raise ValueError(
                f"expected {prime - 1} coordinates, got {len(coeffs)}"
            )
        object.__setattr__(self, "prime", prime)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def from_rational(cls, p: int, value) -> "CyclotomicNumber":
        coeffs = [Fraction(value)] + [Fraction(0)] * (p - 2)
        return cls(p, coeffs)

    @classmethod
    def zero(cls, p: int) -> "CyclotomicNumber":
        return cls.from_rational(p, 0)

    @classmethod
    def one(cls, p: int) -> "CyclotomicNumber":
        return cls.from_rational(p, 1)

    @classmethod
    def zeta_pow(cls, p: int, k: int) -> "CyclotomicNumber":
        """zeta_p^k in normal form (z^(p-1) rewritten via the vanishing sum)."""
        k %= p
        if k < p - 1:
            coeffs = [Fraction(0)] * (p - 1)
            coeffs[k] = Fraction(1)
            return cls(p, coeffs)
        return cls(p, [Fraction(-1)] * (p - 1))

    # -- ring structure ----------------------------------------------

    def _compat(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.prime != self.prime:
                raise ValueError("mixed cyclotomic fields")
            return other
        return CyclotomicNumber.from_rational(self.prime, other)

    def __add__(self, other):
        other = self._compat(other)
        return CyclotomicNumber(
            self.prime, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.prime, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._compat(other))

    def __rsub__(self, other):
        return self._compat(other) - self

    def __mul__(self, other):
        other = self._compat(other)
        p = self.prime
        # group-ring convolution with z^p = 1 ...
        raw = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    raw[(i + j) % p] += a * b
        # ... then z^(p-1) = -(1 + z + ... + z^(p-2))
        top = raw[p - 1]
        return CyclotomicNumber(p, [raw[i] - top for i in range(p - 1)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._compat(other).inverse()

    def __rtruediv__(self, other):
        return self._compat(other) * self.inverse()

    def inverse(self) -> "CyclotomicNumber":
        """Field inverse via the extended Euclidean algorithm mod Phi_p."""
        p = self.prime
        if self.is_zero():
            raise ZeroDivisionError("inverting zero in the cyclotomic field")
        phi = [Fraction(1)] * p  # 1 + x + ... + x^(p-1)
        found = _poly_inverse(list(self.coeffs), phi)
        found += [Fraction(0)] * (p - 1 - len(found))
        return CyclotomicNumber(p, found[: p - 1])

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(self.prime, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.prime == other.prime and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prime, self.coeffs))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{i}")
        return " + ".join(terms) if terms else "0"


def _poly_divmod(a, b):
    a = a[:]
    b = b[:]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b):
        k = len(a) - len(b)
        c = a[-1] * inv_lead
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] -= c * bi
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _poly_inverse(a, modulus):
    """Inverse of polynomial ``a`` modulo ``modulus`` over Q."""
    # extended Euclid: r0 = modulus, r1 = a
    r0, r1 = modulus[:], a[:]
    t0, t1 = [Fraction(0)], [Fraction(1)]
    while any(c != 0 for c in r1):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        qt1 = _poly_mul(q, t1)
        t0, t1 = t1, _poly_sub(t0, qt1)
    # r0 is now gcd; it must be a nonzero constant
    while r0 and r0[-1] == 0:
        r0.pop()
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo Phi_p")
    scale = 1 / r0[0]
    return [c * scale for c in t0]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else [Fraction(0)]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def root_of_unity(p: int, n: int, j: int) -> CyclotomicNumber:
    """zeta_n^j inside Q(zeta_p), for n = p or n = 2p.

    For n = 2p this uses zeta_2p = -zeta_p^((p+1)/2), the primitive 2p-th
    root whose square is zeta_p.
    """
    if n == p:
        return CyclotomicNumber.zeta_pow(p, j)
    if n == 2 * p:
        j %= 2 * p
        base = CyclotomicNumber.zeta_pow(p, (j * ((p + 1) // 2)) % p)
        return base if j % 2 == 0 else -base
    raise ValueError(f"order {n} is not {p} or {2 * p}")

"""Univariate polynomials over a :class:`FiniteField`."""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

from ..errors import ParameterError
from .fields import FiniteField, prime_factors


class Poly:
    """Immutable polynomial with little-endian coefficients, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        for c in cs:
            if not 0 <= c < field.order:
                raise ParameterError(f"coefficient {c} is not an element of {field!r}")
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # ----------------------------------------------------------- constructors
    @classmethod
    def x(cls, field: FiniteField) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field: FiniteField, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def from_ints(cls, field: FiniteField, ints: Sequence[int]) -> "Poly":
        """Coefficients given as integers, reduced into the prime field."""
        return cls(field, (field.from_int(c) for c in ints))

    # ---------------------------------------------------------------- basics
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

    def format(self, var: str = "y") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono:
                terms.append(f"{c}*{mono}")
            else:
                terms.append(str(c))
        return " + ".join(terms)

    # ------------------------------------------------------------ arithmetic
    def _check(self, other: "Poly"):
        if self.field != other.field:
            raise ParameterError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, (F.add(self[k], other[k]) for k in range(n)))

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, (F.sub(self[k], other[k]) for k in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(self.field, (self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        if not self.coeffs or not other.coeffs:
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, (self.field.mul(c, a) for a in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return Poly(self.field, (0,) * k + self.coeffs)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(F), self
        quo = [0] * dq
        inv_lead = F.inv(other.lead)
        db = other.degree
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            t = F.mul(c, inv_lead)
            quo[k - db] = t
            for i, b in enumerate(other.coeffs):
                if b:
                    rem[k - db + i] = F.sub(rem[k - db + i], F.mul(t, b))
        return Poly(F, quo), Poly(F, rem[:db])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def powmod(self, n: int, mod: "Poly") -> "Poly":
        result = Poly.const(self.field, 1) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def __call__(self, a: int, field: FiniteField | None = None) -> int:
        """Evaluate at ``a``, which may live in an extension ``field`` of ours."""
        F = field or self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def valuation(self) -> int | None:
        """Order of vanishing at 0; ``None`` for the zero polynomial."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_irreducible(self) -> bool:
        """Rabin's test over the coefficient field."""
        n = self.degree
        if n < 1:
            return False
        if n == 1:
            return True
        F = self.field
        f = self.monic()
        Q = F.order
        x = Poly.x(F)
        if (x.powmod(Q**n, f) - x) % f != Poly(F):
            return False
        for r in prime_factors(n):
            h = x.powmod(Q ** (n // r), f) - x
            if poly_gcd(h, f).degree != 0:
                return False
        return True


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


@functools.lru_cache(maxsize=None)
def least_irreducible(field: FiniteField, degree: int) -> Poly:
    """Lexicographically least monic irreducible polynomial of ``degree``."""
    Q = field.order
    for code in range(Q**degree):
        cs = []
        c = code
        for _ in range(degree):
            c, r = divmod(c, Q)
            cs.append(r)
        if degree > 1 and cs[0] == 0:
            continue
        f = Poly(field, cs + [1])
        if f.is_irreducible():
            return f
    raise AssertionError("irreducible polynomials exist in every degree")


def monic_polys(field: FiniteField, degree: int):
    Q = field.order
    for code in range(Q**degree):
        cs = []
        c = code
        for _ in range(degree):
            c, r = divmod(c, Q)
            cs.append(r)
        yield Poly(field, cs + [1])


def det_poly(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square polynomial matrix by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        raise ParameterError("empty matrix")
    F = rows[0][0].field
    M = [list(r) for r in rows]
    sign = 1
    prev = Poly.const(F, 1)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if not M[i][k].is_zero()), None)
        if piv is None:
            return Poly(F)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q, r = divmod(num, prev)
                if not r.is_zero():
                    raise AssertionError("Bareiss division must be exact")
                M[i][j] = q
            M[i][k] = Poly(F)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign == 1 else -d

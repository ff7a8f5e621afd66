"""Truncated power series F[[y]]/(y^M) and elementary divisors over F[[y]].

A :class:`TruncSeries` records an element of F[[y]] known modulo ``y**prec``.
Arithmetic tracks what is actually determined, so every later valuation or
pivot decision either is certain or raises :class:`InsufficientPrecision`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..errors import InsufficientPrecision, ParameterError, SingularMatrixError
from .fields import FiniteField
from .poly import Poly, det_poly


class TruncSeries:
    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field: FiniteField, coeffs: Iterable[int], prec: int):
        if prec < 0:
            raise ParameterError("precision must be non-negative")
        cs = [int(c) for c in coeffs][:prec]
        cs += [0] * (prec - len(cs))
        self.field = field
        self.coeffs = tuple(cs)
        self.prec = prec

    @classmethod
    def const(cls, field: FiniteField, c: int, prec: int) -> "TruncSeries":
        return cls(field, (c,), prec)

    @classmethod
    def one(cls, field: FiniteField, prec: int) -> "TruncSeries":
        return cls(field, (1,), prec)

    @classmethod
    def zero(cls, field: FiniteField, prec: int) -> "TruncSeries":
        return cls(field, (), prec)

    @classmethod
    def from_poly(cls, poly: Poly, prec: int) -> "TruncSeries":
        return cls(poly.field, poly.coeffs, prec)

    def __repr__(self) -> str:
        terms = [f"{c}*y^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"TruncSeries({' + '.join(terms) or '0'} + O(y^{self.prec}))"

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            return self.field == other.field and self.prec == other.prec and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.prec))

    def agrees(self, other: "TruncSeries") -> bool:
        """Equal on the common known range."""
        n = min(self.prec, other.prec)
        return self.coeffs[:n] == other.coeffs[:n]

    @property
    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or ``None`` when it is ``>= prec``."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, prec: int) -> "TruncSeries":
        return TruncSeries(self.field, self.coeffs, min(prec, self.prec))

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        F = self.field
        n = min(self.prec, other.prec)
        return TruncSeries(F, (F.add(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])), n)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        F = self.field
        n = min(self.prec, other.prec)
        return TruncSeries(F, (F.sub(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])), n)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.field, (self.field.neg(c) for c in self.coeffs), self.prec)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        F = self.field
        n = min(self.prec, other.prec)
        out = [0] * n
        a, b = self.coeffs, other.coeffs
        for i in range(n):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return TruncSeries(F, out, n)

    def scale(self, c: int) -> "TruncSeries":
        return TruncSeries(self.field, (self.field.mul(c, a) for a in self.coeffs), self.prec)

    def map_coeffs(self, fn) -> "TruncSeries":
        return TruncSeries(self.field, (fn(c) for c in self.coeffs), self.prec)

    def shift_down(self, k: int) -> "TruncSeries":
        """Divide by ``y**k``; the low ``k`` coefficients must be known zeros."""
        if k > self.prec:
            raise InsufficientPrecision(f"cannot divide by y^{k} at precision {self.prec}")
        if any(self.coeffs[:k]):
            raise ParameterError(f"series is not divisible by y^{k}")
        return TruncSeries(self.field, self.coeffs[k:], self.prec - k)

    def shift_up(self, k: int) -> "TruncSeries":
        return TruncSeries(self.field, (0,) * k + self.coeffs, self.prec + k)

    def inverse(self) -> "TruncSeries":
        F = self.field
        if self.prec == 0:
            return self
        if self.coeffs[0] == 0:
            raise ParameterError("only series with valuation 0 are invertible")
        inv0 = F.inv(self.coeffs[0])
        out = [inv0]
        a = self.coeffs
        for n in range(1, self.prec):
            acc = 0
            for k in range(1, n + 1):
                if a[k]:
                    acc = F.add(acc, F.mul(a[k], out[n - k]))
            out.append(F.neg(F.mul(acc, inv0)))
        return TruncSeries(F, out, self.prec)


def _as_series_matrix(M, prec: int | None):
    rows = [list(r) for r in M]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ParameterError("smith_valuations needs a non-empty square matrix")
    if all(isinstance(e, TruncSeries) for r in rows for e in r):
        return rows
    if all(isinstance(e, Poly) for r in rows for e in r):
        det = det_poly(rows)
        if det.is_zero():
            raise SingularMatrixError("matrix is singular over the fraction field")
        P = prec if prec is not None else det.valuation() + 1
        return [[TruncSeries.from_poly(e, P) for e in r] for r in rows]
    raise ParameterError("entries must be all TruncSeries or all Poly")


def smith_valuations(M: Sequence[Sequence], prec: int | None = None) -> tuple[int, ...]:
    """y-adic valuations of the elementary divisors of ``M`` over F[[y]], ascending.

    Pivots are minimum-valuation entries with ties broken by (row, col).  A
    pivot whose valuation cannot be certified at the available precision
    raises :class:`InsufficientPrecision`.
    """
    A = _as_series_matrix(M, prec)
    n = len(A)
    vals = []
    for s in range(n):
        best = None
        undetermined = None
        for i in range(s, n):
            for j in range(s, n):
                e = A[i][j]
                v = e.valuation
                if v is None:
                    undetermined = e.prec if undetermined is None else min(undetermined, e.prec)
                elif best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            raise InsufficientPrecision("remaining block is zero to its known precision")
        v, pi, pj = best
        if undetermined is not None and undetermined <= v:
            raise InsufficientPrecision(
                f"pivot valuation {v} not certified; an entry is only known to be 0 mod y^{undetermined}"
            )
        A[s], A[pi] = A[pi], A[s]
        for row in A:
            row[s], row[pj] = row[pj], row[s]
        unit_inv = A[s][s].shift_down(v).inverse()
        for i in range(s + 1, n):
            factor = A[i][s].shift_down(v) * unit_inv
            for j in range(s + 1, n):
                A[i][j] = A[i][j] - factor * A[s][j]
        vals.append(v)
    return tuple(sorted(vals))

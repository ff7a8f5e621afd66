"""Norm equations for the cyclic extension F_{q^d}/F_q, locally and modulo a prime.

Locally we need ``w`` in F_{q^d}[[y]] with ``w * phi(w) * ... * phi^{d-1}(w) = 1 + y``;
at a finite place we need the same identity in F_{q^d} (x) F_{q^e} with
``1 + y`` replaced by its residue.  Either ``w`` turns the cyclic algebra with
``z^d = 1 + y`` into a matrix algebra via ``z -> R(w) * Frobenius``.
"""

from __future__ import annotations

import itertools
import random

from ..errors import ParameterError, SearchExhausted
from .fields import FiniteField
from .poly import Poly
from .series import TruncSeries

EXHAUSTIVE_LIMIT = 1 << 20


def frobenius_power(K: FiniteField, q: int, a: int, k: int = 1) -> int:
    """``a ** (q ** k)`` in ``K``."""
    for _ in range(k):
        a = K.pow(a, q)
    return a


def trace(K: FiniteField, q: int, d: int, a: int) -> int:
    acc = 0
    for _ in range(d):
        acc = K.add(acc, a)
        a = K.pow(a, q)
    return acc


def norm_equation_series(K: FiniteField, q: int, d: int, M: int) -> TruncSeries:
    """Solve ``N(w) = 1 + y`` mod ``y**M`` in ``K[[y]]`` with ``K = F_{q^d}``.

    Hensel lifting: with ``w = 1 mod y`` the y^k coefficient of the norm moves
    by ``Tr(c)`` when ``c y^k`` is added, and the trace is onto F_q.
    """
    if M < 1:
        raise ParameterError("precision must be at least 1")
    t1 = next(t for t in K.elements() if trace(K, q, d, t) == 1)
    target = TruncSeries(K, (1, 1), M)
    w = TruncSeries.one(K, M)
    for k in range(1, M):
        r = (target - series_norm(K, q, d, w)).coeffs[k]
        if r:
            cs = list(w.coeffs)
            cs[k] = K.add(cs[k], K.mul(r, t1))
            w = TruncSeries(K, cs, M)
    return w


def series_frobenius(K: FiniteField, q: int, s: TruncSeries, k: int = 1) -> TruncSeries:
    return s.map_coeffs(lambda c: frobenius_power(K, q, c, k))


def series_norm(K: FiniteField, q: int, d: int, w: TruncSeries) -> TruncSeries:
    out = w
    cur = w
    for _ in range(d - 1):
        cur = series_frobenius(K, q, cur)
        out = out * cur
    return out


class TensorRing:
    """F_{q^d} (x)_{F_q} F_{q^e} presented as F_{q^e}[x]/(m(x)).

    ``m`` is the F_q-minimal polynomial of the generator of F_{q^d}; elements are
    tuples of ``d`` elements of F_{q^e}.  ``phi_hat`` is the ring map x -> x^q.
    """

    def __init__(self, big: FiniteField, m: Poly, q: int):
        if m.lead != 1:
            raise ParameterError("structure polynomial must be monic")
        self.big = big
        self.m = m
        self.q = q
        self.d = m.degree
        self._mcoeffs = m.coeffs
        self._xq_powers = [self._pow_x(q * k) for k in range(self.d)]

    def zero(self):
        return (0,) * self.d

    def one(self):
        return (1,) + (0,) * (self.d - 1)

    def scalar(self, c: int):
        return (c,) + (0,) * (self.d - 1)

    def _reduce(self, coeffs: list[int]) -> tuple:
        F = self.big
        d = self.d
        m = self._mcoeffs
        cs = list(coeffs)
        for k in range(len(cs) - 1, d - 1, -1):
            c = cs[k]
            if c:
                for t in range(d):
                    cs[k - d + t] = F.sub(cs[k - d + t], F.mul(c, m[t]))
                cs[k] = 0
        cs = cs[:d] + [0] * (d - len(cs[:d]))
        return tuple(cs)

    def _pow_x(self, n: int) -> tuple:
        result = self.one()
        base = (0, 1) + (0,) * (self.d - 2) if self.d > 1 else self._reduce([0, 1])
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def add(self, a, b):
        F = self.big
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def mul(self, a, b):
        F = self.big
        out = [0] * (2 * self.d - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self._reduce(out)

    def phi_hat(self, a, k: int = 1):
        F = self.big
        for _ in range(k):
            acc = [0] * self.d
            for coef, img in zip(a, self._xq_powers):
                if coef:
                    for t, v in enumerate(img):
                        if v:
                            acc[t] = F.add(acc[t], F.mul(coef, v))
            a = tuple(acc)
        return a

    def norm(self, a):
        out = a
        cur = a
        for _ in range(self.d - 1):
            cur = self.phi_hat(cur)
            out = self.mul(out, cur)
        return out

    def elements(self):
        for tup in itertools.product(range(self.big.order), repeat=self.d):
            yield tuple(reversed(tup))


def norm_equation_finite(ring: TensorRing, target: int, seed: int = 0, max_tries: int = 200_000):
    """Find ``w`` in ``ring`` with ``phi_hat``-norm equal to the scalar ``target``.

    Exhaustive for rings with at most 2^20 elements, seeded sampling otherwise.
    """
    if target == 0:
        raise ParameterError("target must be nonzero")
    want = ring.scalar(target)
    if want == ring.one():
        return ring.one()
    size = ring.big.order**ring.d
    if size <= EXHAUSTIVE_LIMIT:
        for w in ring.elements():
            if ring.norm(w) == want:
                return w
        raise SearchExhausted("no solution in the full ring; the target is not a norm")
    rng = random.Random(seed)
    for _ in range(max_tries):
        w = tuple(rng.randrange(ring.big.order) for _ in range(ring.d))
        if ring.norm(w) == want:
            return w
    raise SearchExhausted(f"no norm solution after {max_tries} random samples (seed {seed})")

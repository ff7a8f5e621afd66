"""Finite fields GF(p^m) and relative extensions, with elements encoded as ints.

An element of an extension ``K = B[x]/(f)`` of degree ``m`` over a base field
``B`` of order ``r`` is the int ``sum(c_k * r**k)`` where ``c_k`` are the
coefficients (themselves ints of ``B``) of its residue polynomial.  Base-field
elements therefore keep their int value inside every extension, which is how
towers such as F_q < F_{q^d} and F_q < F_{q^e} share a common F_q.

Scalar operations are methods of the field; ``v``-prefixed methods act
elementwise on numpy integer arrays.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

import numpy as np

from ..errors import ParameterError

_TABLE_LIMIT = 1 << 20
_ADD_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, a)`` with ``q == p**a``; raise if ``q`` is not a prime power."""
    if q < 2:
        raise ParameterError(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise ParameterError(f"{q} is not a prime power")
    p = fs[0]
    a = 0
    while q > 1:
        q //= p
        a += 1
    return p, a


class FiniteField:
    """A finite field, either prime or a simple extension of another finite field.

    Use :func:`field_make` or :meth:`extension` rather than calling this directly.
    """

    def __init__(self, p: int, modulus: Sequence[int] | None = None, base: "FiniteField | None" = None):
        if base is None:
            if not is_prime(p):
                raise ParameterError(f"characteristic {p} is not prime")
            if modulus is not None and len(modulus) > 2:
                base = FiniteField(p)
            else:
                modulus = None
        self.p = p
        self.base = base
        if base is None:
            self.degree = 1
            self.order = p
            self.modulus = None
            self.radix = p
            self.absolute_degree = 1
        else:
            modulus = tuple(int(c) for c in modulus)
            if modulus[-1] != 1:
                raise ParameterError("modulus must be monic")
            self.modulus = modulus
            self.degree = len(modulus) - 1
            self.radix = base.order
            self.order = base.order ** self.degree
            self.absolute_degree = base.absolute_degree * self.degree
        if self.order > _TABLE_LIMIT and self.base is not None:
            raise ParameterError(f"field of order {self.order} exceeds the table limit")
        self._log = None
        self._exp = None
        self._add_table = None
        self._pow_radix = [self.radix ** k for k in range(self.degree)]
        if self.base is not None:
            self._build_tables()

    # ------------------------------------------------------------------ identity
    @property
    def signature(self) -> tuple:
        if self.base is None:
            return (self.p,)
        return (self.base.signature, self.modulus)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and self.signature == other.signature

    def __hash__(self) -> int:
        return hash(self.signature)

    def __repr__(self) -> str:
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.order}; {self.base!r}[x]/{self.modulus})"

    @property
    def prime_field(self) -> "FiniteField":
        f = self
        while f.base is not None:
            f = f.base
        return f

    def elements(self) -> range:
        return range(self.order)

    @property
    def gen(self) -> int:
        """The class of ``x`` (for a prime field, 1)."""
        return self.radix if self.base is not None else 1

    # ------------------------------------------------------------- coefficients
    def to_coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.degree):
            a, c = divmod(a, self.radix)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        v = 0
        for k, c in enumerate(coeffs):
            v += int(c) * self._pow_radix[k]
        return v

    # ---------------------------------------------------------------- scalars
    def add(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return int(self._add_table[a, b])
        return self._digitwise(a, b, 1)

    def neg(self, a: int) -> int:
        if self.base is None:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._digitwise(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        if self.base is None:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return self._digitwise(a, b, -1)

    def _digitwise(self, a: int, b: int, sign: int) -> int:
        p = self.p
        out = 0
        scale = 1
        for _ in range(self.absolute_degree):
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            out += ((da + sign * db) % p) * scale
            scale *= p
        return out

    def mul(self, a: int, b: int) -> int:
        if self.base is None:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.base is None:
            return pow(a, self.p - 2, self.p)
        return int(self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        if self.base is None:
            return pow(a, n % (self.p - 1), self.p)
        return int(self._exp[(self._log[a] * n) % (self.order - 1)])

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        if a == 0:
            return True
        if self.p == 2:
            return True
        return self.pow(a, (self.order - 1) // 2) == 1

    def primitive_element(self) -> int:
        if self.base is None:
            return _prime_primitive_root(self.p)
        return int(self._exp[1])

    # ------------------------------------------------------------ slow path
    def _slow_mul(self, a: int, b: int) -> int:
        B = self.base
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                if y:
                    prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        m = self.modulus
        for k in range(len(prod) - 1, self.degree - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            for t in range(self.degree):
                prod[k - self.degree + t] = B.sub(prod[k - self.degree + t], B.mul(c, m[t]))
            prod[k] = 0
        return self.from_coeffs(prod[: self.degree])

    def _build_tables(self):
        n = self.order
        if self.p != 2 and n <= _ADD_TABLE_LIMIT:
            idx = np.arange(n)
            self._add_table = self._vdigitwise(idx[:, None], idx[None, :], 1)
        for g in range(2, n):
            exp = np.zeros(2 * n, dtype=np.int64)
            log = np.full(n, -1, dtype=np.int64)
            x = 1
            ok = True
            for k in range(n - 1):
                if log[x] != -1:
                    ok = False
                    break
                exp[k] = x
                log[x] = k
                x = self._slow_mul(x, g)
            if ok and x == 1:
                exp[n - 1 : 2 * (n - 1)] = exp[: n - 1]
                self._exp = exp
                self._log = log
                return
        if n == 2:
            self._exp = np.array([1, 1, 1, 1], dtype=np.int64)
            self._log = np.array([-1, 0], dtype=np.int64)
            return
        raise ParameterError(f"modulus {self.modulus} does not define a field")

    # -------------------------------------------------------------- vectorized
    def _vdigitwise(self, a, b, sign):
        p = self.p
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.absolute_degree):
            out += ((a % p + sign * (b % p)) % p) * scale
            a = a // p
            b = b // p
            scale *= p
        return out

    def vadd(self, a, b):
        if self.base is None:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._vdigitwise(a, b, 1)

    def vsub(self, a, b):
        if self.base is None:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._vdigitwise(a, b, -1)

    def vneg(self, a):
        if self.base is None:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        if self.p == 2:
            return np.asarray(a)
        return self._vdigitwise(0, a, -1)

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.base is None:
            return (a * b) % self.p
        zero = (a == 0) | (b == 0)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where(zero, 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.base is None:
            return _vpow_prime(a, self.p - 2, self.p)
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def matmul(self, A, B):
        """Matrix product over the field; ``A`` may carry leading batch axes."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.base is None:
            return (A @ B) % self.p
        acc = None
        for t in range(A.shape[-1]):
            term = self.vmul(A[..., :, t, None], B[..., t, None, :])
            acc = term if acc is None else self.vadd(acc, term)
        return acc

    # ------------------------------------------------------------ extensions
    def extension(self, degree: int, modulus=None) -> "FiniteField":
        """The extension of this field by a monic irreducible of the given degree."""
        from .poly import Poly, least_irreducible

        if degree == 1 and modulus is None:
            return self
        if modulus is None:
            mod = least_irreducible(self, degree)
        else:
            mod = modulus if isinstance(modulus, Poly) else Poly(self, modulus)
            if mod.field != self:
                raise ParameterError("modulus must have coefficients in the base field")
            if mod.degree != degree:
                raise ParameterError(f"modulus has degree {mod.degree}, expected {degree}")
            if mod.lead != 1:
                mod = mod.monic()
            if not mod.is_irreducible():
                raise ParameterError(f"modulus {mod} is reducible over {self!r}")
        return _cached_extension(self, mod.coeffs)


@functools.lru_cache(maxsize=None)
def _cached_extension(base: FiniteField, coeffs: tuple) -> FiniteField:
    return FiniteField(base.p, coeffs, base)


@functools.lru_cache(maxsize=None)
def prime_field(p: int) -> FiniteField:
    return FiniteField(p)


def field_make(p: int, m: int = 1, modulus=None) -> FiniteField:
    """Build GF(p^m) over the prime field.

    Without a modulus the lexicographically least monic irreducible of degree
    ``m`` is used (non-leading coefficients compared from degree ``m-1`` down).
    A supplied modulus is verified to be irreducible.
    """
    if not is_prime(p):
        raise ParameterError(f"{p} is not prime")
    if m < 1:
        raise ParameterError("extension degree must be positive")
    F = prime_field(p)
    if m == 1 and modulus is None:
        return F
    return F.extension(m, modulus)


def field_of_order(q: int) -> FiniteField:
    p, a = prime_power(q)
    return field_make(p, a)


def _prime_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise AssertionError("unreachable")


def _vpow_prime(a, e: int, p: int):
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def legendre(a: int, q: int) -> int:
    """Legendre symbol (a/q) for an odd prime ``q`` via Euler's criterion."""
    if q % 2 == 0 or not is_prime(q):
        raise ParameterError(f"{q} is not an odd prime")
    r = pow(a % q, (q - 1) // 2, q)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def sqrt_minus_one(q: int) -> int:
    """Least positive ``e`` with ``e*e == -1 (mod q)`` for a prime ``q = 1 (mod 4)``."""
    if not is_prime(q) or q % 4 != 1:
        raise ParameterError(f"{q} must be a prime congruent to 1 mod 4")
    for e in range(1, q):
        if (e * e + 1) % q == 0:
            return e
    raise AssertionError("unreachable for q = 1 mod 4")

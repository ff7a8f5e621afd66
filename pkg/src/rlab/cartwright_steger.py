"""Cartwright-Steger lattices and their finite quotients.

The cyclic algebra D over F_q(y) is spanned by K = F_{q^d} and z, with
``z a = phi(a) z`` for a in K and ``z^d = 1 + y``.  The elements
``b_u = u (1 - z^{-1}) u^{-1}`` act on the Bruhat-Tits building of PGL_d over
F_q((y)) (through a splitting at y) and their images in PGL_d(F_{q^e})
(through a splitting modulo an irreducible g) generate a finite group whose
Cayley complex is the quotient we study.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.sparse as sp

from .algebra import FiniteField, Poly, TensorRing, TruncSeries, field_of_order, pgl_order, psl_order
from .algebra import linalg
from .algebra.norms import frobenius_power, norm_equation_finite, norm_equation_series
from .algebra.projective import DEFAULT_GROUP_CAP, MatrixGroup, ProjMatrix, group_closure, proj_canonical
from .building import AdjacencyType, adjacency_type, canonical_class, hecke_matrices
from .complex import SimplicialComplex, clique_complex
from .errors import InsufficientPrecision, ParameterError, VerificationError
from .graph import Graph
from .spectra import (
    CIRCLE_TOL,
    DENSE_LIMIT,
    extremal_eigs,
    gaussian_binomial,
    is_ramanujan_complex,
    joint_spectrum,
)

# ---------------------------------------------------------------- the cyclic algebra


class CyclicAlgebra:
    """D = K[z] with z a = phi(a) z, z^d = 1 + y, over F_q(y)."""

    def __init__(self, d: int, q: int):
        if d < 2:
            raise ParameterError("d must be at least 2")
        self.d = d
        self.q = q
        self.F = field_of_order(q)
        self.K = self.F.extension(d)
        K = self.K
        self._frob = [np.array([frobenius_power(K, q, a, k) for a in K.elements()], dtype=np.int64) for k in range(d)]
        self.one_plus_y = Poly(K, (1, 1))

    def phi(self, c: Poly, k: int = 1) -> Poly:
        tab = self._frob[k % self.d]
        return Poly(self.K, (int(tab[a]) for a in c.coeffs))

    def element(self, coeffs, den=(0, 0)) -> "AlgebraElement":
        cs = [c if isinstance(c, Poly) else Poly(self.K, c) for c in coeffs]
        cs += [Poly(self.K)] * (self.d - len(cs))
        return AlgebraElement(self, tuple(cs), den)

    def const(self, u: int) -> "AlgebraElement":
        return self.element([Poly(self.K, (u,))])

    def one(self) -> "AlgebraElement":
        return self.const(1)

    def z(self) -> "AlgebraElement":
        cs = [Poly(self.K)] * self.d
        cs[1] = Poly(self.K, (1,))
        return self.element(cs)

    def y(self) -> "AlgebraElement":
        return self.element([Poly(self.K, (0, 1))])

    def b(self) -> "AlgebraElement":
        """1 - z^{-1} = ((1+y) - z^{d-1}) / (1+y)."""
        cs = [Poly(self.K)] * self.d
        cs[0] = self.one_plus_y
        cs[-1] = Poly(self.K, (self.K.neg(1),))
        return self.element(cs, (0, 1))

    def b_inverse(self) -> "AlgebraElement":
        """((1+y) + z + ... + z^{d-1}) / y."""
        cs = [Poly(self.K, (1,))] * self.d
        cs[0] = self.one_plus_y
        return self.element(cs, (1, 0))

    def coset_reps(self) -> list[int]:
        """One u per coset of F_q^* in K^*, each the least element of its coset."""
        K, q = self.K, self.q
        seen = set()
        reps = []
        for u in range(1, K.order):
            if u in seen:
                continue
            reps.append(u)
            seen.update(K.mul(c, u) for c in range(1, q))
        return reps

    def b_u(self, u: int) -> "AlgebraElement":
        return self.const(u) * self.b() * self.const(self.K.inv(u))

    def b_u_inverse(self, u: int) -> "AlgebraElement":
        return self.const(u) * self.b_inverse() * self.const(self.K.inv(u))

    def random_element(self, rng: random.Random, degree: int = 2, with_denominator: bool = False):
        K = self.K
        cs = [Poly(K, [rng.randrange(K.order) for _ in range(degree + 1)]) for _ in range(self.d)]
        den = (rng.randrange(2), rng.randrange(2)) if with_denominator else (0, 0)
        return self.element(cs, den)


@functools.lru_cache(maxsize=None)
def cyclic_algebra(d: int, q: int) -> CyclicAlgebra:
    return CyclicAlgebra(d, q)


class AlgebraElement:
    """sum_j c_j(y) z^j / (y^a (1+y)^b) with c_j in K[y]; kept in lowest terms."""

    __slots__ = ("alg", "coeffs", "den")

    def __init__(self, alg: CyclicAlgebra, coeffs: tuple, den=(0, 0)):
        a, b = den
        cs = list(coeffs)
        while a > 0 and all(c[0] == 0 for c in cs):
            cs = [Poly(c.field, c.coeffs[1:]) for c in cs]
            a -= 1
        while b > 0:
            qr = [divmod(c, alg.one_plus_y) for c in cs]
            if any(not r.is_zero() for _, r in qr):
                break
            cs = [qq for qq, _ in qr]
            b -= 1
        if all(c.is_zero() for c in cs):
            a = b = 0
        self.alg = alg
        self.coeffs = tuple(cs)
        self.den = (a, b)

    def __repr__(self) -> str:
        terms = [f"({c.format('y')})z^{j}" for j, c in enumerate(self.coeffs) if not c.is_zero()]
        return f"AlgebraElement({' + '.join(terms) or '0'} / y^{self.den[0]}(1+y)^{self.den[1]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and self.coeffs == other.coeffs and self.den == other.den

    def __hash__(self):
        return hash((self.coeffs, self.den))

    def _lift(self, a: int, b: int) -> list[Poly]:
        """Numerators over the larger denominator y^a (1+y)^b."""
        alg = self.alg
        m = Poly(alg.K, (1,))
        for _ in range(b - self.den[1]):
            m = m * alg.one_plus_y
        return [(c * m).shift(a - self.den[0]) for c in self.coeffs]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        a = max(self.den[0], other.den[0])
        b = max(self.den[1], other.den[1])
        return AlgebraElement(self.alg, tuple(x + y for x, y in zip(self._lift(a, b), other._lift(a, b))), (a, b))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.alg, tuple(-c for c in self.coeffs), self.den)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        alg = self.alg
        d = alg.d
        out = [Poly(alg.K)] * d
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            for k, c2 in enumerate(other.coeffs):
                if c2.is_zero():
                    continue
                t = c * alg.phi(c2, j)
                if j + k >= d:
                    t = t * alg.one_plus_y
                out[(j + k) % d] = out[(j + k) % d] + t
        den = (self.den[0] + other.den[0], self.den[1] + other.den[1])
        return AlgebraElement(alg, tuple(out), den)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def coefficient_array(self) -> list[list[Poly]]:
        """Entry [i][j]: the F_q[y] numerator coefficient of x^i z^j (x generating K)."""
        alg = self.alg
        K, F, d = alg.K, alg.F, alg.d
        rows = [[None] * d for _ in range(d)]
        for j, c in enumerate(self.coeffs):
            digits = [K.to_coeffs(a) for a in c.coeffs]
            for i in range(d):
                rows[i][j] = Poly(F, [dg[i] for dg in digits])
        return rows


def cs_generators(d: int, q: int) -> list[AlgebraElement]:
    """The (q^d - 1)/(q - 1) elements b_u, in coset-representative order (b_1 = b first)."""
    alg = cyclic_algebra(d, q)
    return [alg.b_u(u) for u in alg.coset_reps()]


# ---------------------------------------------------------------- series matrices


def _smatmul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of (d, d, M) series matrices mod y^M."""
    M = A.shape[2]
    out = np.zeros((A.shape[0], B.shape[1], M), dtype=np.int64)
    Bt = np.moveaxis(B, 2, 0)
    for s in range(M):
        As = A[:, :, s]
        if not As.any():
            continue
        term = F.matmul(As[None], Bt[: M - s])
        out[:, :, s:] = F.vadd(out[:, :, s:], np.moveaxis(term, 0, 2))
    return out


def _as_series_rows(F: FiniteField, A: np.ndarray) -> list[list[TruncSeries]]:
    M = A.shape[2]
    return [[TruncSeries(F, A[i, j], M) for j in range(A.shape[1])] for i in range(A.shape[0])]


def _regular_tables(alg: CyclicAlgebra):
    """R[a] (matrix of multiplication by a on K over F_q) for every a, and the Frobenius matrix."""
    K, d = alg.K, alg.d
    basis = [K.pow(K.gen, k) for k in range(d)] if d > 1 else [1]
    R = np.zeros((K.order, d, d), dtype=np.int64)
    for a in K.elements():
        for k, e in enumerate(basis):
            R[a, :, k] = K.to_coeffs(K.mul(a, e))
    Phi = np.zeros((d, d), dtype=np.int64)
    for k, e in enumerate(basis):
        Phi[:, k] = K.to_coeffs(int(alg._frob[1][e]))
    return R, Phi


class LocalSplitting:
    """D -> M_d(F_q((y))) with xi -> R(xi), z -> R(w) Phi, N(w) = 1 + y.

    ``array(a)`` is the image of the numerator of ``a`` mod y^M; the scalar
    denominator is dropped, which does not change the lattice class it moves.
    """

    def __init__(self, d: int, q: int, M: int):
        if M < 2:
            raise ParameterError("precision must be at least 2")
        alg = cyclic_algebra(d, q)
        self.alg, self.d, self.q, self.M = alg, d, q, M
        F, K = alg.F, alg.K
        self.R, self.Phi = _regular_tables(alg)
        w = norm_equation_series(K, q, d, M)
        Rw = np.zeros((d, d, M), dtype=np.int64)
        for k, c in enumerate(w.coeffs):
            Rw[:, :, k] = self.R[c]
        PhiS = np.zeros((d, d, M), dtype=np.int64)
        PhiS[:, :, 0] = self.Phi
        Z = _smatmul(F, Rw, PhiS)
        self.Z = Z
        self.Zpow = [self._scalar(1)]
        for _ in range(1, d + 1):
            self.Zpow.append(_smatmul(F, self.Zpow[-1], Z))
        self._verify()

    def _scalar(self, c: int) -> np.ndarray:
        A = np.zeros((self.d, self.d, self.M), dtype=np.int64)
        A[:, :, 0] = c * np.eye(self.d, dtype=np.int64)
        return A

    def _const(self, a: int) -> np.ndarray:
        A = np.zeros((self.d, self.d, self.M), dtype=np.int64)
        A[:, :, 0] = self.R[a]
        return A

    def _verify(self):
        F, K = self.alg.F, self.alg.K
        x = K.gen if self.d > 1 else 1
        lhs = _smatmul(F, self.Z, self._const(x))
        rhs = _smatmul(F, self._const(int(self.alg._frob[1][x])), self.Z)
        if not np.array_equal(lhs, rhs):
            raise VerificationError("Z R(x) != R(phi(x)) Z in the local splitting")
        target = self._scalar(1)
        target[:, :, 1] = np.eye(self.d, dtype=np.int64)
        if not np.array_equal(self.Zpow[self.d], target):
            raise VerificationError("Z^d != (1+y) I in the local splitting")

    def _poly_image(self, c: Poly) -> np.ndarray:
        if c.degree >= self.M:
            raise InsufficientPrecision(f"coefficient of degree {c.degree} needs precision above {self.M}")
        A = np.zeros((self.d, self.d, self.M), dtype=np.int64)
        for k, a in enumerate(c.coeffs):
            A[:, :, k] = self.R[a]
        return A

    def array(self, a: AlgebraElement) -> np.ndarray:
        F = self.alg.F
        out = np.zeros((self.d, self.d, self.M), dtype=np.int64)
        for j, c in enumerate(a.coeffs):
            if not c.is_zero():
                out = F.vadd(out, _smatmul(F, self._poly_image(c), self.Zpow[j]))
        return out

    def __call__(self, a: AlgebraElement) -> list[list[TruncSeries]]:
        return _as_series_rows(self.alg.F, self.array(a))

    def rows(self, A: np.ndarray) -> list[list[TruncSeries]]:
        return _as_series_rows(self.alg.F, A)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return _smatmul(self.alg.F, A, B)


def local_splitting(d: int, q: int, M: int | None = None) -> LocalSplitting:
    return LocalSplitting(d, q, 4 * d if M is None else M)


class FiniteSplitting:
    """D -> M_d(F_{q^e}) modulo an irreducible g with g(0) != 0 and g(-1) != 0."""

    def __init__(self, d: int, q: int, g: Poly):
        alg = cyclic_algebra(d, q)
        F, K = alg.F, alg.K
        if not isinstance(g, Poly):
            g = Poly(F, g)
        if g.field != F:
            raise ParameterError("g must have coefficients in F_q")
        if g.degree < 1 or not g.is_irreducible():
            raise ParameterError(f"g = {g.format('y')} is not irreducible")
        g = g.monic()
        if g(0) == 0 or g(F.neg(1)) == 0:
            raise ParameterError("g must be coprime to y(1+y): those places are excluded")
        self.alg, self.d, self.q, self.g, self.e = alg, d, q, g, g.degree
        if g.degree == 1:
            big, beta = F, F.neg(g.coeffs[0])
        else:
            big = F.extension(g.degree, modulus=g)
            beta = big.gen
        self.big, self.beta = big, beta
        self.R, self.Phi = _regular_tables(alg)
        ring = TensorRing(big, Poly(big, K.modulus) if K.base is not None else Poly(big, (0, 1)), q)
        target = big.add(1, beta)
        w = norm_equation_finite(ring, target)
        Rw = np.zeros((d, d), dtype=np.int64)
        xk = ring.one()
        xgen = ring._reduce([0, 1])
        for k in range(d):
            Rw[:, k] = ring.mul(w, xk)
            xk = ring.mul(xk, xgen)
        self.Z = big.matmul(Rw, self.Phi)
        self.Zpow = [np.eye(d, dtype=np.int64)]
        for _ in range(d):
            self.Zpow.append(big.matmul(self.Zpow[-1], self.Z))
        self._beta_pows = [1]
        self._verify(target)

    def _verify(self, target: int):
        big, d = self.big, self.d
        K = self.alg.K
        x = K.gen if d > 1 else 1
        if not np.array_equal(big.matmul(self.Z, self.R[x]), big.matmul(self.R[int(self.alg._frob[1][x])], self.Z)):
            raise VerificationError("Z R(x) != R(phi(x)) Z in the finite splitting")
        if not np.array_equal(self.Zpow[d], big.vmul(np.eye(d, dtype=np.int64), target)):
            raise VerificationError("Z^d != (1+beta) I in the finite splitting")
        span = [big.matmul(self.R[K.pow(x, i)], self.Zpow[j]).ravel() for i in range(d) for j in range(d)]
        if linalg.rank(big, np.array(span)) != d * d:
            raise VerificationError("image algebra is not all of M_d")

    def _beta_pow(self, k: int) -> int:
        while len(self._beta_pows) <= k:
            self._beta_pows.append(self.big.mul(self._beta_pows[-1], self.beta))
        return self._beta_pows[k]

    def poly_image(self, c: Poly) -> np.ndarray:
        big = self.big
        out = np.zeros((self.d, self.d), dtype=np.int64)
        for k, a in enumerate(c.coeffs):
            if a:
                out = big.vadd(out, big.vmul(self.R[a], self._beta_pow(k)))
        return out

    def array(self, a: AlgebraElement) -> np.ndarray:
        """Image of the numerator of ``a`` (the denominator is a nonzero scalar mod g)."""
        big = self.big
        out = np.zeros((self.d, self.d), dtype=np.int64)
        for j, c in enumerate(a.coeffs):
            if not c.is_zero():
                out = big.vadd(out, big.matmul(self.poly_image(c), self.Zpow[j]))
        return out

    def __call__(self, a: AlgebraElement) -> ProjMatrix:
        return proj_canonical(self.array(a), self.big)


def finite_splitting(d: int, q: int, g) -> FiniteSplitting:
    return FiniteSplitting(d, q, g)


# ---------------------------------------------------------------- characteristic polynomials


def _charpoly_generic(d: int, entry, add, mul, neg, one, zero):
    """Coefficients c_0..c_d of det(T I - A) by summing signed principal minors."""
    coeffs = [zero] * (d + 1)
    coeffs[d] = one
    for k in range(1, d + 1):
        acc = zero
        for S in itertools.combinations(range(d), k):
            for perm in itertools.permutations(range(k)):
                sign = _perm_sign(perm)
                term = one
                for r, c in enumerate(perm):
                    term = mul(term, entry(S[r], S[c]))
                acc = add(acc, term if sign > 0 else neg(term))
        coeffs[d - k] = acc if k % 2 == 0 else neg(acc)
    return coeffs


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def splittings_agree(local: LocalSplitting, finite: FiniteSplitting, a: AlgebraElement) -> bool:
    """Compare the characteristic polynomials of both images under y -> beta.

    The two splittings differ by conjugation, so the reduced characteristic
    polynomial (in F_q[y][T]) is what must agree.  Its y-degree is at most
    d * (max numerator degree + 1), which fixes the precision needed.
    """
    d = local.d
    F, big = local.alg.F, finite.big
    D = max((c.degree for c in a.coeffs if not c.is_zero()), default=0)
    bound = d * (D + 1)
    loc = local if local.M > bound + 1 else LocalSplitting(d, local.q, bound + 2)
    A = loc(a)
    cp_local = _charpoly_generic(
        d, lambda i, j: A[i][j], lambda x, y: x + y, lambda x, y: x * y, lambda x: -x,
        TruncSeries.one(F, loc.M), TruncSeries.zero(F, loc.M),
    )
    B = finite.array(a)
    cp_fin = _charpoly_generic(d, lambda i, j: int(B[i, j]), big.add, big.mul, big.neg, 1, 0)
    for s, v in zip(cp_local, cp_fin):
        if any(s.coeffs[bound + 1:]):
            return False
        if Poly(big, s.coeffs[: bound + 1])(finite.beta) != v:
            return False
    return True


# ---------------------------------------------------------------- Sigma sets


@dataclass
class SigmaSets:
    d: int
    q: int
    precision: int
    reps: list  # coset representatives u, indexing the letters of a word
    words: list  # words[i-1]: list of tuples of letter indices, one per element of Sigma_i
    classes: list  # lattice classes of the corresponding images of L_0
    escalated: list = dc_field(default_factory=list)

    def sizes(self) -> list[int]:
        return [len(w) for w in self.words]


def _word_images(local: LocalSplitting, letters: list[np.ndarray], length: int):
    """(word, image) for all words of the given length, by extending prefixes."""
    level = [((), local._scalar(1))]
    for _ in range(length):
        level = [(w + (k,), local.matmul(img, L)) for w, img in level for k, L in enumerate(letters)]
    return level


def _collect(local, letters, length, color, finite_letters=None):
    """Representative words by lattice class, among words of ``length`` moving L_0 to a color-``color`` neighbour."""
    found: dict = {}
    want = AdjacencyType("adjacent", color)
    for word, img in _word_images(local, letters, length):
        rows = local.rows(img)
        if adjacency_type(rows) != want:
            continue
        cls = canonical_class(rows)
        if cls not in found:
            found[cls] = [word]
        else:
            found[cls].append(word)
    if finite_letters is not None:
        for cls, ws in found.items():
            imgs = {_finite_word(finite_letters, w) for w in ws}
            if len(imgs) != 1:
                raise VerificationError("words with the same building action have different finite images")
    return {cls: min(ws) for cls, ws in found.items()}


def _finite_word(finite_letters, word) -> ProjMatrix:
    g = finite_letters[word[0]]
    for k in word[1:]:
        g = g @ finite_letters[k]
    return g


def sigma_sets(d: int, q: int, M: int | None = None, finite: FiniteSplitting | None = None) -> SigmaSets:
    """Sigma_1..Sigma_{d-1} as words in the b_u, certified through the building action.

    Sigma_i consists of the lattice elements moving L_0 to its neighbours of
    color i.  Candidates are words of length i, then (once) of length i + d.
    """
    local = local_splitting(d, q, M)
    alg = local.alg
    reps = alg.coset_reps()
    letters = [local.array(alg.b_u(u)) for u in reps]
    finite_letters = [finite(alg.b_u(u)) for u in reps] if finite is not None else None
    words, classes, escalated = [], [], []
    for i in range(1, d):
        want = gaussian_binomial(d, i, q)
        found = _collect(local, letters, i, i, finite_letters)
        esc = False
        if len(found) != want:
            esc = True
            more = _collect(local, letters, i + d, i, finite_letters)
            for cls, w in more.items():
                found.setdefault(cls, w)
        if len(found) != want:
            raise VerificationError(f"|Sigma_{i}| = {len(found)} but [d i]_q = {want}")
        order = sorted(found, key=lambda c: found[c])
        words.append([found[c] for c in order])
        classes.append(order)
        escalated.append(esc)
    inv_letters = [local.array(alg.b_u_inverse(u)) for u in reps]
    for i in range(1, d):
        target = set(classes[d - i - 1])
        for w in words[i - 1]:
            img = local._scalar(1)
            for k in reversed(w):
                img = local.matmul(img, inv_letters[k])
            if canonical_class(local.rows(img)) not in target:
                raise VerificationError(f"Sigma_{i} inverted is not Sigma_{d - i}")
    return SigmaSets(d, q, local.M, reps, words, classes, escalated)


def word_element(d: int, q: int, word, reps=None) -> AlgebraElement:
    alg = cyclic_algebra(d, q)
    reps = alg.coset_reps() if reps is None else reps
    out = alg.one()
    for k in word:
        out = out * alg.b_u(reps[k])
    return out


# ---------------------------------------------------------------- the quotient complex


def _discrete_log_table(F: FiniteField) -> np.ndarray:
    g = F.primitive_element()
    log = np.zeros(F.order, dtype=np.int64)
    a = 1
    for k in range(F.order - 1):
        log[a] = k
        a = F.mul(a, g)
    return log


def _color_vertices(nbrs: np.ndarray, gen_colors: np.ndarray, d: int):
    """BFS colors tau with tau(x s) = tau(x) + color(s) mod t, for the largest consistent t | d."""
    n = nbrs.shape[0]
    tau = np.full(n, -1, dtype=np.int64)
    tau[0] = 0
    frontier = np.array([0])
    while len(frontier):
        nxt = nbrs[frontier]
        cand = (tau[frontier][:, None] + gen_colors[None, :]) % d
        fresh = tau[nxt] < 0
        tau[nxt[fresh]] = cand[fresh]
        frontier = np.unique(nxt[fresh])
    if (tau < 0).any():
        raise VerificationError("Cayley graph is not connected")
    disc = (tau[nbrs] - tau[:, None] - gen_colors[None, :]) % d
    t = d
    for v in np.unique(disc):
        t = math.gcd(t, int(v))
    return tau % t, t


@dataclass
class CsComplex:
    d: int
    q: int
    g: Poly
    e: int
    group: MatrixGroup
    sigma: list  # sigma[i-1]: ProjMatrix images of Sigma_i
    sigma_words: list
    neighbors: np.ndarray  # neighbors[x, j] = x * s_j, generators listed color by color
    generator_colors: np.ndarray
    graph: Graph
    hecke: list
    colors: np.ndarray
    partite: int  # colors are well defined mod this divisor of d
    group_type: str
    det_index: int
    theorem_guaranteed: bool
    _complex: SimplicialComplex | None = None

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def degree(self) -> int:
        return self.neighbors.shape[1]

    def complex(self) -> SimplicialComplex:
        """Clique complex of the Cayley graph, up to dimension d - 1."""
        if self._complex is None:
            self._complex = clique_complex(self.graph, self.d - 1)
        return self._complex

    def laplacian_operator(self) -> sp.csr_matrix:
        return sum(self.hecke[1:], self.hecke[0])


def cs_complex(d: int, q: int, g, cap: int = DEFAULT_GROUP_CAP, M: int | None = None) -> CsComplex:
    """The Cayley complex of H = <images of Sigma_1> in PGL_d(F_q[y]/(g))."""
    fin = finite_splitting(d, q, g)
    M = 4 * d if M is None else M
    try:
        sig = sigma_sets(d, q, M, fin)
    except InsufficientPrecision:
        sig = sigma_sets(d, q, 2 * M, fin)
    alg = fin.alg
    letters = [fin(alg.b_u(u)) for u in sig.reps]
    sigma = [[_finite_word(letters, w) for w in ws] for ws in sig.words]
    flat = [s for S in sigma for s in S]
    if len(set(flat)) != len(flat):
        raise VerificationError("distinct elements of Sigma collide modulo g; the ideal is too small")
    group = group_closure(sigma[0], cap=cap)
    nbrs = np.stack([group.right_multiply(s) for s in flat], axis=1)
    gen_colors = np.concatenate([np.full(len(S), i + 1, dtype=np.int64) for i, S in enumerate(sigma)])
    graph = Graph.from_neighbors(nbrs)
    if graph.regular_degree() != len(flat):
        raise VerificationError("Cayley graph is not regular of degree |Sigma|")
    hecke = hecke_matrices(group, sigma)
    colors, t = _color_vertices(nbrs, gen_colors, d)

    Q = fin.big.order
    h = math.gcd(d, Q - 1)
    log = _discrete_log_table(fin.big)
    sub = h
    for s in sigma[0]:
        sub = math.gcd(sub, int(log[linalg.det(fin.big, s.array)]))
    det_index = h // sub
    if group.order == pgl_order(d, Q):
        group_type = "PGL"
    elif group.order == psl_order(d, Q):
        group_type = "PSL"
    else:
        group_type = "other"
    return CsComplex(
        d, q, fin.g, fin.e, group, sigma, sig.words, nbrs, gen_colors, graph, hecke, colors, t,
        group_type, det_index, Q >= 4 * d * d,
    )


# ---------------------------------------------------------------- Ramanujan verdict


def delta_bound(d: int, q: int) -> float:
    """Largest |sum_k lambda_k| over tuples of Sigma_d: sum_{k=1}^{d-1} C(d,k) q^{k(d-k)/2}."""
    return float(sum(math.comb(d, k) * q ** (k * (d - k) / 2) for k in range(1, d)))


@dataclass
class CsVerdict:
    mode: str
    ramanujan: bool  # full mode: the verdict; extremal mode: the necessary condition
    theorem_guaranteed: bool
    n: int
    tol: float
    classes: list | None = None
    offending: list | None = None
    tuples: np.ndarray | None = None
    bound: float | None = None
    spectral_radius: float | None = None
    extremes: tuple | None = None
    residual: float | None = None
    trivial_residual: float | None = None


def trivial_check(hecke, colors: np.ndarray, partite: int, d: int, q: int) -> float:
    """Max |A_k f_xi - [d k]_q xi^k f_xi| over the trivial eigenfunctions f_xi = xi^tau, xi^t = 1."""
    worst = 0.0
    for j in range(partite):
        xi = np.exp(2j * np.pi * j / partite)
        f = xi**colors
        for k, A in enumerate(hecke, start=1):
            r = A @ f - gaussian_binomial(d, k, q) * xi**k * f
            worst = max(worst, float(np.abs(r).max()))
    return worst


def hecke_verdict(hecke, colors, partite: int, d: int, q: int, mode: str = "auto", tol: float = CIRCLE_TOL,
                  seed: int = 0, theorem_guaranteed: bool = False) -> CsVerdict:
    """Ramanujan verdict from Hecke matrices A_1..A_{d-1} and a vertex coloring mod ``partite``."""
    n = hecke[0].shape[0]
    if mode == "auto":
        mode = "full" if n <= DENSE_LIMIT else "extremal"
    triv = trivial_check(hecke, colors, partite, d, q)
    if mode == "full":
        if n > DENSE_LIMIT:
            raise ParameterError(f"full mode needs at most {DENSE_LIMIT} vertices, got {n}")
        js = joint_spectrum(hecke, seed=seed)
        v = is_ramanujan_complex(js.tuples, d, q, tol)
        return CsVerdict(
            "full", v.ramanujan, theorem_guaranteed, n, tol, v.classes, v.offending, js.tuples,
            residual=float(js.residuals.max()), trivial_residual=triv,
        )
    if mode != "extremal":
        raise ParameterError(f"unknown mode {mode!r}")
    delta = sum(hecke[1:], hecke[0])
    ind = np.stack([(colors == c).astype(float) for c in range(partite)], axis=1)
    (lo, _), (hi, _), res = extremal_eigs(delta, deflate=ind, seed=seed)
    bound = delta_bound(d, q)
    rho = max(abs(lo), abs(hi))
    return CsVerdict(
        "extremal", rho <= bound * (1 + tol), theorem_guaranteed, n, tol, bound=bound,
        spectral_radius=rho, extremes=(lo, hi), residual=res, trivial_residual=triv,
    )


def cs_ramanujan_verdict(cx: CsComplex, mode: str = "auto", tol: float = CIRCLE_TOL, seed: int = 0) -> CsVerdict:
    """Full joint-spectrum verdict, or the extremal necessary condition on Delta = sum A_k."""
    return hecke_verdict(cx.hecke, cx.colors, cx.partite, cx.d, cx.q, mode, tol, seed, cx.theorem_guaranteed)

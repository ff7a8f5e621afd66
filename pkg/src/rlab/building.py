"""Local structure of the Bruhat-Tits building of PGL_d over F_q((y)).

A vertex is the class of an O-lattice (O = F_q[[y]]) up to scaling.  Lattices
are handled through a lower-triangular column Hermite form: diagonal y^{a_i},
entries left of the diagonal in row i are polynomials of degree < a_i, and the
class representative is scaled to be integral but not divisible by y.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .algebra import FiniteField, Poly, TruncSeries, field_of_order, smith_valuations
from .algebra.poly import det_poly
from .complex import SimplicialComplex, clique_complex
from .errors import CapExceeded, InsufficientPrecision, ParameterError, SingularMatrixError, VerificationError
from .graph import Graph
from .spectra import check_hecke_family, gaussian_binomial

DEFAULT_BALL_CAP = 1_000_000


# ---------------------------------------------------------------- series helpers (mod y^N)


def _val(a: np.ndarray) -> int:
    nz = np.flatnonzero(a)
    return int(nz[0]) if len(nz) else len(a)


def _smul(F: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    N = len(a)
    out = np.zeros(N, dtype=np.int64)
    for i in np.flatnonzero(a):
        out[i:] = F.vadd(out[i:], F.vmul(int(a[i]), b[: N - i]))
    return out


def _sinv(F: FiniteField, a: np.ndarray) -> np.ndarray:
    N = len(a)
    inv0 = F.inv(int(a[0]))
    out = np.zeros(N, dtype=np.int64)
    out[0] = inv0
    for n in range(1, N):
        acc = 0
        for k in range(1, n + 1):
            if a[k] and out[n - k]:
                acc = F.add(acc, F.mul(int(a[k]), int(out[n - k])))
        out[n] = F.neg(F.mul(acc, inv0))
    return out


def _shift_down(a: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(a)
    out[: len(a) - k] = a[k:]
    return out


def _col_axpy(F: FiniteField, A: np.ndarray, j: int, s: np.ndarray, i: int):
    """column j -= s * column i (entrywise series products)."""
    for r in range(A.shape[0]):
        if A[r, i].any():
            A[r, j] = F.vsub(A[r, j], _smul(F, s, A[r, i]))


# ---------------------------------------------------------------- lattice classes


@dataclass(frozen=True)
class LatticeClass:
    field: FiniteField
    exps: tuple  # diagonal exponents a_i
    entries: tuple  # row-major lower triangle (i > j) as coefficient tuples, each of length < a_i

    @property
    def d(self) -> int:
        return len(self.exps)

    @property
    def key(self):
        return (self.exps, self.entries)

    def __eq__(self, other):
        return isinstance(other, LatticeClass) and self.field == other.field and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"LatticeClass(exps={self.exps}, entries={self.entries})"

    @property
    def color(self) -> int:
        return sum(self.exps) % self.d

    def array(self, length: int | None = None) -> np.ndarray:
        """Polynomial matrix as a (d, d, L) coefficient array."""
        d = self.d
        L = max(length or 0, max(self.exps) + 1)
        A = np.zeros((d, d, L), dtype=np.int64)
        for i, a in enumerate(self.exps):
            A[i, i, a] = 1
        k = 0
        for i in range(d):
            for j in range(i):
                c = self.entries[k]
                A[i, j, : len(c)] = c
                k += 1
        return A

    def polys(self) -> list[list[Poly]]:
        A = self.array()
        return [[Poly(self.field, A[i, j]) for j in range(self.d)] for i in range(self.d)]


def _hermite(F: FiniteField, A: np.ndarray, nu: int) -> LatticeClass:
    """Hermite form of the lattice spanned by the columns of A, computed in O/y^N with N = nu + 1."""
    d, _, N = A.shape
    A = A.copy()
    exps = []
    for i in range(d):
        vals = [_val(A[i, j]) for j in range(i, d)]
        jm = i + int(np.argmin(vals))
        a = vals[jm - i]
        if a >= N:
            raise VerificationError("pivot vanishes modulo y^(nu+1); determinant valuation is wrong")
        if jm != i:
            A[:, [i, jm]] = A[:, [jm, i]]
        uinv = _sinv(F, _shift_down(A[i, i], a))
        for r in range(d):
            A[r, i] = _smul(F, A[r, i], uinv)
        for j in range(i + 1, d):
            if A[i, j].any():
                _col_axpy(F, A, j, _shift_down(A[i, j], a), i)
        exps.append(a)
    if sum(exps) != nu:
        raise VerificationError(f"Hermite exponents sum to {sum(exps)}, expected {nu}")
    for i in range(d):
        a = exps[i]
        for j in range(i):
            high = A[i, j].copy()
            high[:a] = 0
            if high.any():
                _col_axpy(F, A, j, _shift_down(high, a), i)
    # primitive scaling: divide by the largest power of y dividing every entry
    m = min(min(exps), min((_val(A[i, j]) for i in range(d) for j in range(i)), default=N))
    exps = tuple(a - m for a in exps)
    entries = []
    for i in range(d):
        for j in range(i):
            c = A[i, j, m : m + exps[i]]
            entries.append(tuple(int(x) for x in np.trim_zeros(c, "b")))
    return LatticeClass(F, exps, tuple(entries))


def _to_array(M, F: FiniteField | None):
    """Normalize a matrix of Poly / TruncSeries / ints to (field, list-of-lists, kind)."""
    rows = [list(r) for r in M]
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise ParameterError("expected a non-empty square matrix")
    flat = [e for r in rows for e in r]
    if all(isinstance(e, TruncSeries) for e in flat):
        return flat[0].field, rows, "series"
    if all(isinstance(e, Poly) for e in flat):
        return flat[0].field, rows, "poly"
    if F is None:
        raise ParameterError("a field is needed for integer matrices")
    return F, [[Poly(F, [int(e)]) for e in r] for r in rows], "poly"


def det_valuation(M, F: FiniteField | None = None) -> int:
    """y-adic valuation of det M (certified; raises when precision is insufficient)."""
    F, rows, kind = _to_array(M, F)
    if kind == "poly":
        det = det_poly(rows)
        if det.is_zero():
            raise SingularMatrixError("matrix is singular")
        return det.valuation()
    return sum(smith_valuations(rows))


def vertex_color(g, d: int | None = None, F: FiniteField | None = None) -> int:
    """nu_y(det g) mod d: the color of the vertex g L_0."""
    d = len(g) if d is None else d
    return det_valuation(g, F) % d


def canonical_class(g, F: FiniteField | None = None) -> LatticeClass:
    """Canonical representative of the class of the lattice g O^d."""
    F, rows, kind = _to_array(g, F)
    nu = det_valuation(rows)
    N = nu + 1
    d = len(rows)
    A = np.zeros((d, d, N), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            e = rows[i][j]
            if kind == "series" and e.prec < N:
                raise InsufficientPrecision(f"entry known mod y^{e.prec}, need y^{N}")
            c = e.coeffs[:N]
            A[i, j, : len(c)] = c
    return _hermite(F, A, nu)


@dataclass(frozen=True)
class AdjacencyType:
    kind: str  # same / adjacent / far
    color: int | None = None


def adjacency_type(g) -> AdjacencyType:
    """Relative position of g L_0 and L_0 from the elementary divisors of g."""
    vals = smith_valuations(g) if isinstance(g[0][0], TruncSeries) else smith_valuations([list(r) for r in g])
    m = min(vals)
    norm = [v - m for v in vals]
    if all(v == 0 for v in norm):
        return AdjacencyType("same", 0)
    if all(v in (0, 1) for v in norm):
        return AdjacencyType("adjacent", sum(norm))
    return AdjacencyType("far", None)


# ---------------------------------------------------------------- subspaces and neighbours


def subspaces(F: FiniteField, d: int, m: int):
    """All m-dimensional subspaces of F^d as m x d reduced row echelon matrices, deterministic order."""
    q = F.order
    for pivots in itertools.combinations(range(d), m):
        free = [(r, c) for r in range(m) for c in range(pivots[r] + 1, d) if c not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            W = np.zeros((m, d), dtype=np.int64)
            for r, p in enumerate(pivots):
                W[r, p] = 1
            for (r, c), v in zip(free, vals):
                W[r, c] = v
            yield W


def neighbor_moves(F: FiniteField, d: int):
    """(k, N) pairs: N = [W | y e_j] spans W + yO^d for W of codimension k, giving color +k."""
    moves = []
    for m in range(d - 1, 0, -1):
        k = d - m
        for W in subspaces(F, d, m):
            pivots = [int(np.flatnonzero(row)[0]) for row in W]
            N = np.zeros((d, d, 2), dtype=np.int64)
            for c, row in enumerate(W):
                N[:, c, 0] = row
            c = m
            for j in range(d):
                if j not in pivots:
                    N[j, c, 1] = 1
                    c += 1
            moves.append((k, N))
    return moves


def _polymat_mul(F: FiniteField, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d = A.shape[0]
    L = A.shape[2] + B.shape[2] - 1
    C = np.zeros((d, d, L), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            acc = np.zeros(L, dtype=np.int64)
            for k in range(d):
                a, b = A[i, k], B[k, j]
                if not a.any() or not b.any():
                    continue
                for t in np.flatnonzero(a):
                    acc[t : t + len(b)] = F.vadd(acc[t : t + len(b)], F.vmul(int(a[t]), b))
            C[i, j] = acc
    return C


def class_neighbors(L: LatticeClass, moves=None):
    """[(color step k, neighbour class)] for all sublattices yL < L' < L."""
    F, d = L.field, L.d
    moves = neighbor_moves(F, d) if moves is None else moves
    T = L.array()
    nu = sum(L.exps)
    out = []
    for k, N in moves:
        P = _polymat_mul(F, T, N)
        out.append((k, _hermite(F, _fit(P, nu + k + 1), nu + k)))
    return out


def _fit(A: np.ndarray, N: int) -> np.ndarray:
    """Truncate or zero-pad the coefficient axis to length N."""
    out = np.zeros(A.shape[:2] + (N,), dtype=np.int64)
    L = min(N, A.shape[2])
    out[:, :, :L] = A[:, :, :L]
    return out


def identity_class(F: FiniteField, d: int) -> LatticeClass:
    return LatticeClass(F, (0,) * d, tuple(() for _ in range(d * (d - 1) // 2)))


# ---------------------------------------------------------------- balls


@dataclass
class BuildingBall:
    d: int
    q: int
    r: int
    vertices: list
    distance: np.ndarray
    colors: np.ndarray
    graph: Graph
    arcs: np.ndarray  # directed edges (x, y)
    arc_colors: np.ndarray  # tau(y) - tau(x) mod d
    _complex: SimplicialComplex | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def complex(self) -> SimplicialComplex:
        if self._complex is None:
            self._complex = clique_complex(self.graph, self.d - 1)
        return self._complex

    def link(self, v: int = 0) -> Graph:
        """Link of a vertex as a graph on its neighbours (the 1-skeleton of the link)."""
        nb = sorted(int(w) for w in self.graph.neighbors(v))
        pos = {w: i for i, w in enumerate(nb)}
        es = [(pos[a], pos[b]) for a, b in self.graph.edges.tolist() if a in pos and b in pos]
        return Graph(len(nb), es)

    def sphere_sizes(self) -> list[int]:
        return np.bincount(self.distance, minlength=self.r + 1).tolist()


def ball_size_estimate(d: int, q: int, r: int) -> int:
    deg = sum(gaussian_binomial(d, k, q) for k in range(1, d))
    return sum(deg**j for j in range(r + 1))


def building_ball(d: int, q: int, r: int, cap: int = DEFAULT_BALL_CAP) -> BuildingBall:
    """The ball of radius r around L_0 in the 1-skeleton, with vertex and arc colors."""
    if d < 2 or r < 0:
        raise ParameterError("need d >= 2 and r >= 0")
    F = field_of_order(q)
    if ball_size_estimate(d, q, r) > cap:
        raise CapExceeded(f"ball estimate exceeds cap {cap}")
    moves = neighbor_moves(F, d)
    center = identity_class(F, d)
    index = {center: 0}
    verts = [center]
    dist = [0]
    arcs, arc_colors = [], []
    frontier = [0]
    expanded = set()
    for level in range(r + 1):
        nxt = []
        for v in frontier:
            expanded.add(v)
            for k, w in class_neighbors(verts[v], moves):
                j = index.get(w)
                if j is None:
                    if level == r:
                        continue
                    j = len(verts)
                    index[w] = j
                    verts.append(w)
                    dist.append(level + 1)
                    nxt.append(j)
                    if len(verts) > cap:
                        raise CapExceeded(f"ball exceeded cap {cap}")
                arcs.append((v, j))
                arc_colors.append(k)
        frontier = nxt
    colors = np.array([v.color for v in verts], dtype=np.int64)
    arcs = np.array(arcs, dtype=np.int64).reshape(-1, 2)
    arc_colors = np.array(arc_colors, dtype=np.int64)
    if np.any((colors[arcs[:, 1]] - colors[arcs[:, 0]]) % d != arc_colors):
        raise VerificationError("arc colors disagree with vertex colors")
    g = Graph(len(verts), arcs)
    return BuildingBall(d, q, r, verts, np.array(dist), colors, g, arcs, arc_colors)


# ---------------------------------------------------------------- Hecke operators


def hecke_matrices(group, sigma) -> list[sp.csr_matrix]:
    """A_k with (A_k)[x, x s] += 1 for s in Sigma_k, on the elements of a MatrixGroup."""
    n = group.order
    d = len(sigma) + 1
    keysets = [sorted(group.index_of(s) for s in S) for S in sigma]
    for k in range(d - 1):
        inv = sorted(group.index_of(s.inverse()) for s in sigma[d - 2 - k])
        if inv != keysets[k]:
            raise VerificationError(f"Sigma_{k + 1} is not the inverse of Sigma_{d - 1 - k}")
    mats = []
    rows = np.arange(n)
    for S in sigma:
        cols = [group.right_multiply(s) for s in S]
        A = sp.csr_matrix(
            (np.ones(n * len(S), dtype=np.int64), (np.tile(rows, len(S)), np.concatenate(cols))), shape=(n, n)
        )
        mats.append(A)
    check_hecke_family(mats)
    return mats


def hecke_from_arcs(n: int, arcs: np.ndarray, arc_colors: np.ndarray, d: int) -> list[sp.csr_matrix]:
    """A_k from colored directed edges (x -> y with color k)."""
    mats = []
    for k in range(1, d):
        sel = arc_colors == k
        A = sp.csr_matrix((np.ones(int(sel.sum()), dtype=np.int64), (arcs[sel, 0], arcs[sel, 1])), shape=(n, n))
        mats.append(A)
    return mats


def trivial_eigenfunctions(colors: np.ndarray, d: int) -> list[np.ndarray]:
    """f_xi(x) = xi^{tau(x)} for the d-th roots of unity xi."""
    return [np.exp(2j * np.pi * j * colors / d) for j in range(d)]

"""Finite simplicial complexes, oriented boundary maps, Laplacians and F_2 Betti numbers.

Vertices are the integers 0..n-1 and that order fixes every orientation sign.
Faces of dimension i are rows of a lexicographically sorted (N_i, i+1) array;
dimension -1 always holds the empty face.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import CapExceeded, ParameterError
from .graph import Graph, as_graph

DEFAULT_CLIQUE_CAP = 5_000_000


def _unique_rows(A: np.ndarray) -> np.ndarray:
    return np.unique(A, axis=0) if len(A) else A


class SimplicialComplex:
    def __init__(self, faces=(), n_vertices: int | None = None):
        by_dim: dict[int, list] = {}
        top = -1
        for f in faces:
            f = tuple(sorted(int(v) for v in f))
            if len(set(f)) != len(f):
                raise ParameterError(f"face {f} repeats a vertex")
            by_dim.setdefault(len(f) - 1, []).append(f)
            top = max(top, len(f) - 1)
        n = n_vertices
        if n is None:
            n = 1 + max((f[-1] for fs in by_dim.values() for f in fs if f), default=-1)
        for fs in by_dim.values():
            for f in fs:
                if f and (f[0] < 0 or f[-1] >= n):
                    raise ParameterError(f"face {f} uses a vertex outside 0..{n - 1}")
        self.n = n
        self._faces: list[np.ndarray] = []
        arrays = {}
        below = None
        for i in range(top, 0, -1):
            cur = np.array(by_dim.get(i, []), dtype=np.int64).reshape(-1, i + 1)
            if below is not None and len(below):
                cur = np.concatenate([cur, below])
            cur = _unique_rows(cur)
            arrays[i] = cur
            # every facet of an i-face
            below = np.concatenate([np.delete(cur, j, axis=1) for j in range(i + 1)]) if len(cur) else None
        arrays[0] = np.arange(n, dtype=np.int64).reshape(-1, 1)
        self._faces = [np.zeros((1, 0), dtype=np.int64)] + [arrays[i] for i in range(0, max(top, 0) + 1)]
        while len(self._faces) > 1 and len(self._faces[-1]) == 0:
            self._faces.pop()
        self._index_cache = {}

    # construction helpers
    @classmethod
    def from_arrays(cls, arrays, n_vertices: int) -> "SimplicialComplex":
        """Build from per-dimension face arrays that are already downward closed."""
        X = cls.__new__(cls)
        X.n = n_vertices
        X._faces = [np.zeros((1, 0), dtype=np.int64), np.arange(n_vertices, dtype=np.int64).reshape(-1, 1)]
        for i, A in enumerate(arrays[2:] if len(arrays) > 2 else [], start=1):
            A = _unique_rows(np.sort(np.asarray(A, dtype=np.int64).reshape(-1, i + 1), axis=1))
            X._faces.append(A)
        while len(X._faces) > 1 and len(X._faces[-1]) == 0:
            X._faces.pop()
        X._index_cache = {}
        return X

    @classmethod
    def from_graph(cls, graph) -> "SimplicialComplex":
        g = as_graph(graph)
        return cls(map(tuple, g.edges), n_vertices=g.n)

    @property
    def dim(self) -> int:
        return len(self._faces) - 2

    def faces(self, i: int) -> np.ndarray:
        if i < -1:
            raise ParameterError("dimension must be >= -1")
        if i > self.dim:
            return np.zeros((0, i + 1), dtype=np.int64)
        return self._faces[i + 1]

    def face_list(self, i: int) -> list[tuple]:
        return [tuple(int(v) for v in r) for r in self.faces(i)]

    def count(self, i: int) -> int:
        return len(self.faces(i))

    def f_vector(self) -> list[int]:
        return [self.count(i) for i in range(-1, self.dim + 1)]

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, f={self.f_vector()[1:]})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.n == other.n and self.dim == other.dim and all(
            np.array_equal(a, b) for a, b in zip(self._faces, other._faces)
        )

    def _keys(self, A: np.ndarray) -> np.ndarray:
        if A.shape[1] == 0:
            return np.zeros(len(A), dtype=np.int64)
        w = np.int64(max(self.n, 1)) ** np.arange(A.shape[1] - 1, -1, -1, dtype=np.int64)
        return A @ w

    def index_of(self, i: int, faces) -> np.ndarray:
        """Row indices in ``faces(i)`` of the given sorted faces; -1 where absent."""
        if i not in self._index_cache:
            self._index_cache[i] = self._keys(self.faces(i))
        keys = self._index_cache[i]
        arr = np.asarray(faces, dtype=np.int64)
        if i == -1:
            return np.zeros(len(arr), dtype=np.int64)
        q = self._keys(arr.reshape(-1, i + 1))
        if len(keys) == 0:
            return np.full(len(q), -1, dtype=np.int64)
        pos = np.minimum(np.searchsorted(keys, q), len(keys) - 1)
        return np.where(keys[pos] == q, pos, -1)

    def contains(self, face) -> bool:
        f = tuple(sorted(face))
        return bool(self.index_of(len(f) - 1, [f])[0] >= 0)

    def skeleton(self, k: int) -> "SimplicialComplex":
        X = SimplicialComplex.__new__(SimplicialComplex)
        X.n = self.n
        X._faces = [a.copy() for a in self._faces[: k + 2]]
        X._index_cache = {}
        return X

    def has_complete_skeleton(self, k: int) -> bool:
        return self.count(k) == comb(self.n, k + 1)

    def is_pure(self) -> bool:
        """Every face lies in a face of top dimension."""
        F = self.faces(self.dim)
        for k in range(self.dim - 1, -1, -1):
            covered = np.zeros(self.count(k), dtype=bool)
            for j in range(k + 2):
                covered[self.index_of(k, np.delete(F, j, axis=1))] = True
            if not covered.all():
                return False
            F = self.faces(k)
        return True

    def degree(self, i: int) -> np.ndarray:
        """Number of (i+1)-faces containing each i-face."""
        out = np.zeros(self.count(i), dtype=np.int64)
        F = self.faces(i + 1)
        for j in range(i + 2):
            np.add.at(out, self.index_of(i, np.delete(F, j, axis=1)), 1)
        return out


def incidence(F, G) -> int:
    """Oriented incidence number [F:G] for an i-face F and an (i-1)-face G."""
    F = tuple(sorted(F))
    G = tuple(sorted(G))
    if len(F) != len(G) + 1:
        raise ParameterError("faces must be in consecutive dimensions")
    extra = set(F) - set(G)
    if len(extra) != 1:
        return 0
    (v,) = extra
    return -1 if F.index(v) % 2 else 1


def boundary_matrix(X: SimplicialComplex, i: int, mode: str = "int") -> sp.csr_matrix:
    """Sparse |X^(i-1)| x |X^(i)| boundary matrix; ``mode`` is 'int' (signed) or 'f2'."""
    if i < 0 or i > X.dim:
        raise ParameterError(f"boundary index {i} outside 0..{X.dim}")
    if mode not in ("int", "f2"):
        raise ParameterError("mode must be 'int' or 'f2'")
    F = X.faces(i)
    N = len(F)
    rows, cols, vals = [], [], []
    for j in range(i + 1):
        rows.append(X.index_of(i - 1, np.delete(F, j, axis=1)))
        cols.append(np.arange(N))
        vals.append(np.full(N, 1 if mode == "f2" or j % 2 == 0 else -1, dtype=np.int64))
    shape = (X.count(i - 1), N)
    if N == 0:
        return sp.csr_matrix(shape, dtype=np.int64)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=shape)


def coboundary_matrix(X: SimplicialComplex, i: int, mode: str = "int") -> sp.csr_matrix:
    """delta_i : C^i -> C^{i+1}, the transpose of the boundary map."""
    if i + 1 > X.dim:
        return sp.csr_matrix((0, X.count(i)), dtype=np.int64)
    return boundary_matrix(X, i + 1, mode).T.tocsr()


class ChainSystem:
    """Boundary and coboundary maps of a complex in one coefficient mode."""

    def __init__(self, X: SimplicialComplex, mode: str = "int"):
        self.X = X
        self.mode = mode
        self._bd = {}

    def boundary(self, i: int) -> sp.csr_matrix:
        if i not in self._bd:
            self._bd[i] = boundary_matrix(self.X, i, self.mode)
        return self._bd[i]

    def coboundary(self, i: int) -> sp.csr_matrix:
        return coboundary_matrix(self.X, i, self.mode)

    def dim_cochains(self, i: int) -> int:
        return self.X.count(i)

    def check(self) -> bool:
        """All compositions of consecutive boundary maps vanish (mod 2 in f2 mode)."""
        for i in range(1, self.X.dim + 1):
            P = (self.boundary(i - 1) @ self.boundary(i)).tocoo()
            data = P.data % 2 if self.mode == "f2" else P.data
            if np.any(data):
                return False
        return True


def laplacian(X: SimplicialComplex, i: int, variant: str = "up", sparse: bool = False):
    """Integer Laplacian on C^i: 'up' = d_{i+1} d_{i+1}^T, 'down' = d_i^T d_i, 'full' = both."""
    if i < -1 or i > X.dim:
        raise ParameterError(f"Laplacian index {i} outside -1..{X.dim}")
    N = X.count(i)
    L = sp.csr_matrix((N, N), dtype=np.int64)
    if variant not in ("up", "down", "full"):
        raise ParameterError("variant must be up, down or full")
    if variant in ("up", "full") and i + 1 <= X.dim:
        B = boundary_matrix(X, i + 1)
        L = L + (B @ B.T)
    if variant in ("down", "full") and i >= 0:
        B = boundary_matrix(X, i)
        L = L + (B.T @ B)
    L = L.tocsr()
    return L if sparse else L.toarray()


# ---------------------------------------------------------------- F_2 ranks


def f2_rank(rows) -> int:
    """Rank over F_2 of rows given as bit-packed Python ints."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def _packed_columns(M: sp.spmatrix) -> list[int]:
    """Each column of a sparse 0/1 matrix as a bit-packed int over the row index."""
    C = sp.csc_matrix(M)
    out = []
    for j in range(C.shape[1]):
        r = 0
        for k, v in zip(C.indices[C.indptr[j] : C.indptr[j + 1]], C.data[C.indptr[j] : C.indptr[j + 1]]):
            if v % 2:
                r ^= 1 << int(k)
        out.append(r)
    return out


def rank_f2_matrix(M) -> int:
    M = sp.csr_matrix(M)
    return f2_rank(_packed_columns(M.T)) if M.shape[0] <= M.shape[1] else f2_rank(_packed_columns(M))


def coboundary_rank_f2(X: SimplicialComplex, i: int) -> int:
    """rank of delta_i over F_2, computed from packed coboundary rows."""
    if i < -1 or i + 1 > X.dim:
        return 0
    # rows of delta_i are indexed by (i+1)-faces; the packed row of one face is its boundary
    return f2_rank(_packed_columns(boundary_matrix(X, i + 1, "f2")))


def boundary_rank_f2(X: SimplicialComplex, i: int) -> int:
    """rank of the boundary map d_i over F_2, from packed rows indexed by (i-1)-faces."""
    if i < 0 or i > X.dim:
        return 0
    return f2_rank(_packed_columns(boundary_matrix(X, i, "f2").T))


def betti_f2(X: SimplicialComplex, i: int, reduced: bool = False) -> int:
    """dim H^i(X; F_2) = dim ker delta_i - rank delta_{i-1}.

    The unreduced version leaves out the empty face, so a point has b_0 = 1;
    ``reduced=True`` keeps it (and a connected complex has b_0 = 0).
    """
    if i < -1:
        raise ParameterError("dimension must be >= -1")
    if i == -1 and not reduced:
        return 0
    N = X.count(i)
    if N == 0:
        return 0
    below = coboundary_rank_f2(X, i - 1) if (i >= 1 or reduced) else 0
    return N - coboundary_rank_f2(X, i) - below


def homology_f2(X: SimplicialComplex, i: int, reduced: bool = False) -> int:
    """dim H_i(X; F_2) = dim ker d_i - rank d_{i+1}, ranks taken on the boundary side."""
    if i < -1:
        raise ParameterError("dimension must be >= -1")
    if i == -1 and not reduced:
        return 0
    N = X.count(i)
    if N == 0:
        return 0
    out = boundary_rank_f2(X, i) if (i >= 1 or reduced) else 0
    return N - out - boundary_rank_f2(X, i + 1)


# ---------------------------------------------------------------- constructors


def clique_complex(graph, max_dim: int, cap: int = DEFAULT_CLIQUE_CAP) -> SimplicialComplex:
    """All cliques with at most max_dim+1 vertices."""
    g: Graph = as_graph(graph)
    if max_dim < 0:
        raise ParameterError("max_dim must be >= 0")
    A = g.adjacency()
    up = [frozenset(int(w) for w in A.indices[A.indptr[v] : A.indptr[v + 1]] if w > v) for v in range(g.n)]
    arrays = [np.zeros((1, 0), dtype=np.int64), np.arange(g.n, dtype=np.int64).reshape(-1, 1)]
    level = [((v,), up[v]) for v in range(g.n)]
    total = g.n
    for k in range(1, max_dim + 1):
        nxt = []
        for clique, cand in level:
            for v in sorted(cand):
                nxt.append((clique + (v,), cand & up[v]))
        total += len(nxt)
        if total > cap:
            raise CapExceeded(f"clique count exceeded cap {cap}")
        if not nxt:
            break
        arrays.append(np.array([c for c, _ in nxt], dtype=np.int64).reshape(-1, k + 1))
        level = nxt
    return SimplicialComplex.from_arrays(arrays, g.n)


def full_simplex(n: int, d: int | None = None) -> SimplicialComplex:
    """The complete d-dimensional complex on n vertices (all faces of size <= d+1)."""
    d = n - 1 if d is None else d
    return SimplicialComplex(combinations(range(n), d + 1), n_vertices=n) if d >= 0 else SimplicialComplex((), n)


def simplex_boundary(n: int) -> SimplicialComplex:
    """Boundary of the (n-1)-simplex."""
    return full_simplex(n, n - 2)

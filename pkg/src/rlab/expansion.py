"""Combinatorial expansion: Cheeger constants, F_2 coboundary expansion, filling,
discrepancy, the Cheeger and mixing inequalities, and geometric overlap depth.

Every constant here is an exact minimum (or maximum) over a full enumeration,
guarded by hard size caps.  Ratios are returned as ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod

import numpy as np

from .complex import SimplicialComplex, boundary_matrix, _packed_columns
from .errors import CapExceeded, ParameterError
from .graph import Graph, as_graph
from .spectra import complex_mu0, spectral_gap, sym_eigs

GRAPH_CAP = 24
HIGHDIM_CAP = 14
COCHAIN_CAP = 22
CHECK_TOL = 1e-9


def _as_complex(X) -> SimplicialComplex:
    if isinstance(X, SimplicialComplex):
        return X
    return SimplicialComplex.from_graph(X)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _exact_argmin(num: np.ndarray, den: np.ndarray, keys, maximize: bool = False):
    """Index of the exact min (or max) of num/den; ties go to the smallest key."""
    r = num / den
    best = r.max() if maximize else r.min()
    cand = np.nonzero(np.abs(r - best) <= 1e-9 * max(1.0, abs(best)))[0]
    fr = [Fraction(int(num[c]), int(den[c])) for c in cand]
    target = max(fr) if maximize else min(fr)
    hits = [c for c, f in zip(cand, fr) if f == target]
    return min(hits, key=keys), target


# ---------------------------------------------------------------- graph Cheeger


@dataclass
class PartitionWitness:
    parts: tuple  # tuple of sorted vertex tuples
    value: Fraction
    count: int  # |E(A, V-A)| or |F(A_0..A_d)|


def cheeger_graph(graph) -> tuple[PartitionWitness, PartitionWitness]:
    """Exact h(X) = min n|E(A,A')|/(|A||A'|) and hbar(X) = min_{|A|<=n/2} |E(A,A')|/|A|."""
    g = as_graph(graph)
    n = g.n
    if n > GRAPH_CAP:
        raise CapExceeded(f"exact Cheeger constant limited to {GRAPH_CAP} vertices")
    if n < 2:
        raise ParameterError("need at least two vertices")
    S = np.arange(1, (1 << n) - 1, dtype=np.int64)
    cut = np.zeros(len(S), dtype=np.int64)
    for u, v in g.edges:
        cut += ((S >> u) ^ (S >> v)) & 1
    size = _popcount(S)

    def members(s):
        return tuple(v for v in range(n) if (int(s) >> v) & 1)

    def witness(idx, value):
        s = int(S[idx])
        A = members(s)
        B = tuple(v for v in range(n) if v not in A)
        return PartitionWitness((A, B), value, int(cut[idx]))

    key = lambda i: members(S[i])
    i, h = _exact_argmin(n * cut, size * (n - size), key)
    small = np.nonzero(2 * size <= n)[0]
    j, hb = _exact_argmin(cut[small], size[small], lambda t: members(S[small[t]]))
    return witness(i, h), witness(small[j], hb)


# ---------------------------------------------------------------- high-dim Cheeger


def _transversal_counts(faces: np.ndarray, labels: np.ndarray, d: int) -> np.ndarray:
    """For each labelling (rows of ``labels``), the number of faces hitting every label 0..d once."""
    full = (1 << (d + 1)) - 1
    onehot = np.left_shift(1, labels.astype(np.int64), where=labels >= 0, out=np.zeros(labels.shape, dtype=np.int64))
    counts = np.zeros(labels.shape[0], dtype=np.int64)
    for f in faces:
        acc = np.zeros(labels.shape[0], dtype=np.int64)
        for v in f:
            acc |= onehot[:, v]
        counts += acc == full
    return counts


def cheeger_highdim(X) -> PartitionWitness:
    """Exact h(X) = min over partitions into d+1 nonempty parts of n|F(A_0..A_d)| / prod |A_i|."""
    X = _as_complex(X)
    n, d = X.n, X.dim
    if n > HIGHDIM_CAP:
        raise CapExceeded(f"high-dimensional Cheeger constant limited to {HIGHDIM_CAP} vertices")
    if d < 1 or n < d + 1:
        raise ParameterError("need a complex of dimension >= 1 with at least d+1 vertices")
    b = d + 1
    idx = np.arange(b ** (n - 1), dtype=np.int64)
    labels = np.zeros((len(idx), n), dtype=np.int8)
    for v in range(1, n):
        labels[:, v] = (idx // b ** (v - 1)) % b
    sizes = np.stack([(labels == j).sum(axis=1) for j in range(b)], axis=1)
    ok = np.all(sizes > 0, axis=1)
    labels, sizes = labels[ok], sizes[ok]
    F = _transversal_counts(X.faces(d), labels, d)
    den = np.prod(sizes, axis=1)

    def parts(i):
        ps = [tuple(int(v) for v in np.nonzero(labels[i] == j)[0]) for j in range(b)]
        return tuple(sorted(ps))

    i, h = _exact_argmin(n * F, den, parts)
    return PartitionWitness(parts(i), h, int(F[i]))


def count_transversal(X, sets) -> int:
    """|F(A_0, ..., A_d)|: top faces with exactly one vertex in each set."""
    X = _as_complex(X)
    labels = _labels_from_sets(X.n, sets)
    return int(_transversal_counts(X.faces(len(sets) - 1), labels[None, :], len(sets) - 1)[0])


def _labels_from_sets(n, sets) -> np.ndarray:
    labels = np.full(n, -1, dtype=np.int64)
    for j, A in enumerate(sets):
        for v in A:
            if not 0 <= v < n:
                raise ParameterError(f"vertex {v} out of range")
            if labels[v] >= 0:
                raise ParameterError("sets must be disjoint")
            labels[v] = j
    return labels


def discrepancy(X, sets) -> Fraction:
    """| |F(A_0..A_d)| - |X^(d)| prod|A_i| / C(n, d+1) |."""
    X = _as_complex(X)
    d = X.dim
    if len(sets) != d + 1:
        raise ParameterError(f"need {d + 1} sets for a {d}-complex")
    F = count_transversal(X, sets)
    expected = Fraction(X.count(d) * prod(len(A) for A in sets), comb(X.n, d + 1))
    return abs(F - expected)


# ---------------------------------------------------------------- F_2 cochains


def _linear_table(images: list[int], chunk_bits: int = 64) -> list[np.ndarray]:
    """Tables T with T[f] = XOR of images[j] over the set bits j of f, split in 64-bit chunks."""
    N = len(images)
    width = max((x.bit_length() for x in images), default=0)
    tables = []
    for lo in range(0, max(width, 1), chunk_bits):
        mask = (1 << chunk_bits) - 1
        T = np.zeros(1 << N, dtype=np.uint64)
        for j, x in enumerate(images):
            part = np.uint64((x >> lo) & mask)
            half = 1 << j
            T[half : 2 * half] = T[:half] ^ part
        tables.append(T)
    return tables


def _rref_reducer(basis_vectors: list[int]):
    """Pivot-reduced basis of the span and the reduction of a single int."""
    piv: dict[int, int] = {}
    for r in basis_vectors:
        while r:
            h = r.bit_length() - 1
            if h in piv:
                r ^= piv[h]
            else:
                piv[h] = r
                break
    # make fully reduced so the reduction is a linear map with a unique output
    for h in sorted(piv):
        for h2 in piv:
            if h2 != h and (piv[h2] >> h) & 1:
                piv[h2] ^= piv[h]

    def reduce(x: int) -> int:
        for h, r in piv.items():
            if (x >> h) & 1:
                x ^= r
        return x

    return piv, reduce


def _f2_solve(columns: list[int], target: int) -> int | None:
    """Bitmask c with XOR_{j in c} columns[j] == target, or None."""
    piv: dict[int, tuple[int, int]] = {}
    for j, col in enumerate(columns):
        comb_mask = 1 << j
        while col:
            h = col.bit_length() - 1
            if h in piv:
                col ^= piv[h][0]
                comb_mask ^= piv[h][1]
            else:
                piv[h] = (col, comb_mask)
                break
    out = 0
    while target:
        h = target.bit_length() - 1
        if h not in piv:
            return None
        target ^= piv[h][0]
        out ^= piv[h][1]
    return out


class _CochainSpace:
    """All (i-1)-cochains of X as ints, with coboundary norms and subspace coset norms."""

    def __init__(self, X: SimplicialComplex, i: int):
        # i = dim + 1 is allowed: C^i is zero there (e.g. an edgeless graph)
        if i < 1 or i > X.dim + 1:
            raise ParameterError(f"dimension {i} outside 1..{X.dim + 1}")
        N = X.count(i - 1)
        if N == 0:
            raise ParameterError(f"X^({i - 1}) is empty")
        if N > COCHAIN_CAP or X.count(i - 2) > COCHAIN_CAP:
            raise CapExceeded(f"exhaustive cochain search limited to {COCHAIN_CAP} faces")
        self.X, self.i, self.N = X, i, N
        # delta_{i-1}: the image of the j-th basis cochain is the set of i-faces containing face j
        self.delta_images = _packed_columns(boundary_matrix(X, i, "f2").T) if i <= X.dim else [0] * N
        # delta_{i-2}: columns indexed by (i-2)-faces
        self.prev_columns = _packed_columns(boundary_matrix(X, i - 1, "f2").T)
        self.f = np.arange(1 << N, dtype=np.uint64)
        self.weight = _popcount(self.f)
        self.dnorm = sum(_popcount(T) for T in _linear_table(self.delta_images))

    def coset_norms(self, basis: list[int]):
        """(coset id, min weight per cochain's coset) for the span of ``basis``."""
        piv, reduce = _rref_reducer(basis)
        (R,) = _linear_table([reduce(1 << j) for j in range(self.N)], chunk_bits=64)
        best = np.full(1 << self.N, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(best, R.astype(np.int64), self.weight)
        return R, best[R.astype(np.int64)], len(piv)


@dataclass
class CochainWitness:
    f: tuple  # indices of (i-1)-faces in the support
    coset_norm: int
    delta_norm: int
    shift: tuple  # (i-2)-faces h with |f + delta h| = coset_norm
    value: Fraction


@dataclass
class CoboundaryResult:
    E: Fraction
    E_normalized: Fraction
    witness: CochainWitness
    cohomology_vanishes: bool


def _support(x: int) -> tuple:
    return tuple(j for j in range(x.bit_length()) if (x >> j) & 1)


def coboundary_expansion(X, i: int) -> CoboundaryResult:
    """Exact F_2 coboundary expansion E_i = min ||delta f|| / ||[f]|| over f outside B^{i-1}."""
    X = _as_complex(X)
    S = _CochainSpace(X, i)
    R, cnorm, _ = S.coset_norms(S.prev_columns)
    outside = np.nonzero(cnorm > 0)[0]
    if len(outside) == 0:
        raise ParameterError("every cochain is a coboundary; E_i is undefined")
    num, den = S.dnorm[outside], cnorm[outside]
    t, E = _exact_argmin(num, den, lambda k: int(outside[k]))
    f = int(outside[t])
    same = np.nonzero((R == R[f]) & (S.weight == cnorm[f]))[0]
    g = int(same[0])
    h = _f2_solve(S.prev_columns, f ^ g)
    w = CochainWitness(_support(f), int(cnorm[f]), int(S.dnorm[f]), _support(h), E)
    top = X.count(i) if i <= X.dim else 0
    En = E * Fraction(X.count(i - 1), top) if top else Fraction(0)
    return CoboundaryResult(E, En, w, E > 0)


@dataclass
class FillingResult:
    nu: Fraction
    witness: CochainWitness


def filling(X, i: int) -> FillingResult:
    """Exact nu_i = max ||f + Z^{i-1}|| / ||delta f|| over f outside Z^{i-1}."""
    X = _as_complex(X)
    S = _CochainSpace(X, i)
    cocycles = np.nonzero(S.dnorm == 0)[0]
    basis = list(_rref_reducer([int(z) for z in cocycles])[0].values())
    R, znorm, _ = S.coset_norms(basis)
    outside = np.nonzero(S.dnorm > 0)[0]
    if len(outside) == 0:
        raise ParameterError("every cochain is a cocycle; filling is undefined")
    t, nu = _exact_argmin(znorm[outside], S.dnorm[outside], lambda k: int(outside[k]), maximize=True)
    f = int(outside[t])
    same = np.nonzero((R == R[f]) & (S.weight == znorm[f]))[0]
    z = int(same[0]) ^ f
    return FillingResult(nu, CochainWitness(_support(f), int(znorm[f]), int(S.dnorm[f]), _support(z), nu))


# ---------------------------------------------------------------- inequalities


@dataclass
class InequalityReport:
    name: str
    lower: float
    middle: float
    upper: float
    passed: bool
    details: dict = field(default_factory=dict)


def _top_faces_degree(X: SimplicialComplex) -> np.ndarray:
    return X.degree(X.dim - 1)


def validate_cheeger_inequalities(X, tol: float = CHECK_TOL) -> InequalityReport:
    """Graphs: h^2/(8k) <= k - mu_1 <= h.  Complexes: the dimension-d analogue with lambda(X)."""
    X = _as_complex(X)
    d = X.dim
    if d == 1:
        g = Graph(X.n, X.faces(1))
        k = g.regular_degree()
        if k is None:
            raise ParameterError("Cheeger inequality check needs a regular graph")
        w = sym_eigs(g.adjacency())
        mu1 = float(w[-2])
        h, _ = cheeger_graph(g)
        hf = float(h.value)
        lower, middle, upper = hf * hf / (8 * k), k - mu1, hf
        return InequalityReport(
            "cheeger-graph", lower, middle, upper, lower <= middle + tol and middle <= upper + tol,
            {"k": k, "mu1": mu1, "h": str(h.value)},
        )
    if d < 1:
        raise ParameterError("need dimension >= 1")
    if not X.has_complete_skeleton(d - 1):
        raise ParameterError(f"the ({d - 1})-skeleton is not complete")
    n = X.n
    k = int(_top_faces_degree(X).max())
    lam = spectral_gap(X, d - 1)
    h = cheeger_highdim(X)
    hf = float(h.value)
    lower = d * (1 - (d - 1) / n) ** 2 * hf * hf / (8 * k) - (d - 1) * k if k else float("-inf")
    return InequalityReport(
        "cheeger-complex", lower, lam, hf, lower <= lam + tol and lam <= hf + tol,
        {"k": k, "lambda": lam, "h": str(h.value), "d": d},
    )


@dataclass
class MixingReport:
    trials: int
    seed: int
    mu0: float
    k: float
    passed: bool
    failures: list
    max_slack_ratio: float


def _random_disjoint_sets(rng, n: int, parts: int):
    perm = rng.permutation(n)
    total = int(rng.integers(parts, n + 1))
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False)) if parts > 1 else np.array([], int)
    bounds = [0, *cuts.tolist(), total]
    return [sorted(int(v) for v in perm[bounds[j] : bounds[j + 1]]) for j in range(parts)]


def validate_mixing(X, trials: int = 100, seed: int = 0, tol: float = CHECK_TOL) -> MixingReport:
    """Check |F - k prod|A_i|/n| <= mu_0 (prod |A_i|)^{d/(d+1)} on seeded random disjoint sets."""
    X = _as_complex(X)
    d = X.dim
    if d < 1:
        raise ParameterError("need dimension >= 1")
    if not X.has_complete_skeleton(d - 1):
        raise ParameterError(f"the ({d - 1})-skeleton is not complete")
    n = X.n
    mu0, k = complex_mu0(X)
    rng = np.random.default_rng(seed)
    failures = []
    worst = 0.0
    for t in range(trials):
        sets = _random_disjoint_sets(rng, n, d + 1)
        P = prod(len(A) for A in sets)
        F = count_transversal(X, sets)
        dev = abs(F - k * P / n)
        bound = mu0 * P ** (d / (d + 1))
        if bound > 0:
            worst = max(worst, dev / bound)
        if dev > bound + tol:
            failures.append({"trial": t, "sets": sets, "deviation": dev, "bound": bound})
    return MixingReport(trials, seed, mu0, k, not failures, failures, worst)


# ---------------------------------------------------------------- geometric overlap


@dataclass
class OverlapResult:
    depth: Fraction
    point: tuple
    jittered: bool


def _has_collinear_triple(P: np.ndarray, eps: float) -> bool:
    n = len(P)
    for a in range(n):
        D = P - P[a]
        for b in range(a + 1, n):
            cross = D[b, 0] * D[b + 1 :, 1] - D[b, 1] * D[b + 1 :, 0]
            if np.any(np.abs(cross) <= eps):
                return True
    return False


def _segment_intersections(S: np.ndarray) -> np.ndarray:
    """Intersection points of all pairs of closed segments (rows: x1,y1,x2,y2)."""
    pts = []
    m = len(S)
    for a in range(m):
        p, r = S[a, :2], S[a, 2:] - S[a, :2]
        Q = S[a + 1 :, :2]
        Sd = S[a + 1 :, 2:] - Q
        den = r[0] * Sd[:, 1] - r[1] * Sd[:, 0]
        ok = np.abs(den) > 1e-15
        qp = Q - p
        t = np.where(ok, (qp[:, 0] * Sd[:, 1] - qp[:, 1] * Sd[:, 0]) / np.where(ok, den, 1), -1)
        u = np.where(ok, (qp[:, 0] * r[1] - qp[:, 1] * r[0]) / np.where(ok, den, 1), -1)
        hit = ok & (t >= -1e-12) & (t <= 1 + 1e-12) & (u >= -1e-12) & (u <= 1 + 1e-12)
        if np.any(hit):
            pts.append(p + t[hit, None] * r)
    return np.concatenate(pts) if pts else np.zeros((0, 2))


def _depths(points: np.ndarray, tri: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Number of closed triangles (T,3,2) containing each point, via barycentric coordinates."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    v0, v1 = b - a, c - a
    det = v0[:, 0] * v1[:, 1] - v0[:, 1] * v1[:, 0]
    out = np.zeros(len(points), dtype=np.int64)
    for s in range(0, len(points), 4096):
        P = points[s : s + 4096, None, :] - a[None]
        l1 = (P[..., 0] * v1[:, 1] - P[..., 1] * v1[:, 0]) / det
        l2 = (v0[:, 0] * P[..., 1] - v0[:, 1] * P[..., 0]) / det
        inside = (l1 >= -tol) & (l2 >= -tol) & (l1 + l2 <= 1 + tol)
        out[s : s + 4096] = inside.sum(axis=1)
    return out


def overlap_depth(X, embedding, seed: int = 0) -> OverlapResult:
    """Largest fraction of 2-faces whose closed image triangles share a common point."""
    X = _as_complex(X)
    if X.dim != 2:
        raise ParameterError("overlap depth needs a 2-complex")
    P = np.asarray(embedding, dtype=float).reshape(X.n, 2)
    if len(np.unique(P, axis=0)) != X.n:
        raise ParameterError("embedding is not injective")
    scale = max(1.0, float(np.abs(P).max()))
    jittered = False
    if _has_collinear_triple(P, 1e-12 * scale * scale):
        P = P + np.random.default_rng(seed).uniform(-1e-9, 1e-9, size=P.shape) * scale
        jittered = True
    T = X.faces(2)
    tri = P[T]
    E = np.unique(np.concatenate([T[:, [0, 1]], T[:, [0, 2]], T[:, [1, 2]]]), axis=0)
    segs = np.concatenate([P[E[:, 0]], P[E[:, 1]]], axis=1)
    cands = np.concatenate([tri.mean(axis=1), P, _segment_intersections(segs)])
    depth = _depths(cands, tri)
    j = int(np.argmax(depth))
    return OverlapResult(Fraction(int(depth[j]), len(T)), (float(cands[j, 0]), float(cands[j, 1])), jittered)


@dataclass
class OverlapEstimate:
    upper_bound: Fraction
    trials: int
    seed: int
    depths: list


def overlap_estimate(X, trials: int = 50, seed: int = 0) -> OverlapEstimate:
    """Minimum overlap depth over seeded random embeddings: an upper bound on the overlap constant."""
    X = _as_complex(X)
    if trials < 1:
        raise ParameterError("need at least one trial")
    rng = np.random.default_rng(seed)
    depths = []
    for t in range(trials):
        emb = rng.standard_normal((X.n, 2))
        depths.append(overlap_depth(X, emb, seed=seed + t).depth)
    return OverlapEstimate(min(depths), trials, seed, depths)

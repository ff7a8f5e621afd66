"""Eigenvalue computations: graph spectra, Ramanujan tests, spectral gaps, Hecke joint spectra."""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .complex import SimplicialComplex, boundary_matrix, laplacian
from .errors import CapExceeded, ParameterError, VerificationError
from .graph import Graph, as_graph

RAMANUJAN_TOL = 1e-9
CIRCLE_TOL = 1e-6
JOINT_TOL = 1e-8
DENSE_LIMIT = 5000


# ---------------------------------------------------------------- dense symmetric


def _to_dense(M) -> np.ndarray:
    return M.toarray().astype(float) if sp.issparse(M) else np.asarray(M, dtype=float)


def sym_eigh(M, sym_tol: float = 1e-12):
    """Eigenpairs of a real symmetric matrix: (ascending values, vectors, max residual).

    The residual max_j ||M v_j - w_j v_j|| is checked against 1e-9 * ||M||.
    """
    A = _to_dense(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError("expected a square matrix")
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    if np.abs(A - A.T).max(initial=0.0) > sym_tol * scale:
        raise ParameterError("matrix is not symmetric")
    if A.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0)), 0.0
    w, V = np.linalg.eigh(A)
    R = (M @ V if sp.issparse(M) else A @ V) - V * w
    res = float(np.linalg.norm(R, axis=0).max())
    norm = float(np.abs(w).max())
    if res > 1e-9 * norm + 1e-300:
        raise VerificationError(f"eigen residual {res:.3e} exceeds 1e-9*||M|| = {1e-9 * norm:.3e}")
    return w, V, res


def sym_eigs(M, sym_tol: float = 1e-12) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, ascending."""
    return sym_eigh(M, sym_tol)[0]


def extremal_eigs(A, deflate=None, seed: int = 0, tol: float = 0.0):
    """Largest and smallest eigenvalues of A restricted to the complement of ``deflate``.

    ``deflate`` is an (n, r) real array whose column span is projected out
    (eigenvalue 0 on that span).  Returns ((lam_min, v_min), (lam_max, v_max), residual).
    """
    A = sp.csr_matrix(A, dtype=float)
    n = A.shape[0]
    Q = None
    if deflate is not None and np.size(deflate):
        Q, _ = np.linalg.qr(np.asarray(deflate, dtype=float).reshape(n, -1))

    def proj(x):
        return x - Q @ (Q.T @ x) if Q is not None else x

    op = spla.LinearOperator((n, n), matvec=lambda x: proj(A @ proj(x)), dtype=float)
    rng = np.random.default_rng(seed)
    v0 = proj(rng.standard_normal(n))
    out = []
    for which in ("SA", "LA"):
        w, V = spla.eigsh(op, k=1, which=which, v0=v0, tol=tol, ncv=min(n - 1, 64), maxiter=20 * n)
        out.append((float(w[0]), V[:, 0]))
    res = max(float(np.linalg.norm(op @ v - lam * v)) for lam, v in out)
    return out[0], out[1], res


# ---------------------------------------------------------------- graphs


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    residual: float
    residual_bound: float
    tags: list = field(default_factory=list)


@dataclass
class RamanujanVerdict:
    ramanujan: bool
    n: int
    k: int
    bipartite: bool
    bound: float
    tol: float
    max_nontrivial: float
    offending: float | None
    eigenvalues: np.ndarray | None
    residual: float
    mode: str = "full"


def _regular_connected(graph) -> tuple[Graph, int]:
    g = as_graph(graph)
    k = g.regular_degree()
    if k is None:
        raise ParameterError("graph is not regular")
    if not g.is_connected():
        raise ParameterError("graph is not connected")
    return g, k


def graph_spectrum(graph) -> SpectrumReport:
    """Full adjacency spectrum with a tag per eigenvalue (trivial / tempered / violating)."""
    g = as_graph(graph)
    A = g.adjacency()
    w, _, res = sym_eigh(A)
    k = g.regular_degree()
    tags = []
    if k is not None and g.is_connected():
        bound = 2 * math.sqrt(max(k - 1, 0))
        bip = g.is_bipartite()
        for i, lam in enumerate(w):
            if i == len(w) - 1 or (bip and i == 0):
                tags.append("trivial")
            elif abs(lam) <= bound + RAMANUJAN_TOL:
                tags.append("tempered")
            else:
                tags.append("violating")
    return SpectrumReport(w, res, 1e-9 * float(np.abs(w).max(initial=0.0)), tags)


def is_ramanujan_graph(graph, tol: float = RAMANUJAN_TOL, mode: str = "auto", seed: int = 0) -> RamanujanVerdict:
    """Decide whether every eigenvalue other than the trivial +-k satisfies |lam| <= 2 sqrt(k-1) + tol.

    ``mode`` is 'full' (dense eigensolve), 'extremal' (Lanczos on the
    complement of the trivial eigenvectors) or 'auto' (full up to 5000 vertices).
    """
    g, k = _regular_connected(graph)
    if k < 3:
        raise ParameterError("Ramanujan verdicts need k >= 3")
    n = g.n
    colors = g.two_coloring()
    bip = colors is not None
    bound = 2 * math.sqrt(k - 1)
    if mode == "auto":
        mode = "full" if n <= DENSE_LIMIT else "extremal"
    if mode == "full":
        w, _, res = sym_eigh(g.adjacency())
        if abs(w[-1] - k) > tol:
            raise VerificationError("largest eigenvalue differs from the degree")
        rest = w[1:-1] if bip else w[:-1]
        if bip and abs(w[0] + k) > tol:
            raise VerificationError("bipartite graph without eigenvalue -k")
        eigs = w
    elif mode == "extremal":
        cols = [np.ones(n)]
        if bip:
            cols.append(1.0 - 2.0 * colors)
        (lo, _), (hi, _), res = extremal_eigs(g.adjacency(), np.stack(cols, axis=1), seed=seed)
        rest = np.array([lo, hi])
        eigs = None
    else:
        raise ParameterError("mode must be full, extremal or auto")
    idx = int(np.argmax(np.abs(rest))) if len(rest) else None
    worst = float(abs(rest[idx])) if idx is not None else 0.0
    ok = worst <= bound + tol
    return RamanujanVerdict(
        ramanujan=bool(ok),
        n=n,
        k=k,
        bipartite=bip,
        bound=bound,
        tol=tol,
        max_nontrivial=worst,
        offending=None if ok else float(rest[idx]),
        eigenvalues=eigs,
        residual=res,
        mode=mode,
    )


def mu_values(graph, eigenvalues=None) -> tuple[float, float, float]:
    """(mu, mu_0, mu_1) of a connected regular graph.

    One copy of k is removed for all three; for mu one copy of -k is removed
    as well when it occurs.
    """
    g, k = _regular_connected(graph)
    w = np.sort(eigenvalues) if eigenvalues is not None else sym_eigs(g.adjacency())
    rest = w[:-1]
    mu1 = float(rest.max()) if len(rest) else float("-inf")
    mu0 = float(np.abs(rest).max()) if len(rest) else 0.0
    if len(rest) and abs(rest[0] + k) < 1e-8:
        rest = rest[1:]
    mu = float(np.abs(rest).max()) if len(rest) else 0.0
    return mu, mu0, mu1


def girth(graph, sources=None) -> float:
    """Length of a shortest cycle (inf for forests); BFS from ``sources`` (default all vertices)."""
    g = as_graph(graph)
    A = g.adjacency()
    best = math.inf
    for s in range(g.n) if sources is None else sources:
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for w in A.indices[A.indptr[v] : A.indptr[v + 1]]:
                w = int(w)
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def injective_radius(graph, sources=None) -> int:
    """Largest r such that every r-ball around a source is a tree: floor((girth - 1) / 2)."""
    gi = girth(graph, sources)
    if math.isinf(gi):
        raise ParameterError("graph is a forest; injective radius is unbounded")
    return int((gi - 1) // 2)


# ---------------------------------------------------------------- complexes


def cycle_basis(X: SimplicialComplex, i: int) -> np.ndarray:
    """Orthonormal basis (columns) of Z_i(X, R) = ker of the boundary map d_i."""
    B = boundary_matrix(X, i).toarray().astype(float)
    return sla.null_space(B)


def restricted_laplacian_spectrum(X: SimplicialComplex, i: int) -> np.ndarray:
    """Spectrum of Delta_i restricted to Z_i(X, R) (ascending)."""
    if i < 0 or i > X.dim:
        raise ParameterError(f"dimension {i} outside 0..{X.dim}")
    Z = cycle_basis(X, i)
    if Z.shape[1] == 0:
        return np.zeros(0)
    L = laplacian(X, i, "up").astype(float)
    R = Z.T @ L @ Z
    return sym_eigs((R + R.T) / 2)


def spectral_gap(X: SimplicialComplex, i: int) -> float:
    """lambda_i(X), the bottom of the spectrum of Delta_i on Z_i(X, R)."""
    w = restricted_laplacian_spectrum(X, i)
    if len(w) == 0:
        raise ParameterError(f"Z_{i} is trivial")
    # clamp round-off below zero
    return 0.0 if abs(w[0]) < 1e-12 else float(w[0])


def complex_mu0(X: SimplicialComplex) -> tuple[float, float]:
    """(mu_0, k) with k the average degree of a top-minus-one face and mu_0 the
    spectral radius of k I - Delta_{d-1} on Z_{d-1}."""
    d = X.dim
    k = (d + 1) * X.count(d) / X.count(d - 1)
    w = restricted_laplacian_spectrum(X, d - 1)
    return float(np.abs(k - w).max(initial=0.0)), k


# ---------------------------------------------------------------- Hecke / Sigma_d


def gaussian_binomial(d: int, k: int, q: int) -> int:
    """Number of k-codimensional subspaces of F_q^d."""
    if not 0 <= k <= d:
        raise ParameterError("need 0 <= k <= d")
    num, den = 1, 1
    for j in range(k):
        num *= q ** (d - j) - 1
        den *= q ** (j + 1) - 1
    out = num // den
    if out >= 1 << 128:
        raise CapExceeded("Gaussian binomial exceeds 128 bits")
    return out


def trivial_tuples(d: int, q: int) -> list[tuple]:
    """The d tuples ([d,1]_q xi, ..., [d,d-1]_q xi^(d-1)) for the d-th roots of unity xi."""
    if d < 2:
        raise ParameterError("need d >= 2")
    out = []
    for j in range(d):
        xi = cmath.exp(2j * math.pi * j / d)
        tup = []
        for k in range(1, d):
            v = gaussian_binomial(d, k, q) * xi**k
            # exact real values where xi^k is +-1
            if (j * k * 2) % d == 0:
                v = complex(round(v.real), 0.0)
            tup.append(v)
        out.append(tuple(tup))
    return out


@dataclass
class Membership:
    status: str  # inside / outside / asymmetric
    roots: np.ndarray
    sigma: np.ndarray

    @property
    def inside(self) -> bool:
        return self.status == "inside"


def _cluster_roots(z: np.ndarray, radius: float) -> np.ndarray:
    """Replace groups of nearby roots by their mean (keeps multiplicity)."""
    z = np.asarray(z, dtype=complex)
    n = len(z)
    label = list(range(n))

    def find(a):
        while label[a] != a:
            label[a] = label[label[a]]
            a = label[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if abs(z[a] - z[b]) <= radius:
                label[find(a)] = find(b)
    out = z.copy()
    roots = [find(a) for a in range(n)]
    for r in set(roots):
        members = [a for a in range(n) if roots[a] == r]
        out[members] = z[members].mean()
    return out


def sigma_d_membership(lams, d: int, q: int, tol: float = CIRCLE_TOL) -> Membership:
    """Is (lam_1..lam_{d-1}) in the tempered region Sigma_d?

    Forms the polynomial whose elementary symmetric functions are the
    normalized sigma_k and checks its roots lie on the unit circle.
    """
    if d < 2:
        raise ParameterError("need d >= 2")
    lam = np.asarray(lams, dtype=complex).ravel()
    if len(lam) != d - 1:
        raise ParameterError(f"expected {d - 1} values")
    sigma = np.array([lam[k - 1] * q ** (-k * (d - k) / 2) for k in range(1, d)], dtype=complex)
    for k in range(1, d):
        a, b = lam[k - 1], np.conj(lam[d - k - 1])
        if abs(a - b) > tol * max(1.0, abs(a)):
            return Membership("asymmetric", np.zeros(0, dtype=complex), sigma)
    full = np.concatenate([[1.0], sigma, [1.0]])
    coeffs = np.array([(-1) ** k * full[k] for k in range(d + 1)], dtype=complex)
    z = np.roots(coeffs)
    # multiple roots come out split by ~eps^(1/m); regroup them before measuring moduli
    z = _cluster_roots(z, 10 * np.finfo(float).eps ** (1.0 / d) * max(1.0, float(np.abs(z).max())))
    z = z[np.lexsort((np.round(z.imag, 12), np.round(z.real, 12)))]
    inside = bool(np.all(np.abs(1 - np.abs(z)) <= tol))
    return Membership("inside" if inside else "outside", z, sigma)


@dataclass
class JointSpectrum:
    tuples: np.ndarray  # (n, d-1) complex
    residuals: np.ndarray  # (n, d-1)
    vectors: np.ndarray | None
    attempts: int
    seed: int


def _sparse_int(A):
    return sp.csr_matrix(A, dtype=np.int64)


def check_hecke_family(ops) -> None:
    mats = [_sparse_int(A) for A in ops]
    m = len(mats)
    for a in range(m):
        if (mats[a].T != mats[m - 1 - a]).nnz:
            raise VerificationError(f"A_{a + 1} transposed is not A_{m - a}")
        for b in range(a + 1, m):
            if (mats[a] @ mats[b] != mats[b] @ mats[a]).nnz:
                raise VerificationError(f"A_{a + 1} and A_{b + 1} do not commute")


def joint_spectrum(ops, seed: int = 0, tol: float = JOINT_TOL, max_retries: int = 5, keep_vectors: bool = False) -> JointSpectrum:
    """Simultaneous eigen-tuples of commuting normal matrices A_1..A_{d-1} with A_k^T = A_{d-k}.

    A random symmetric combination sum t_k (A_k + A_k^T) is diagonalized first;
    degenerate clusters are split with the Hermitian i(A_k - A_k^T) parts.
    """
    mats = [_sparse_int(A) for A in ops]
    check_hecke_family(mats)
    n = mats[0].shape[0]
    degree = max(1, max(int(abs(A).sum(axis=1).max()) for A in mats))
    F = [A.astype(float) for A in mats]
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_retries + 1):
        t = rng.uniform(0.5, 1.5, size=len(F))
        s = rng.uniform(0.5, 1.5, size=len(F))
        H = sum(tk * (A + A.T) for tk, A in zip(t, F)).toarray()
        w, V = np.linalg.eigh(H)
        V = V.astype(complex)
        gap = 1e-7 * max(1.0, float(np.abs(w).max()))
        S = sum(sk * (A - A.T) for sk, A in zip(s, F))
        start = 0
        while start < n:
            end = start + 1
            while end < n and w[end] - w[end - 1] <= gap:
                end += 1
            if end - start > 1:
                Vc = V[:, start:end]
                K = 1j * (Vc.conj().T @ (S @ Vc))
                _, U = np.linalg.eigh((K + K.conj().T) / 2)
                V[:, start:end] = Vc @ U
            start = end
        tuples = np.empty((n, len(F)), dtype=complex)
        resid = np.empty((n, len(F)))
        for k, A in enumerate(F):
            AV = A @ V
            lam = np.einsum("ij,ij->j", V.conj(), AV)
            tuples[:, k] = lam
            resid[:, k] = np.linalg.norm(AV - V * lam, axis=0)
        if resid.max() <= tol * degree:
            order = np.lexsort(tuple(np.round(tuples[:, k].imag, 9) for k in reversed(range(len(F))))
                               + tuple(np.round(tuples[:, k].real, 9) for k in reversed(range(len(F)))))
            return JointSpectrum(tuples[order], resid[order], V[:, order] if keep_vectors else None, attempt, seed)
    raise VerificationError(f"joint eigen residual {resid.max():.3e} above {tol * degree:.3e} after {max_retries} attempts")


@dataclass
class ComplexVerdict:
    ramanujan: bool
    classes: list  # per tuple: trivial / inside / outside / asymmetric
    offending: list


def classify_tuple(lam, d: int, q: int, tol: float = CIRCLE_TOL) -> str:
    for triv in trivial_tuples(d, q):
        if all(abs(lam[k - 1] - triv[k - 1]) <= tol * gaussian_binomial(d, k, q) for k in range(1, d)):
            return "trivial"
    return sigma_d_membership(lam, d, q, tol).status


def is_ramanujan_complex(tuples, d: int, q: int, tol: float = CIRCLE_TOL) -> ComplexVerdict:
    """Every joint tuple must be trivial or lie in Sigma_d."""
    classes = [classify_tuple(t, d, q, tol) for t in np.asarray(tuples, dtype=complex).reshape(-1, d - 1)]
    bad = [i for i, c in enumerate(classes) if c not in ("trivial", "inside")]
    return ComplexVerdict(not bad, classes, bad)

"""LPS Ramanujan graphs X^{p,q} as Cayley graphs of PGL_2(F_q) or PSL_2(F_q)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import legendre, pgl_order, prime_field, proj_canonical, psl_order, sqrt_minus_one
from .algebra.fields import is_prime
from .algebra.projective import DEFAULT_GROUP_CAP, MatrixGroup, ProjMatrix, group_closure
from .errors import ParameterError, VerificationError
from .graph import Graph


def _check_prime_1mod4(p: int, name: str):
    if not is_prime(p):
        raise ParameterError(f"{name}={p} is not prime")
    if p % 4 != 1:
        raise ParameterError(f"{name}={p} is not 1 mod 4")


def jacobi_solutions(p: int) -> list[tuple[int, int, int, int]]:
    """All (x0, x1, x2, x3) with sum of squares p, x0 odd and positive, in lexicographic order."""
    _check_prime_1mod4(p, "p")
    r = math.isqrt(p)
    sols = []
    for x0 in range(1, r + 1, 2):
        rest = p - x0 * x0
        for x1 in range(-r, r + 1):
            r1 = rest - x1 * x1
            if r1 < 0:
                continue
            for x2 in range(-r, r + 1):
                r2 = r1 - x2 * x2
                if r2 < 0:
                    continue
                x3 = math.isqrt(r2)
                if x3 * x3 == r2:
                    sols.extend({(x0, x1, x2, -x3), (x0, x1, x2, x3)})
    sols.sort()
    if len(sols) != p + 1:
        raise VerificationError(f"expected {p + 1} solutions, found {len(sols)}")
    return sols


def solution_matrix(sol, q: int, eps: int | None = None) -> np.ndarray:
    """The integer matrix of a solution over F_q, with eps a square root of -1."""
    if eps is None:
        eps = sqrt_minus_one(q)
    x0, x1, x2, x3 = sol
    M = np.array([[x0 + eps * x1, x2 + eps * x3], [-x2 + eps * x3, x0 - eps * x1]], dtype=np.int64)
    return M % q


def lps_generators(p: int, q: int) -> list[ProjMatrix]:
    """The p+1 projective generators over F_q, ordered like ``jacobi_solutions(p)``."""
    _check_prime_1mod4(p, "p")
    _check_prime_1mod4(q, "q")
    if p == q:
        raise ParameterError("p and q must be distinct")
    if q * q <= 4 * p:
        raise ParameterError(f"need q > 2*sqrt(p); got p={p}, q={q}")
    F = prime_field(q)
    eps = sqrt_minus_one(q)
    gens = [proj_canonical(solution_matrix(s, q, eps), F) for s in jacobi_solutions(p)]
    if len(set(gens)) != len(gens):
        raise ParameterError(f"generators collide projectively; q={q} is too small for p={p}")
    return gens


@dataclass
class LpsGraph:
    p: int
    q: int
    generators: list
    group: MatrixGroup
    neighbors: np.ndarray  # neighbors[v, j] = v * generators[j]
    graph: Graph
    group_type: str  # "PGL" or "PSL"
    bipartite: bool

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def degree(self) -> int:
        return self.p + 1


def lps_graph(p: int, q: int, cap: int = DEFAULT_GROUP_CAP) -> LpsGraph:
    """Build X^{p,q} and check it against the predicted group and bipartiteness."""
    gens = lps_generators(p, q)
    G = group_closure(gens, cap=cap)
    nbrs = np.stack([G.right_multiply(s) for s in gens], axis=1)
    graph = Graph.from_neighbors(nbrs)

    predicted_pgl = legendre(p, q) == -1
    group_type = "PGL" if predicted_pgl else "PSL"
    want = pgl_order(2, q) if predicted_pgl else psl_order(2, q)
    if G.order != want:
        raise VerificationError(f"group order {G.order} != predicted {group_type}_2({q}) order {want}")
    if graph.regular_degree() != p + 1:
        raise VerificationError("Cayley graph is not (p+1)-regular")
    if not graph.is_connected():
        raise VerificationError("Cayley graph is not connected")
    bip = graph.is_bipartite()
    if bip != predicted_pgl:
        raise VerificationError(f"bipartite={bip} contradicts the predicted {group_type} structure")
    return LpsGraph(p, q, gens, G, nbrs, graph, group_type, bip)

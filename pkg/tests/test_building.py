import math

import numpy as np
import pytest

from rlab.algebra import Poly, TruncSeries, field_of_order, prime_field
from rlab.algebra.poly import det_poly
from rlab.building import (
    AdjacencyType,
    adjacency_type,
    building_ball,
    canonical_class,
    hecke_matrices,
    identity_class,
    vertex_color,
)
from rlab.errors import CapExceeded, InsufficientPrecision
from rlab.spectra import gaussian_binomial


def _diag(F, exps):
    d = len(exps)
    return [[Poly(F, (0,) * exps[i] + (1,)) if i == j else Poly(F) for j in range(d)] for i in range(d)]


def test_vertex_color_examples():
    F = prime_field(2)
    assert vertex_color(_diag(F, [0, 0, 0])) == 0
    assert vertex_color(_diag(F, [1, 1, 0])) == 2
    assert vertex_color(_diag(F, [1, 0])) == 1


def test_vertex_color_series_precision():
    F = prime_field(2)
    z = TruncSeries(F, (), 2)  # zero to precision 2: valuation unknown
    one = TruncSeries.one(F, 2)
    with pytest.raises(InsufficientPrecision):
        vertex_color([[one, z], [z, z]])


def test_adjacency_examples():
    F = prime_field(3)
    assert adjacency_type(_diag(F, [1, 0, 0])) == AdjacencyType("adjacent", 1)
    assert adjacency_type(_diag(F, [2, 0])).kind == "far"
    assert adjacency_type(_diag(F, [1, 1, 0])) == AdjacencyType("adjacent", 2)
    assert adjacency_type(_diag(F, [1, 1, 1])).kind == "same"


def _random_poly_matrix(rng, F, d, deg):
    while True:
        M = [[Poly(F, rng.integers(0, F.order, size=deg + 1).tolist()) for _ in range(d)] for _ in range(d)]
        det = det_poly(M)
        if not det.is_zero():
            return M, det


def _random_unimodular(rng, F, d, deg):
    while True:
        U, det = _random_poly_matrix(rng, F, d, deg)
        if det[0] != 0:
            return U


def _matmul(A, B):
    d = len(A)
    F = A[0][0].field
    return [[sum((A[i][k] * B[k][j] for k in range(d)), Poly(F)) for j in range(d)] for i in range(d)]


def test_canonical_form_invariance_and_idempotence():
    rng = np.random.default_rng(17)
    for t in range(1000):
        d = int(rng.integers(2, 5))
        q = int(rng.choice([2, 3]))
        F = prime_field(q)
        g, det = _random_poly_matrix(rng, F, d, 1 if d == 4 else 2)
        L = canonical_class(g)
        # primitive: not every entry is divisible by y
        assert min(L.exps) == 0 or any(e and e[0] != 0 for e in L.entries)
        U = _random_unimodular(rng, F, d, 1)
        assert canonical_class(_matmul(g, U)) == L
        # scaling by y is the same class
        yI = _diag(F, [1] * d)
        assert canonical_class(_matmul(yI, g)) == L
        assert canonical_class(L.polys()) == L
        assert L.color == det.valuation() % d


def test_canonical_examples():
    F = prime_field(2)
    y = Poly(F, (0, 1))
    one = Poly(F, (1,))
    L = canonical_class([[y, Poly(F)], [one, y]])
    assert L.exps == (1, 1) and L.entries == ((1,),)
    assert canonical_class(_diag(F, [1, 1])) == identity_class(F, 2)


@pytest.mark.parametrize("q", [2, 3])
def test_tree_balls(q):
    for r in range(0, 4):
        B = building_ball(2, q, r)
        assert B.n == 1 + (q + 1) * sum(q**j for j in range(r))


def test_ball_examples():
    B = building_ball(2, 2, 1)
    assert B.n == 4 and B.graph.m == 3
    B = building_ball(3, 2, 1)
    assert B.n == 15
    link = B.link(0)
    assert (link.n, link.m) == (14, 21)
    assert building_ball(2, 3, 2).n == 17
    with pytest.raises(CapExceeded):
        building_ball(3, 3, 4, cap=1000)


@pytest.mark.parametrize("d,q,r", [(2, 2, 3), (3, 2, 2), (2, 3, 2), (4, 2, 1), (3, 3, 1)])
def test_ball_invariants(d, q, r):
    B = building_ball(d, q, r)
    full = sum(gaussian_binomial(d, k, q) for k in range(1, d))
    assert B.sphere_sizes()[1] == full
    deg = B.graph.degrees()
    assert (deg[B.distance < r] == full).all()
    # arc colors: tau(y) - tau(x), antisymmetric
    x, y = B.arcs[:, 0], B.arcs[:, 1]
    assert ((B.colors[y] - B.colors[x]) % d == B.arc_colors).all()
    back = {(int(a), int(b)): int(c) for (a, b), c in zip(B.arcs, B.arc_colors)}
    assert all((c + back[(b, a)]) % d == 0 for (a, b), c in back.items())
    if d >= 3 and r >= 1:
        link = B.link(0)
        assert link.n == full
        # flags of P^{d-1}(F_q): pairs (subspace of dim a < dim b)
        flags = sum(
            gaussian_binomial(d, a, q) * gaussian_binomial(d - a, b - a, q) for a in range(1, d) for b in range(a + 1, d)
        )
        assert link.m == flags


def test_hecke_matrices_on_cyclic_group():
    # Z/6 inside PGL_2(F_7) generated by a diagonal matrix, d=2 with Sigma_1 = {s, s^-1}
    from rlab.algebra.projective import group_closure, proj_canonical

    F = prime_field(7)
    s = proj_canonical([[3, 0], [0, 1]], F)
    G = group_closure([s])
    (A,) = hecke_matrices(G, [[s, s.inverse()]])
    assert (A != A.T).nnz == 0
    assert (np.asarray(A.sum(axis=1)).ravel() == 2).all()

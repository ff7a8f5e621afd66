import math

import pytest

from rlab.algebra import legendre, prime_field
from rlab.algebra import linalg
from rlab.algebra.fields import is_prime
from rlab.errors import ParameterError
from rlab.lps import jacobi_solutions, lps_generators, lps_graph, solution_matrix
from rlab.spectra import is_ramanujan_graph


def test_jacobi_p5_exact_set():
    want = {(1, 2, 0, 0), (1, -2, 0, 0), (1, 0, 2, 0), (1, 0, -2, 0), (1, 0, 0, 2), (1, 0, 0, -2)}
    assert set(jacobi_solutions(5)) == want


def test_jacobi_p13_contains_expected():
    sols = jacobi_solutions(13)
    assert len(sols) == 14
    assert (1, 2, 2, 2) in sols and (3, 2, 0, 0) in sols


def test_jacobi_p17_count():
    assert len(jacobi_solutions(17)) == 18


def test_jacobi_count_and_conjugation_closed():
    for p in range(5, 102):
        if not (is_prime(p) and p % 4 == 1):
            continue
        sols = jacobi_solutions(p)
        assert len(sols) == p + 1
        assert sols == sorted(sols)
        s = set(sols)
        assert all((x0, -x1, -x2, -x3) in s for x0, x1, x2, x3 in sols)
        assert all(x0 % 2 == 1 and x0 > 0 and x1 % 2 == 0 and x2 % 2 == 0 and x3 % 2 == 0 for x0, x1, x2, x3 in sols)


@pytest.mark.parametrize("p", [3, 7, 15, 2])
def test_jacobi_rejects_bad_p(p):
    with pytest.raises(ParameterError):
        jacobi_solutions(p)


def test_generators_5_13():
    F = prime_field(13)
    gens = lps_generators(5, 13)
    assert len(gens) == 6 and len(set(gens)) == 6
    for sol in jacobi_solutions(5):
        M = solution_matrix(sol, 13, 5)
        assert linalg.det(F, M) == 5
        conj = solution_matrix((sol[0], -sol[1], -sol[2], -sol[3]), 13, 5)
        assert F.matmul(M, conj).tolist() == [[5, 0], [0, 5]]
    # closed under inverse as a set
    assert {g.inverse() for g in gens} == set(gens)


@pytest.mark.parametrize("p,q", [(5, 5), (5, 7), (5, 3), (13, 5)])
def test_generator_parameter_errors(p, q):
    with pytest.raises(ParameterError):
        lps_generators(p, q)


@pytest.mark.parametrize(
    "p,q,n,bip,group",
    [(5, 13, 2184, True, "PGL"), (13, 17, 2448, False, "PSL"), (5, 17, 4896, True, "PGL")],
)
def test_lps_graph_structure(p, q, n, bip, group):
    G = lps_graph(p, q)
    assert G.n == n
    assert G.graph.regular_degree() == p + 1
    assert G.graph.is_connected()
    assert G.bipartite == bip == (legendre(p, q) == -1)
    assert G.group_type == group


def test_lps_cayley_is_vertex_transitive():
    # right multiplications commute with left translations: the neighbour pattern is the same everywhere
    G = lps_graph(5, 13)
    nb = G.neighbors
    x = 17
    gx = G.group.element(x).array
    F = G.group.field
    from rlab.algebra.projective import canonicalize_batch

    left = G.group.lookup(canonicalize_batch(F, F.matmul(gx[None], G.group.elements)))
    assert (left[nb] == nb[left]).all()


@pytest.mark.parametrize("p,q", [(5, 13), (13, 17), (5, 29), (17, 13)])
def test_lps_graphs_are_ramanujan(p, q):
    G = lps_graph(p, q)
    v = is_ramanujan_graph(G.graph)
    assert v.ramanujan
    assert v.max_nontrivial <= 2 * math.sqrt(p) + 1e-9

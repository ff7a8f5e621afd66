import numpy as np
import pytest

from _util import cone, random_complex, rng_for
from rlab.complex import (
    ChainSystem,
    SimplicialComplex,
    betti_f2,
    boundary_matrix,
    boundary_rank_f2,
    clique_complex,
    coboundary_matrix,
    coboundary_rank_f2,
    full_simplex,
    homology_f2,
    incidence,
    laplacian,
    simplex_boundary,
)
from rlab.errors import CapExceeded, ParameterError
from rlab.graph import complete_graph, cycle_graph


def test_incidence_examples():
    assert incidence((0, 1, 2), (0, 2)) == -1
    assert incidence((0, 1), (2,)) == 0
    assert incidence((3,), ()) == 1
    with pytest.raises(ParameterError):
        incidence((0, 1, 2), (0,))


def test_downward_closure_and_empty_face():
    X = SimplicialComplex([(0, 1, 2)])
    assert X.f_vector() == [1, 3, 3, 1]
    assert X.contains(()) and X.contains((0, 2))
    assert X.face_list(1) == [(0, 1), (0, 2), (1, 2)]


def test_solid_triangle_boundary_column():
    X = full_simplex(3)
    B = boundary_matrix(X, 2).toarray()
    # edges listed (0,1), (0,2), (1,2)
    assert B[:, 0].tolist() == [1, -1, 1]


def test_graph_boundary_is_signed_incidence():
    X = SimplicialComplex.from_graph(cycle_graph(4))
    B = boundary_matrix(X, 1).toarray()
    for col, (a, b) in enumerate(X.face_list(1)):
        assert B[a, col] == -1 and B[b, col] == 1
        assert np.count_nonzero(B[:, col]) == 2


def test_boundary_out_of_range():
    with pytest.raises(ParameterError):
        boundary_matrix(full_simplex(3), 5)


def test_laplacian_examples():
    K4 = SimplicialComplex.from_graph(complete_graph(4))
    w = np.linalg.eigvalsh(laplacian(K4, 0, "up").astype(float))
    assert np.allclose(w, [0, 4, 4, 4])
    P2 = SimplicialComplex([(0, 1)])
    assert laplacian(P2, 0, "up").tolist() == [[1, -1], [-1, 1]]


def test_up_down_share_nonzero_spectra():
    rng = rng_for(3)
    for _ in range(30):
        X = random_complex(rng, 8)
        for i in range(X.dim):
            a = np.linalg.eigvalsh(laplacian(X, i, "up").astype(float))
            b = np.linalg.eigvalsh(laplacian(X, i + 1, "down").astype(float))
            a, b = np.sort(a[a > 1e-9]), np.sort(b[b > 1e-9])
            assert len(a) == len(b) and np.allclose(a, b)


def test_betti_examples():
    hollow = SimplicialComplex([(0, 1), (0, 2), (1, 2)])
    assert (betti_f2(hollow, 0), betti_f2(hollow, 1)) == (1, 1)
    solid = full_simplex(3)
    assert (betti_f2(solid, 0), betti_f2(solid, 1)) == (1, 0)
    assert betti_f2(SimplicialComplex([(0, 1), (2, 3)]), 0) == 2
    assert betti_f2(simplex_boundary(4), 2) == 1
    assert betti_f2(solid, 0, reduced=True) == 0


def test_clique_complex_examples():
    K4 = complete_graph(4)
    assert clique_complex(K4, 2).f_vector() == [1, 4, 6, 4]
    assert clique_complex(cycle_graph(5), 2).dim == 1
    assert clique_complex(K4, 3).f_vector() == [1, 4, 6, 4, 1]
    with pytest.raises(CapExceeded):
        clique_complex(complete_graph(12), 5, cap=100)


def test_chain_identities_random():
    rng = rng_for(11)
    for _ in range(200):
        X = random_complex(rng, 10)
        for mode in ("int", "f2"):
            C = ChainSystem(X, mode)
            assert C.check()
            for i in range(1, X.dim):
                P = (boundary_matrix(X, i, mode) @ boundary_matrix(X, i + 1, mode)).toarray()
                D = (coboundary_matrix(X, i, mode) @ coboundary_matrix(X, i - 1, mode)).toarray()
                if mode == "f2":
                    P, D = P % 2, D % 2
                assert not P.any() and not D.any()


def test_rank_nullity_and_duality_random():
    rng = rng_for(12)
    for _ in range(200):
        X = random_complex(rng, 10)
        for i in range(0, X.dim + 1):
            r = coboundary_rank_f2(X, i)
            kernel = X.count(i) - r
            assert X.count(i) == r + kernel
            # delta_i is the transpose of d_{i+1}
            assert r == boundary_rank_f2(X, i + 1)
            assert betti_f2(X, i) == homology_f2(X, i)


def test_cone_is_acyclic():
    rng = rng_for(13)
    for _ in range(50):
        C = cone(random_complex(rng, 8))
        assert betti_f2(C, 0) == 1
        assert all(betti_f2(C, i) == 0 for i in range(1, C.dim + 1))


def test_skeleton_and_purity():
    X = full_simplex(4)
    assert X.skeleton(1).f_vector() == [1, 4, 6]
    assert X.has_complete_skeleton(2)
    assert not SimplicialComplex([(0, 1, 2), (2, 3)]).is_pure()

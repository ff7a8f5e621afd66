import math

import networkx as nx
import numpy as np
import pytest
import scipy.sparse as sp
import sympy

from rlab.complex import SimplicialComplex, full_simplex
from rlab.errors import CapExceeded, ParameterError, VerificationError
from rlab.graph import Graph, as_graph, complete_graph, cycle_graph, petersen_graph
from rlab.lps import lps_graph
from rlab.spectra import (
    gaussian_binomial,
    girth,
    graph_spectrum,
    is_ramanujan_complex,
    is_ramanujan_graph,
    joint_spectrum,
    mu_values,
    sigma_d_membership,
    spectral_gap,
    sym_eigh,
    sym_eigs,
    trivial_tuples,
)


def test_sym_eigs_examples():
    assert np.allclose(sym_eigs(complete_graph(4).dense_adjacency()), [-1, -1, -1, 3])
    assert np.allclose(sym_eigs(np.zeros((5, 5))), 0)
    assert np.allclose(sym_eigs(cycle_graph(4).dense_adjacency()), [-2, 0, 0, 2])
    with pytest.raises(ParameterError):
        sym_eigs(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sym_eigs_trace_and_residual():
    rng = np.random.default_rng(5)
    for n in (1, 2, 7, 40):
        A = rng.standard_normal((n, n))
        M = A + A.T
        w, V, res = sym_eigh(M)
        assert len(w) == n and np.all(np.diff(w) >= 0)
        assert abs(w.sum() - np.trace(M)) <= 1e-8 * max(1.0, np.abs(M).sum())
        assert res <= 1e-9 * max(1.0, np.linalg.norm(M, 2))


def test_ramanujan_examples():
    v = is_ramanujan_graph(petersen_graph())
    assert v.ramanujan
    assert np.allclose(v.eigenvalues, [-2] * 4 + [1] * 5 + [3])
    assert is_ramanujan_graph(complete_graph(4)).ramanujan


def test_ramanujan_rejects_out_of_scope():
    with pytest.raises(ParameterError):
        is_ramanujan_graph(cycle_graph(6))
    with pytest.raises(ParameterError):
        is_ramanujan_graph(Graph(8, [(a, b) for a in range(4) for b in range(a + 1, 4)] + [(a, b) for a in range(4, 8) for b in range(a + 1, 8)]))
    with pytest.raises(ParameterError):
        is_ramanujan_graph(Graph(4, [(0, 1), (1, 2), (2, 3)]))


def _charpoly_oracle(g: Graph) -> bool:
    """Exact root test from the integer characteristic polynomial."""
    k = g.regular_degree()
    A = sympy.Matrix(g.dense_adjacency().tolist())
    lam = sympy.symbols("lam")
    roots = sympy.Poly(A.charpoly(lam).as_expr(), lam).all_roots()
    bip = g.is_bipartite()
    removed_k = removed_mk = False
    for r in roots:
        if r == k and not removed_k:
            removed_k = True
            continue
        if bip and r == -k and not removed_mk:
            removed_mk = True
            continue
        if r**2 > 4 * (k - 1):
            return False
    return True


def test_ramanujan_matches_charpoly_oracle():
    rng = np.random.default_rng(21)
    checked = 0
    outcomes = set()
    tries = 0
    while checked < 500 and tries < 5000:
        tries += 1
        n = int(rng.integers(4, 9))
        k = int(rng.integers(3, n))
        if n * k % 2:
            continue
        g = as_graph(nx.random_regular_graph(k, n, seed=int(rng.integers(1 << 30))))
        if not g.is_connected():
            continue
        verdict = is_ramanujan_graph(g).ramanujan
        assert verdict == _charpoly_oracle(g)
        outcomes.add(verdict)
        checked += 1
    assert checked == 500


def test_small_bipartite_graphs_match_oracle():
    # K_{3,3} minus a perfect matching is only 2-regular, so K_{3,3} and the cube stand in
    k33 = Graph(6, [(a, 3 + b) for a in range(3) for b in range(3)])
    cube = as_graph(nx.hypercube_graph(3))
    for g in (k33, cube):
        assert is_ramanujan_graph(g).ramanujan == _charpoly_oracle(g)


def test_extremal_mode_agrees_with_full():
    G = lps_graph(5, 13).graph
    full = is_ramanujan_graph(G, mode="full")
    ext = is_ramanujan_graph(G, mode="extremal")
    assert full.ramanujan and ext.ramanujan
    assert abs(full.max_nontrivial - ext.max_nontrivial) < 1e-6


def test_mu_values():
    mu, mu0, mu1 = mu_values(complete_graph(4))
    assert np.isclose(mu1, -1) and np.isclose(mu0, 1) and np.isclose(mu, 1)
    mu, mu0, mu1 = mu_values(cycle_graph(6))
    assert np.isclose(mu, 1) and np.isclose(mu0, 2)
    mu, _, _ = mu_values(lps_graph(5, 13).graph)
    assert mu <= 2 * math.sqrt(5) + 1e-9


def test_graph_spectrum_tags():
    rep = graph_spectrum(petersen_graph())
    assert rep.tags.count("trivial") == 1 and "violating" not in rep.tags
    assert rep.residual <= rep.residual_bound + 1e-12


def test_girth():
    assert girth(petersen_graph()) == 5
    assert girth(cycle_graph(7)) == 7
    assert girth(Graph(3, [(0, 1), (1, 2)])) == math.inf


def test_spectral_gap_examples():
    for n in (3, 5, 6):
        assert np.isclose(spectral_gap(SimplicialComplex.from_graph(complete_graph(n)), 0), n)
    assert np.isclose(spectral_gap(SimplicialComplex([(0, 1), (2, 3)]), 0), 0)
    assert np.isclose(spectral_gap(full_simplex(3), 1), 3)


def test_gaussian_binomial():
    assert gaussian_binomial(3, 1, 2) == 7
    assert gaussian_binomial(4, 2, 2) == 35
    assert all(gaussian_binomial(d, 0, q) == 1 for d in range(1, 5) for q in (2, 3))
    # symmetric and equal to the subspace count
    assert gaussian_binomial(5, 2, 3) == gaussian_binomial(5, 3, 3)
    with pytest.raises(CapExceeded):
        gaussian_binomial(40, 20, 1 << 10)


def test_trivial_tuples():
    for q in (2, 3, 7):
        t = trivial_tuples(2, q)
        assert t == [(complex(q + 1),), (complex(-(q + 1)),)]
    t = trivial_tuples(3, 2)
    xi = np.exp(2j * np.pi / 3)
    assert np.allclose(t[0], (7, 7))
    assert np.allclose(t[1], (7 * xi, 7 * xi**2))


def test_membership_examples():
    for q in (2, 3, 5):
        m = sigma_d_membership([2 * math.sqrt(q)], 2, q)
        assert m.inside and np.allclose(m.roots, [1, 1])
    m = sigma_d_membership([6, 6], 3, 2)
    assert m.inside and np.allclose(m.roots, [1, 1, 1], atol=1e-6)
    m = sigma_d_membership([7, 7], 3, 2)
    assert m.status == "outside"
    assert np.allclose(np.sort(m.roots.real), [0.5, 1, 2])
    assert sigma_d_membership([1 + 2j, 5], 3, 2).status == "asymmetric"


def test_membership_d2_interval_agreement():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        q = int(rng.choice([2, 3, 4, 5, 7, 8, 9, 11, 13]))
        lam = float(rng.uniform(-3 * math.sqrt(q), 3 * math.sqrt(q)))
        if abs(abs(lam) - 2 * math.sqrt(q)) < 1e-6:
            continue
        assert sigma_d_membership([lam], 2, q).inside == (abs(lam) <= 2 * math.sqrt(q))


def test_trivial_tuples_never_inside():
    for d in range(2, 6):
        for q in range(2, 17):
            for t in trivial_tuples(d, q):
                assert not sigma_d_membership(t, d, q).inside


def test_joint_spectrum_d2_reduces_to_eigs():
    A = sp.csr_matrix(petersen_graph().dense_adjacency())
    js = joint_spectrum([A])
    assert np.allclose(np.sort(js.tuples[:, 0].real), sym_eigs(A.toarray()))


def test_joint_spectrum_diagonal_pair():
    D1 = sp.diags([1, 2, 3, 3])
    js = joint_spectrum([D1, D1.T])
    assert np.allclose(sorted(js.tuples[:, 0].real), [1, 2, 3, 3])


def test_joint_spectrum_conjugate_pairs_on_cyclic_shift():
    # A = cyclic shift on Z/5 and its transpose commute; tuples are (w, conj w)
    n = 5
    A = sp.csr_matrix((np.ones(n), (np.arange(n), (np.arange(n) + 1) % n)), shape=(n, n))
    js = joint_spectrum([A, A.T])
    assert np.allclose(js.tuples[:, 0], np.conj(js.tuples[:, 1]), atol=1e-8)
    assert js.residuals.max() <= 1e-8
    assert np.allclose(np.sort_complex(js.tuples[:, 0]), np.sort_complex(np.exp(2j * np.pi * np.arange(n) / n)))


def test_joint_spectrum_rejects_non_commuting():
    A = sp.csr_matrix(np.array([[0, 1], [0, 0]]))
    B = sp.csr_matrix(np.array([[1, 0], [0, 0]]))
    with pytest.raises(VerificationError):
        joint_spectrum([A, B.T @ A])


def test_is_ramanujan_complex_examples():
    assert is_ramanujan_complex(trivial_tuples(3, 2), 3, 2).ramanujan
    v = is_ramanujan_complex([(7.5, 7.5), (6, 6)], 3, 2)
    assert not v.ramanujan and v.offending == [0]
    js = joint_spectrum([lps_graph(5, 13).graph.adjacency()])
    assert is_ramanujan_complex(js.tuples, 2, 5).ramanujan

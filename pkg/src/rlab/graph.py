"""Simple undirected graphs on vertices 0..n-1."""

from __future__ import annotations

from collections import deque

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import ParameterError


class Graph:
    """Simple undirected graph stored as a sorted, duplicate-free edge array."""

    def __init__(self, n: int, edges=()):
        n = int(n)
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        E = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64).reshape(-1, 2)
        if len(E):
            if E.min() < 0 or E.max() >= n:
                raise ParameterError("edge endpoint out of range")
            if np.any(E[:, 0] == E[:, 1]):
                raise ParameterError("self-loops are not allowed")
            E = np.sort(E, axis=1)
            E = np.unique(E, axis=0)
        self.n = n
        self.edges = E
        self._adj = None

    @classmethod
    def from_adjacency(cls, A) -> "Graph":
        A = sp.coo_matrix(A)
        if (A != A.T).nnz:
            raise ParameterError("adjacency matrix must be symmetric")
        mask = A.row < A.col
        return cls(A.shape[0], np.stack([A.row[mask], A.col[mask]], axis=1))

    @classmethod
    def from_neighbors(cls, nbrs: np.ndarray) -> "Graph":
        """Graph from an (n, k) array of neighbour lists (as for a Cayley graph)."""
        n, k = nbrs.shape
        src = np.repeat(np.arange(n), k)
        return cls(n, np.stack([src, nbrs.ravel()], axis=1))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def adjacency(self) -> sp.csr_matrix:
        if self._adj is None:
            r, c = self.edges[:, 0], self.edges[:, 1]
            data = np.ones(2 * len(r), dtype=np.int64)
            self._adj = sp.csr_matrix((data, (np.r_[r, c], np.r_[c, r])), shape=(self.n, self.n))
        return self._adj

    def dense_adjacency(self) -> np.ndarray:
        return self.adjacency().toarray()

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def regular_degree(self) -> int | None:
        deg = self.degrees()
        if self.n == 0 or np.any(deg != deg[0]):
            return None
        return int(deg[0])

    def neighbors(self, v: int) -> np.ndarray:
        A = self.adjacency()
        return A.indices[A.indptr[v] : A.indptr[v + 1]]

    def n_components(self) -> int:
        if self.n == 0:
            return 0
        return int(connected_components(self.adjacency(), directed=False)[0])

    def is_connected(self) -> bool:
        return self.n_components() == 1

    def two_coloring(self) -> np.ndarray | None:
        """BFS 2-colouring, or None when an odd cycle exists."""
        A = self.adjacency()
        color = np.full(self.n, -1, dtype=np.int64)
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in A.indices[A.indptr[v] : A.indptr[v + 1]]:
                    if color[w] < 0:
                        color[w] = 1 - color[v]
                        queue.append(w)
                    elif color[w] == color[v]:
                        return None
        return color

    def is_bipartite(self) -> bool:
        return self.two_coloring() is not None

    def induced_cut(self, mask) -> int:
        """Number of edges with exactly one endpoint in the boolean vertex mask."""
        mask = np.asarray(mask, dtype=bool)
        return int(np.count_nonzero(mask[self.edges[:, 0]] != mask[self.edges[:, 1]]))


def as_graph(g) -> Graph:
    """Accept a Graph, a square adjacency matrix, or anything with ``nodes``/``edges`` (networkx)."""
    if isinstance(g, Graph):
        return g
    if hasattr(g, "nodes") and hasattr(g, "edges"):
        nodes = sorted(g.nodes())
        pos = {v: i for i, v in enumerate(nodes)}
        return Graph(len(nodes), [(pos[a], pos[b]) for a, b in g.edges()])
    A = np.asarray(g.toarray() if sp.issparse(g) else g)
    if A.ndim == 2 and A.shape[0] == A.shape[1]:
        return Graph.from_adjacency(A)
    raise ParameterError("cannot interpret input as a graph")


def complete_graph(n: int) -> Graph:
    iu = np.triu_indices(n, 1)
    return Graph(n, np.stack(iu, axis=1))


def cycle_graph(n: int) -> Graph:
    v = np.arange(n)
    return Graph(n, np.stack([v, (v + 1) % n], axis=1))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)

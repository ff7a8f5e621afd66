"""Projective matrices over finite fields and BFS enumeration of the groups they generate."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ..errors import CapExceeded, ParameterError, SingularMatrixError
from . import linalg
from .fields import FiniteField

DEFAULT_GROUP_CAP = 2_000_000


@dataclass(frozen=True)
class ProjMatrix:
    """A scalar class in PGL_d(F), stored in canonical form.

    Canonical form: the first nonzero entry in row-major order equals 1.
    """

    field: FiniteField
    entries: tuple

    @property
    def dim(self) -> int:
        return int(round(len(self.entries) ** 0.5))

    @property
    def array(self) -> np.ndarray:
        d = self.dim
        return np.array(self.entries, dtype=np.int64).reshape(d, d)

    def __matmul__(self, other: "ProjMatrix") -> "ProjMatrix":
        return proj_canonical(self.field.matmul(self.array, other.array), self.field)

    def inverse(self) -> "ProjMatrix":
        return proj_canonical(linalg.inv(self.field, self.array), self.field)

    def is_identity(self) -> bool:
        return np.array_equal(self.array, np.eye(self.dim, dtype=np.int64))

    def __repr__(self) -> str:
        return f"ProjMatrix({self.array.tolist()})"


def canonicalize_batch(F: FiniteField, mats: np.ndarray) -> np.ndarray:
    """Scale each matrix in a (N, d, d) batch so its first nonzero entry is 1."""
    N = mats.shape[0]
    flat = mats.reshape(N, -1)
    nz = flat != 0
    if not np.all(nz.any(axis=1)):
        raise SingularMatrixError("zero matrix has no projective class")
    first = np.argmax(nz, axis=1)
    lead = flat[np.arange(N), first]
    scale = F.vinv(lead)
    return F.vmul(flat, scale[:, None]).reshape(mats.shape)


def proj_canonical(M, F: FiniteField) -> ProjMatrix:
    """Canonical projective representative of an invertible matrix over ``F``."""
    A = np.asarray(M, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError("expected a square matrix")
    if linalg.det(F, A) == 0:
        raise SingularMatrixError("singular matrix has no class in PGL")
    C = canonicalize_batch(F, A[None])[0]
    return ProjMatrix(F, tuple(int(x) for x in C.ravel()))


class _Keyer:
    """Injective int64 encoding of canonical matrices (base-|F| digits)."""

    def __init__(self, F: FiniteField, d: int):
        if F.order ** (d * d) >= 2**62:
            raise ParameterError("matrix group too large to key with int64")
        self.weights = (F.order ** np.arange(d * d, dtype=np.int64))[::-1].copy()

    def __call__(self, mats: np.ndarray) -> np.ndarray:
        return mats.reshape(mats.shape[0], -1) @ self.weights


@dataclass
class MatrixGroup:
    """A finite subgroup of PGL_d(F) listed in deterministic BFS order."""

    field: FiniteField
    dim: int
    elements: np.ndarray  # (N, d, d) canonical representatives
    keys: np.ndarray
    generators: list = dc_field(default_factory=list)
    _sorted_keys: np.ndarray | None = None
    _sort_idx: np.ndarray | None = None

    def __len__(self) -> int:
        return self.elements.shape[0]

    @property
    def order(self) -> int:
        return len(self)

    def _ensure_index(self):
        if self._sorted_keys is None:
            self._sort_idx = np.argsort(self.keys, kind="stable")
            self._sorted_keys = self.keys[self._sort_idx]

    def lookup(self, mats: np.ndarray) -> np.ndarray:
        """Indices of the (canonical) matrices; raises if any is not in the group."""
        self._ensure_index()
        k = _Keyer(self.field, self.dim)(mats)
        pos = np.searchsorted(self._sorted_keys, k)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if not np.array_equal(self._sorted_keys[pos], k):
            raise ParameterError("element not in group")
        return self._sort_idx[pos]

    def index_of(self, g: ProjMatrix) -> int:
        return int(self.lookup(g.array[None])[0])

    def element(self, i: int) -> ProjMatrix:
        return ProjMatrix(self.field, tuple(int(x) for x in self.elements[i].ravel()))

    def right_multiply(self, g: ProjMatrix) -> np.ndarray:
        """Permutation ``idx`` with ``elements[i] @ g == elements[idx[i]]``."""
        prods = canonicalize_batch(self.field, self.field.matmul(self.elements, g.array))
        return self.lookup(prods)

    def determinants(self) -> np.ndarray:
        return np.array([linalg.det(self.field, m) for m in self.elements], dtype=np.int64)


def group_closure(generators, cap: int = DEFAULT_GROUP_CAP) -> MatrixGroup:
    """Enumerate the group generated by ``generators`` by breadth-first search.

    Each BFS level is ordered by canonical key, so the element order depends
    only on the generating set.
    """
    gens = list(generators)
    if not gens:
        raise ParameterError("need at least one generator")
    F = gens[0].field
    d = gens[0].dim
    if any(g.field != F or g.dim != d for g in gens):
        raise ParameterError("generators must share field and dimension")
    keyer = _Keyer(F, d)
    ident = np.eye(d, dtype=np.int64)[None]
    levels = [ident]
    level_keys = [keyer(ident)]
    seen = np.sort(level_keys[0])
    frontier = ident
    total = 1
    gen_arrays = [g.array for g in gens]
    while frontier.shape[0]:
        cands = np.concatenate(
            [canonicalize_batch(F, F.matmul(frontier, G)) for G in gen_arrays], axis=0
        )
        ck = keyer(cands)
        uk, first = np.unique(ck, return_index=True)
        fresh = ~np.isin(uk, seen, assume_unique=True)
        uk, first = uk[fresh], first[fresh]
        total += len(uk)
        if total > cap:
            raise CapExceeded(f"group closure exceeded cap {cap}")
        frontier = cands[first]
        if len(uk):
            levels.append(frontier)
            level_keys.append(uk)
            seen = np.union1d(seen, uk)
    return MatrixGroup(
        field=F,
        dim=d,
        elements=np.concatenate(levels, axis=0),
        keys=np.concatenate(level_keys),
        generators=gens,
    )


def pgl_order(d: int, q: int) -> int:
    n = 1
    for i in range(d):
        n *= q**d - q**i
    return n // (q - 1)


def psl_order(d: int, q: int) -> int:
    from math import gcd

    return pgl_order(d, q) // gcd(d, q - 1)

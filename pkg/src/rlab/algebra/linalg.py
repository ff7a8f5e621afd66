"""Dense linear algebra over a FiniteField on small integer-coded numpy matrices."""

from __future__ import annotations

import numpy as np

from ..errors import SingularMatrixError
from .fields import FiniteField


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _row_reduce(F: FiniteField, A: np.ndarray):
    """Return (rref, pivot columns, determinant factor sign-tracked) for square or rectangular A."""
    M = np.array(A, dtype=np.int64, copy=True)
    rows, cols = M.shape
    pivots = []
    det = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            det = 0
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
            det = F.neg(det)
        pv = int(M[r, c])
        det = F.mul(det, pv)
        M[r] = F.vmul(M[r], F.inv(pv))
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = F.vsub(M[i], F.vmul(M[r], int(M[i, c])))
        pivots.append(c)
        r += 1
    if r < rows:
        det = 0
    return M, pivots, det


def det(F: FiniteField, A) -> int:
    A = np.asarray(A, dtype=np.int64)
    _, _, d = _row_reduce(F, A)
    return int(d)


def rank(F: FiniteField, A) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return len(_row_reduce(F, A)[1])


def rref(F: FiniteField, A):
    M, piv, _ = _row_reduce(F, np.asarray(A, dtype=np.int64))
    return M, piv


def inv(F: FiniteField, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    M, piv, d = _row_reduce(F, np.hstack([A, identity(n)]))
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is not invertible")
    return M[:, n:]


def matmul(F: FiniteField, *mats) -> np.ndarray:
    out = np.asarray(mats[0], dtype=np.int64)
    for B in mats[1:]:
        out = F.matmul(out, B)
    return out


def scalar(F: FiniteField, c: int, n: int) -> np.ndarray:
    return identity(n) * c

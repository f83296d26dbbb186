"""Reduced row and column echelon forms."""

from __future__ import annotations

import numpy as np

from ._validation import check_matrix
from .exceptions import NotFullColumnRankError
from .linalg import DEFAULT_TOL, ToleranceConfig, rank


def rref(M, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Gauss-Jordan elimination with partial pivoting.

    Entries at or below ``zero_rel_tol`` times the largest magnitude of their
    column in the input are treated as zero.  Leading entries are
    exactly 1, pivot columns are exactly zero elsewhere, zero rows come last.
    """
    tol = DEFAULT_TOL if tol is None else tol
    R = check_matrix(M).copy()
    m, n = R.shape
    col_scale = np.abs(R).max(axis=0)
    r = 0
    for c in range(n):
        if r == m:
            break
        col = np.abs(R[r:, c])
        p = int(np.argmax(col))
        # Compare against the input column so that a column eliminated down
        # to rounding noise is not mistaken for a pivot.
        if col[p] <= tol.zero_rel_tol * col_scale[c]:
            R[r:, c] = 0
            continue
        p += r
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        R[r, c] = 1
        others = np.arange(m) != r
        R[others] -= np.outer(R[others, c], R[r])
        R[others, c] = 0
        r += 1
    R[r:] = 0
    R[np.abs(R) <= tol.zero_rel_tol * col_scale] = 0
    R += 0.0  # drop negative zeros
    return R


def rcef(A, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Reduced column echelon form ``rref(A.T).T`` of a full-column-rank ``A``."""
    tol = DEFAULT_TOL if tol is None else tol
    A = check_matrix(A, name="A")
    if A.shape[1] > A.shape[0] or rank(A, tol) < A.shape[1]:
        raise NotFullColumnRankError(f"rank(A) < {A.shape[1]}")
    return rref(A.T, tol).T.copy()

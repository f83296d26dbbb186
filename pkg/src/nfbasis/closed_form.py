"""Closed-form normal forms for the orthogonal complement of one or two vectors."""

from __future__ import annotations

import itertools

import numpy as np

from ._validation import check_vector
from .exceptions import InvalidInputError
from .linalg import DEFAULT_TOL, ToleranceConfig, nullspace_basis
from .normalform import normal_form_standard


def orthogonal_complement_nf(a, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Normal-form basis of ``{v : v . a = 0}`` (unconjugated product).

    With every ``a_j`` nonzero the answer is ``v_i = e_1 - (a_1 / a_{i+1}) e_{i+1}``;
    otherwise the general algorithm is run on a kernel basis.
    """
    tol = DEFAULT_TOL if tol is None else tol
    a = check_vector(a, name="a")
    m = a.size
    if m < 3:
        raise InvalidInputError("orthogonal_complement_nf needs dimension >= 3")
    if not np.any(a):
        raise InvalidInputError("a must be nonzero")
    if tol.zero_mask(a).any():
        return normal_form_standard(nullspace_basis(a[np.newaxis, :], tol), tol).columns
    V = np.zeros((m, m - 1), dtype=a.dtype)
    V[0, :] = 1
    V[np.arange(1, m), np.arange(m - 1)] = -a[0] / a[1:]
    return V


def _singular_2x2(blocks: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    sv = np.linalg.svd(blocks, compute_uv=False)
    return sv[:, 1] <= tol.rank_threshold(1.0, (2, 2)) * sv[:, 0]


def two_vector_complement_nf(a1, a2, tol: ToleranceConfig | None = None):
    """Closed-form normal-form basis of the complement of ``a1`` and ``a2``.

    Column ``i`` is ``e_1 + v e_2 + v' e_{i+2}`` with ``(v, v')`` solving the
    two orthogonality conditions.  Returns ``None`` when the closed form does
    not give the normal form; callers then fall back to the general
    algorithm.  The closed form is valid exactly when no vector of the
    complement is supported on two coordinates, i.e. when every 2x2 minor of
    ``[a1; a2]`` is invertible.
    """
    tol = DEFAULT_TOL if tol is None else tol
    a1 = check_vector(a1, name="a1")
    a2 = check_vector(a2, name="a2", size=a1.size)
    m = a1.size
    if m < 4:
        raise InvalidInputError("two_vector_complement_nf needs dimension >= 4")
    C = np.vstack([a1, a2])
    sv = np.linalg.svd(C, compute_uv=False)
    if sv[1] <= tol.rank_threshold(sv[0], C.shape):
        raise InvalidInputError("a1 and a2 must be linearly independent")

    pairs = np.array(list(itertools.combinations(range(m), 2)))
    minors = np.moveaxis(C[:, pairs], 1, 0)  # (P, 2, 2), columns k and l
    if _singular_2x2(minors, tol).any():
        return None

    V = np.zeros((m, m - 2), dtype=C.dtype)
    V[0, :] = 1
    for c in range(2, m):
        v, vp = -np.linalg.solve(C[:, [1, c]], C[:, 0])
        V[1, c - 2] = v
        V[c, c - 2] = vp
    return V

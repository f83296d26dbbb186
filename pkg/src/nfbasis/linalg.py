"""Dense linear-algebra primitives with explicit tolerances.

Everything here works for real and complex matrices.  Kernels are taken with
respect to the plain matrix product, ``M @ v == 0``; no complex conjugation is
applied to ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._validation import check_matrix, check_vector
from .exceptions import InvalidInputError


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used throughout the package.

    rank_rel_tol
        A singular value counts as nonzero when it exceeds
        ``rank_rel_tol * max(m, n) * scale`` where ``scale`` is the largest
        singular value of the matrix (or of the parent matrix for row
        selections).
    zero_rel_tol
        An entry of a vector is classified zero when its magnitude is at most
        ``zero_rel_tol`` times the largest magnitude in that vector.
    indep_rel_tol
        A vector is linearly independent of an accepted set when its residual
        after projection exceeds ``indep_rel_tol`` times its norm.
    """

    rank_rel_tol: float = 1e-10
    zero_rel_tol: float = 1e-9
    indep_rel_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel_tol", "zero_rel_tol", "indep_rel_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise InvalidInputError(f"{name} must lie in (0, 1), got {value!r}")

    def rank_threshold(self, scale: float, shape: tuple[int, int]) -> float:
        return self.rank_rel_tol * max(shape) * scale

    def zero_mask(self, v: np.ndarray) -> np.ndarray:
        """Boolean mask of entries classified zero (works on stacked rows)."""
        mag = np.abs(v)
        peak = mag.max(axis=-1, keepdims=True)
        return mag <= self.zero_rel_tol * peak


DEFAULT_TOL = ToleranceConfig()


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def singular_values(M) -> np.ndarray:
    M = check_matrix(M)
    return np.linalg.svd(M, compute_uv=False)


def rank(M, tol: ToleranceConfig | None = None, *, scale: float | None = None) -> int:
    """Numerical rank of ``M``.

    ``scale`` replaces the largest singular value of ``M`` in the threshold;
    pass the largest singular value of a parent matrix when ``M`` is a
    selection of its rows.
    """
    tol = _tol(tol)
    M = check_matrix(M)
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0:
        return 0
    ref = s[0] if scale is None else scale
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_threshold(ref, M.shape)))


def nullspace_basis(M, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Orthonormal basis of ``{v : M @ v = 0}`` as columns.

    Returns an ``(n, 0)`` array when the kernel is trivial.
    """
    tol = _tol(tol)
    M = check_matrix(M)
    n = M.shape[1]
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s > tol.rank_threshold(s[0], M.shape)))
    if r == n:
        return np.zeros((n, 0), dtype=M.dtype)
    return vh[r:].conj().T.copy()


def hyperplane_normal(rows, tol: ToleranceConfig | None = None, *, scale: float | None = None):
    """Normal vector ``s`` with ``rows @ s == 0`` when the rows span exactly
    ``n - 1`` dimensions, else ``None``.

    The scale of ``s`` is arbitrary (unit 2-norm in practice).
    """
    tol = _tol(tol)
    rows = check_matrix(rows, name="rows")
    n = rows.shape[1]
    _, s, vh = np.linalg.svd(rows, full_matrices=True)
    ref = (s[0] if s.size else 0.0) if scale is None else scale
    if ref == 0.0:
        return None
    r = int(np.count_nonzero(s > tol.rank_threshold(ref, rows.shape)))
    if r != n - 1:
        return None
    return vh[-1].conj().copy()


class IndependenceTracker:
    """Incrementally accept vectors that are linearly independent of the ones
    accepted so far.

    The accepted span is kept as an orthonormal set built by modified
    Gram-Schmidt with one re-orthogonalization pass.
    """

    def __init__(self, ambient_dim: int, tol: ToleranceConfig | None = None):
        if ambient_dim < 1:
            raise InvalidInputError("ambient_dim must be >= 1")
        self.ambient_dim = int(ambient_dim)
        self.tol = _tol(tol)
        self.accepted: list[np.ndarray] = []
        self._q: list[np.ndarray] = []

    def __len__(self):
        return len(self.accepted)

    @property
    def full(self) -> bool:
        return len(self.accepted) == self.ambient_dim

    def residual(self, v: np.ndarray) -> np.ndarray:
        r = np.array(v, dtype=np.result_type(v, np.float64), copy=True)
        for _ in range(2):
            for q in self._q:
                r = r - np.vdot(q, r) * q
        return r

    def extend(self, v, tol: ToleranceConfig | None = None) -> bool:
        tol = self.tol if tol is None else tol
        v = check_vector(v, size=self.ambient_dim)
        if self.full:
            return False
        norm = np.linalg.norm(v)
        if norm == 0.0:
            return False
        r = self.residual(v)
        rnorm = np.linalg.norm(r)
        if rnorm <= tol.indep_rel_tol * norm:
            return False
        self._q.append(r / rnorm)
        self.accepted.append(v)
        return True


def independent_extend(tracker: IndependenceTracker, v, tol: ToleranceConfig | None = None) -> bool:
    return tracker.extend(v, tol)


# -- exact rational elimination (test oracle) ---------------------------------

def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (complex, np.complexfloating)):
        raise InvalidInputError("rational elimination supports real entries only")
    if isinstance(x, (np.floating, float)):
        return Fraction(float(x))
    if isinstance(x, (np.integer, int)):
        return Fraction(int(x))
    return Fraction(x)


def rational_rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Exact reduced row echelon form over the rationals.

    Returns ``(R, pivots)``.  Floats are converted exactly (binary value).
    """
    R = [[_to_fraction(x) for x in row] for row in rows]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        lead = R[r][c]
        R[r] = [x / lead for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rational_nullspace(rows) -> list[list[Fraction]]:
    """Exact kernel basis of a rational matrix, one vector per free column."""
    R, pivots = rational_rref(rows)
    n = len(R[0]) if R else 0
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis

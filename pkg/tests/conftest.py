import functools
import math

import numpy as np
import pytest

# Basis of {v : sum(v) = 0} returned by Octave's null(), printed to 5 digits.
OCTAVE_BASIS_PRINTED = np.array([
    [-0.44721, -0.44721, -0.44721, -0.44721],
    [0.86180, -0.13820, -0.13820, -0.13820],
    [-0.13820, 0.86180, -0.13820, -0.13820],
    [-0.13820, -0.13820, 0.86180, -0.13820],
    [-0.13820, -0.13820, -0.13820, 0.86180],
])

# Kernel basis of the oscillator dimension matrix as printed by NumPy (8 digits).
KER_B_PRINTED = np.array([
    [-0.35314643, -0.76783678],
    [0.64522571, -0.11070323],
    [-0.64522571, 0.11070323],
    [0.14603964, -0.43927000],
    [-0.14603964, 0.43927000],
])

# Rows: M, L, T.  Columns: t, x0, xdot0, k, m.
OSCILLATOR_B = np.array([
    [0, 0, 0, 1, 1],
    [0, 1, 1, 0, 0],
    [1, 0, -1, -2, 0],
], dtype=float)

OSCILLATOR_CSV = ",t,x0,xdot0,k,m\nM,0,0,0,1,1\nL,0,1,1,0,0\nT,1,0,-1,-2,0\n"


def octave_basis():
    """Full-precision version of the printed Octave basis.

    Octave's null() of a 1x5 row is the Householder reflector built from
    ``a / |a|``: first row ``-1/sqrt(5)``, remaining block
    ``I - (1/5) / (1 + 1/sqrt(5))``.
    """
    m = 5
    c = 1 / math.sqrt(m)
    B = np.empty((m, m - 1))
    B[0, :] = -c
    B[1:, :] = np.eye(m - 1) - (1 / m) / (1 + c)
    return B


def random_matrix(rng, m, n, complex_=False):
    A = rng.standard_normal((m, n))
    if complex_:
        A = A + 1j * rng.standard_normal((m, n))
    return A


def random_invertible(rng, n, complex_=False):
    while True:
        G = random_matrix(rng, n, n, complex_)
        if np.linalg.cond(G) < 1e3:
            return G


def random_basis_with_structure(rng, m, n, complex_=False):
    """Random full-column-rank matrix that sometimes has duplicated or zero rows."""
    while True:
        A = random_matrix(rng, m, n, complex_)
        kind = rng.integers(3)
        if kind == 1 and m > n + 1:
            i, j = rng.choice(m, 2, replace=False)
            A[j] = A[i]
        elif kind == 2 and m > n + 1:
            A[rng.integers(m)] = 0
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return A


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def cached_symmetries(m1=0.7, m2=0.3, alpha=0.5, nsamples=100, seed=0):
    """find_symmetries is the slow step of the suite; share results across modules."""
    return _symmetries(float(m1), float(m2), float(alpha), int(nsamples), int(seed))


@functools.lru_cache(maxsize=None)
def _symmetries(m1, m2, alpha, nsamples, seed):
    from nfbasis.noether import TwoBodyParams, find_symmetries

    return find_symmetries(TwoBodyParams(m1, m2, alpha), nsamples, seed)

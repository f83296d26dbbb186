"""Numerical symmetry detection for the two-body problem with a 1/r potential.

The Lagrangian is ``L = m1 |v1|^2 / 2 + m2 |v2|^2 / 2 + alpha / |x1 - x2|``.
A linear infinitesimal transformation ``x -> x + eps (a + B x)`` is a symmetry
when ``dL/dx . (a + B x) + dL/dv . (B v) = 0`` for every state.  This is
linear in the 42 parameters ``(a, vec(B))`` (``vec`` row-major), so the
symmetries form the common kernel of the rows ``dl_row(state)`` over sampled
states.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .exceptions import CloseApproachError, InvalidInputError, SingularConfigurationError
from .kernels import common_kernel
from .linalg import ToleranceConfig
from .normalform import NormalFormResult, normal_form

P = 6  # coordinates: x1 (3) followed by x2 (3)
ROW_LEN = P + P * P
EXPECTED_KERNEL_DIM = 9
MIN_SEPARATION = 1e-6


class KernelDimensionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TwoBodyParams:
    m1: float = 0.7
    m2: float = 0.3
    alpha: float = 0.5

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise InvalidInputError("masses must be positive")
        if not np.isfinite([self.m1, self.m2, self.alpha]).all():
            raise InvalidInputError("parameters must be finite")

    @property
    def total_mass(self):
        return self.m1 + self.m2

    @property
    def reduced_mass(self):
        return self.m1 * self.m2 / self.total_mass

    @property
    def beta(self) -> float:
        """Mass ratio ``m2 / (m1 - m2)`` in the mixed generators."""
        if self.m1 == self.m2:
            raise InvalidInputError("beta is undefined for equal masses")
        return self.m2 / (self.m1 - self.m2)


@dataclass
class PhaseState:
    x1: np.ndarray
    x2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        for name in ("x1", "x2", "v1", "v2"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(3)
            setattr(self, name, arr)
        if np.array_equal(self.x1, self.x2):
            raise SingularConfigurationError("x1 == x2: the 1/r potential is singular")

    @property
    def x(self) -> np.ndarray:
        return np.concatenate([self.x1, self.x2])

    @property
    def v(self) -> np.ndarray:
        return np.concatenate([self.v1, self.v2])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x1, self.x2, self.v1, self.v2])

    @classmethod
    def from_vector(cls, y) -> "PhaseState":
        y = np.asarray(y, dtype=float)
        return cls(y[0:3], y[3:6], y[6:9], y[9:12])


@dataclass
class Generator:
    a: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float).reshape(P)
        self.B = np.asarray(self.B, dtype=float).reshape(P, P)

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.a, self.B.ravel()])

    @classmethod
    def from_vector(cls, vec) -> "Generator":
        vec = np.real_if_close(np.asarray(vec)).astype(float)
        if vec.shape != (ROW_LEN,):
            raise InvalidInputError(f"generator vector must have length {ROW_LEN}")
        return cls(vec[:P], vec[P:].reshape(P, P))


# -- reference generators -----------------------------------------------------

T1 = np.array([[0, 0, 0], [0, 0, 1], [0, -1, 0]], dtype=float)
T2 = np.array([[0, 0, 1], [0, 0, 0], [-1, 0, 0]], dtype=float)
T3 = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], dtype=float)
ROTATIONS = (T3, T2, T1)


def _blocks(tl, tr, bl, br):
    return np.block([[tl, tr], [bl, br]])


def reference_generators(params: TwoBodyParams) -> list:
    """The nine symmetry generators in normal-form order."""
    zero3 = np.zeros((3, 3))
    gens = []
    for k in range(3):
        a = np.zeros(P)
        a[k] = a[k + 3] = 1
        gens.append(Generator(a, np.zeros((P, P))))
    if params.m1 != params.m2:
        beta = params.beta
        gens += [Generator(np.zeros(P), _blocks(T, zero3, zero3, T)) for T in ROTATIONS]
        gens += [Generator(np.zeros(P), _blocks(T, beta * T, (1 + beta) * T, zero3)) for T in ROTATIONS]
    else:
        swap = {id(T): Generator(np.zeros(P), _blocks(zero3, T, T, zero3)) for T in ROTATIONS}
        diag = {id(T): Generator(np.zeros(P), _blocks(T, zero3, zero3, T)) for T in ROTATIONS}
        gens += [swap[id(T3)], diag[id(T3)], swap[id(T2)], swap[id(T1)], diag[id(T2)], diag[id(T1)]]
    return gens


# -- rows and symmetry checks -------------------------------------------------

def _gradients(params: TwoBodyParams, x: np.ndarray, v: np.ndarray):
    r = x[..., 0:3] - x[..., 3:6]
    dist = np.linalg.norm(r, axis=-1, keepdims=True)
    if np.any(dist == 0.0):
        raise SingularConfigurationError("x1 == x2: the 1/r potential is singular")
    force = params.alpha * r / dist**3
    dLdx = np.concatenate([-force, force], axis=-1)
    dLdv = np.concatenate([params.m1 * v[..., 0:3], params.m2 * v[..., 3:6]], axis=-1)
    return dLdx, dLdv


def dl_rows(params: TwoBodyParams, x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Rows for stacked positions ``x`` and velocities ``v`` of shape (N, 6)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    dLdx, dLdv = _gradients(params, x, v)
    quad = dLdx[:, :, None] * x[:, None, :] + dLdv[:, :, None] * v[:, None, :]
    return np.concatenate([dLdx, quad.reshape(x.shape[0], P * P)], axis=1)


def dl_row(params: TwoBodyParams, state: PhaseState) -> np.ndarray:
    return dl_rows(params, state.x, state.v)[0]


def sample_states(nsamples: int, seed: int):
    """Positions and velocities uniform in the unit cube, shape (N, 6) each."""
    rng = np.random.default_rng(seed)
    return rng.random((nsamples, P)), rng.random((nsamples, P))


def find_symmetries(
    params: TwoBodyParams | None = None,
    nsamples: int = 100,
    seed: int = 0,
    tol: ToleranceConfig | None = None,
    *,
    algorithm: str = "topdown",
) -> NormalFormResult:
    params = TwoBodyParams() if params is None else params
    if nsamples < 1:
        raise InvalidInputError("nsamples must be positive")
    x, v = sample_states(nsamples, seed)
    K = common_kernel([dl_rows(params, x, v)], tol)
    if K.shape[1] != EXPECTED_KERNEL_DIM:
        warnings.warn(
            f"common kernel has dimension {K.shape[1]}, expected {EXPECTED_KERNEL_DIM}"
            f" (nsamples={nsamples}; use at least {ROW_LEN})",
            KernelDimensionWarning,
            stacklevel=2,
        )
    if K.shape[1] == 0:
        raise InvalidInputError("no symmetries found")
    return normal_form(K.real if np.isrealobj(K) else K, tol, algorithm=algorithm, allow_n1=True)


def generators(result: NormalFormResult) -> list:
    return [Generator.from_vector(col) for col in result.columns.T]


def estimate_beta(result: NormalFormResult) -> np.ndarray:
    """Read ``beta`` off the three mixed generators (columns 7 to 9)."""
    gens = generators(result)
    if len(gens) != EXPECTED_KERNEL_DIM:
        raise InvalidInputError("expected nine generators")
    out = []
    for gen, T in zip(gens[6:], ROTATIONS):
        i, j = np.argwhere(T == 1)[0]
        out.append(gen.B[i, 3 + j] / gen.B[i, j])
    return np.array(out)


def verify_symmetry(params: TwoBodyParams, gen: Generator, states) -> float:
    """Largest ``|dl_row . (a, vec(B))|`` relative to the row norm."""
    if isinstance(states, PhaseState):
        states = [states]
    x = np.array([s.x for s in states])
    v = np.array([s.v for s in states])
    rows = dl_rows(params, x, v)
    res = np.abs(rows @ gen.flatten()) / np.linalg.norm(rows, axis=1)
    return float(res.max()) if res.size else 0.0


def conserved_value(params: TwoBodyParams, gen: Generator, state: PhaseState) -> float:
    """Noether charge ``dL/dv . (a + B x)``."""
    _, dLdv = _gradients(params, state.x[None], state.v[None])
    return float(dLdv[0] @ (gen.a + gen.B @ state.x))


# -- dynamics -----------------------------------------------------------------

def _rhs(params: TwoBodyParams, y: np.ndarray) -> np.ndarray:
    r = y[0:3] - y[3:6]
    dist = np.linalg.norm(r)
    if dist < MIN_SEPARATION:
        raise CloseApproachError(f"bodies approached to {dist:.3e}")
    force = params.alpha * r / dist**3
    return np.concatenate([y[6:9], y[9:12], -force / params.m1, force / params.m2])


def integrate_orbit(params: TwoBodyParams, state0: PhaseState, dt: float, steps: int) -> np.ndarray:
    """Fixed-step RK4; returns the states as rows of shape (steps + 1, 12)."""
    if not dt > 0:
        raise InvalidInputError("dt must be positive")
    if steps < 0:
        raise InvalidInputError("steps must be non-negative")
    y = state0.as_vector()
    out = np.empty((steps + 1, 12))
    out[0] = y
    for k in range(steps):
        k1 = _rhs(params, y)
        k2 = _rhs(params, y + 0.5 * dt * k1)
        k3 = _rhs(params, y + 0.5 * dt * k2)
        k4 = _rhs(params, y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = y
    return out


def circular_orbit_state(params: TwoBodyParams, radius: float = 1.0) -> tuple:
    """Initial state of a circular orbit with the centre of mass at rest at
    the origin; also returns the period."""
    if params.alpha <= 0:
        raise InvalidInputError("circular orbits need an attractive potential (alpha > 0)")
    speed = np.sqrt(params.alpha / (params.reduced_mass * radius))
    M = params.total_mass
    r = np.array([radius, 0.0, 0.0])
    w = np.array([0.0, speed, 0.0])
    state = PhaseState(params.m2 / M * r, -params.m1 / M * r, params.m2 / M * w, -params.m1 / M * w)
    return state, 2 * np.pi * radius / speed


def transformation_orbit(gen: Generator, x0, lambdas) -> np.ndarray:
    """Points ``exp(lam * G) x0`` of the finite affine flow of ``x' = a + B x``."""
    x0 = np.asarray(x0, dtype=float).reshape(P)
    G = np.zeros((P + 1, P + 1))
    G[:P, :P] = gen.B
    G[:P, P] = gen.a
    y0 = np.append(x0, 1.0)
    return np.array([(expm(lam * G) @ y0)[:P] for lam in np.atleast_1d(lambdas)])

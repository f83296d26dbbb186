"""Kernels, common kernels and dimensionless groups (Buckingham pi)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import check_matrix
from .exceptions import InvalidInputError
from .linalg import DEFAULT_TOL, ToleranceConfig, nullspace_basis
from .normalform import normal_form

SNAP_MAX_DEN = 64
SNAP_TOL = 1e-6


def common_kernel(blocks, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Basis of the intersection of the kernels of ``blocks`` (stacked SVD)."""
    blocks = [check_matrix(b, name=f"block {i}") for i, b in enumerate(blocks)]
    if not blocks:
        raise InvalidInputError("common_kernel needs at least one block")
    widths = {b.shape[1] for b in blocks}
    if len(widths) != 1:
        raise InvalidInputError(f"blocks have inconsistent column counts {sorted(widths)}")
    return nullspace_basis(np.vstack(blocks), tol)


def snap_rational(x, max_den: int = SNAP_MAX_DEN, tol: float = SNAP_TOL) -> Fraction | None:
    """Closest fraction with denominator <= ``max_den`` if within ``tol`` of ``x``.

    Distinct fractions with denominators up to ``max_den`` are at least
    ``1 / max_den**2`` apart, so for the default settings at most one
    qualifies.
    """
    if max_den < 1:
        raise InvalidInputError("max_den must be >= 1")
    x = float(x)
    if not np.isfinite(x):
        return None
    frac = Fraction(x).limit_denominator(max_den)
    if abs(x - float(frac)) <= tol:
        return frac
    return None


def format_exponent(p) -> str:
    if isinstance(p, Fraction):
        if p.denominator == 1:
            return str(p.numerator)
        return f"({p.numerator}/{p.denominator})"
    return f"({float(p)!r})"


def _product(names_powers):
    return "*".join(name if p == 1 else f"{name}^{format_exponent(p)}" for name, p in names_powers)


def render_group(exponents, names, max_den: int = SNAP_MAX_DEN, tol: float = SNAP_TOL) -> str:
    """Render a product of powers, e.g. ``sqrt(k/m)*t`` or ``t*xdot0/x0``.

    Square-root factors come first, grouped as ``sqrt(num/den)``; remaining
    positive powers form the numerator and negative powers the denominator,
    each in quantity order.  Exponents that do not snap to a fraction are
    printed in full precision.
    """
    root_num, root_den, num, den = [], [], [], []
    for name, e in zip(names, exponents):
        e = complex(e)
        if abs(e.imag) > tol:
            raise InvalidInputError("complex exponents cannot be rendered")
        q = snap_rational(e.real, max_den, tol)
        if q is None:
            if e.real > 0:
                num.append((name, e.real))
            else:
                den.append((name, -e.real))
        elif q == Fraction(1, 2):
            root_num.append(name)
        elif q == Fraction(-1, 2):
            root_den.append(name)
        elif q > 0:
            num.append((name, q))
        elif q < 0:
            den.append((name, -q))

    pieces = []
    if root_num or root_den:
        inner = "*".join(root_num) if root_num else "1"
        if root_den:
            joined = "*".join(root_den)
            inner += "/" + (joined if len(root_den) == 1 else f"({joined})")
        pieces.append(f"sqrt({inner})")
    if num:
        pieces.append(_product(num))
    text = "*".join(pieces) if pieces else "1"
    if den:
        d = _product(den)
        text += "/" + (d if len(den) == 1 else f"({d})")
    return text


@dataclass
class DimensionTable:
    """Dimension exponents: one row per base dimension, one column per quantity."""

    dimension_names: list
    quantity_names: list
    exponents: np.ndarray

    def __post_init__(self):
        self.dimension_names = [str(d) for d in self.dimension_names]
        self.quantity_names = [str(q) for q in self.quantity_names]
        self.exponents = np.asarray(self.exponents, dtype=float)
        if self.exponents.ndim != 2:
            raise InvalidInputError("exponents must be a 2-D table")
        shape = (len(self.dimension_names), len(self.quantity_names))
        if self.exponents.shape != shape:
            raise InvalidInputError(f"exponent table has shape {self.exponents.shape}, expected {shape}")
        for label, names in (("dimension", self.dimension_names), ("quantity", self.quantity_names)):
            if len(set(names)) != len(names):
                raise InvalidInputError(f"duplicate {label} names")
        if not np.all(np.isfinite(self.exponents)):
            raise InvalidInputError("exponents must be finite")


@dataclass
class PiGroupSet:
    exponent_columns: np.ndarray
    group_labels: list = field(default_factory=list)
    quantity_names: list = field(default_factory=list)

    def __len__(self):
        return self.exponent_columns.shape[1]

    def snapped(self, max_den: int = SNAP_MAX_DEN, tol: float = SNAP_TOL):
        """Exponents as fractions where they snap, else floats (display only)."""
        out = []
        for col in self.exponent_columns.T:
            snapped = []
            for x in col:
                q = snap_rational(x, max_den, tol)
                snapped.append(q if q is not None else float(x))
            out.append(snapped)
        return out


def pi_groups(
    table: DimensionTable,
    tol: ToleranceConfig | None = None,
    *,
    algorithm: str = "standard",
) -> PiGroupSet:
    """Independent dimensionless products of powers, in normal form."""
    tol = DEFAULT_TOL if tol is None else tol
    names = table.quantity_names
    K = nullspace_basis(table.exponents, tol)
    if K.shape[1] == 0:
        return PiGroupSet(np.zeros((len(names), 0)), [], list(names))
    cols = normal_form(K, tol, algorithm=algorithm, allow_n1=True).columns
    labels = [render_group(c, names) for c in cols.T]
    return PiGroupSet(cols, labels, list(names))

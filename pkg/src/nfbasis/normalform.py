"""Normal form of a basis: candidate generation, theta ordering and the two
search strategies (standard and top-down).

For a full-column-rank ``A`` (m x n) every choice of rows spanning an
``(n-1)``-dimensional hyperplane yields a normal vector ``s``; scaled so that
the first nonzero entry of ``A @ s`` is +1 it becomes a candidate.  Candidates
are ranked by their zero pattern (more zeros first, then zeros at higher row
indices first) and the first ``n`` linearly independent ones, mapped through
``A``, form the normal form.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_matrix, check_vector
from .exceptions import (
    ContradictionError,
    InternalInvariantError,
    InvalidInputError,
    NotFullColumnRankError,
    UnsupportedDimensionError,
)
from .linalg import DEFAULT_TOL, IndependenceTracker, ToleranceConfig

_CHUNK = 20_000
ALGORITHMS = ("standard", "topdown")


# -- ordering keys ------------------------------------------------------------

@dataclass(frozen=True)
class ZeroPattern:
    """Which entries of ``A @ s`` vanish; ``mask[j]`` refers to row ``j + 1``."""

    mask: tuple[bool, ...]

    @classmethod
    def from_mask(cls, mask) -> "ZeroPattern":
        return cls(tuple(bool(b) for b in mask))

    @property
    def m(self) -> int:
        return len(self.mask)

    @property
    def zero_count(self) -> int:
        return sum(self.mask)

    @property
    def value(self) -> int:
        return sum(1 << j for j, z in enumerate(self.mask) if z)

    @property
    def key(self) -> "ThetaKey":
        return ThetaKey(self.zero_count, self.value, self.m)

    def __str__(self):
        # Row order, '1' marks a zero entry.
        return "".join("1" if z else "0" for z in self.mask)


@dataclass(frozen=True, order=True)
class ThetaKey:
    """Ordering key equivalent to the integer theta.

    Keys compare lexicographically on ``(zero_count, pattern_value)``, which
    orders exactly like ``exact_theta = 2**(m + zero_count) + pattern_value``
    because ``pattern_value < 2**m``.
    """

    zero_count: int
    pattern_value: int
    m: int = field(compare=False)

    @property
    def exact_theta(self) -> int:
        return (1 << (self.m + self.zero_count)) + self.pattern_value

    def as_dict(self) -> dict:
        return {
            "zero_count": self.zero_count,
            "pattern_value": self.pattern_value,
            "exact_theta": self.exact_theta,
        }


def compare_theta(a: ThetaKey, b: ThetaKey) -> int:
    """Return 1 if ``a`` ranks above ``b``, -1 if below, 0 if equal."""
    if a.m != b.m:
        raise InvalidInputError(f"keys built for different m ({a.m} vs {b.m})")
    ka = (a.zero_count, a.pattern_value)
    kb = (b.zero_count, b.pattern_value)
    return (ka > kb) - (ka < kb)


def _pattern_value(mask_row: np.ndarray) -> int:
    return sum(1 << int(j) for j in np.flatnonzero(mask_row))


# -- candidates and results ---------------------------------------------------

@dataclass
class Candidate:
    s_hat: np.ndarray
    image: np.ndarray
    pattern: ZeroPattern
    key: ThetaKey


@dataclass
class SearchStats:
    selections_enumerated: int = 0
    candidates_examined: int = 0
    distinct_candidates: int = 0
    levels_visited: int = 0
    rows_considered: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class NormalFormResult:
    columns: np.ndarray
    s_vectors: np.ndarray
    keys: list
    patterns: list
    algorithm: str
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.columns))

    @property
    def shape(self):
        return self.columns.shape


def _finalize(A, s, mask, lead):
    """Scale ``s`` so entry ``lead`` of ``A @ s`` is 1; zero the masked entries."""
    image = A @ s
    pivot = image[lead]
    s_hat = s / pivot
    image = A @ s_hat
    image[mask] = 0
    image[lead] = 1
    return s_hat, image


def normalize_candidate(A, s, tol: ToleranceConfig | None = None) -> Candidate:
    tol = DEFAULT_TOL if tol is None else tol
    A = check_matrix(A, name="A")
    s = check_vector(s, name="s", size=A.shape[1])
    image = A @ s
    if not np.any(image):
        raise ContradictionError("A @ s vanishes identically; A is not of full column rank")
    mask = tol.zero_mask(image)
    if mask.all():
        raise ContradictionError("every entry of A @ s classified zero; check zero_rel_tol")
    lead = int(np.argmin(mask))
    s_hat, image = _finalize(A, s, mask, lead)
    pattern = ZeroPattern.from_mask(mask)
    return Candidate(s_hat=s_hat, image=image, pattern=pattern, key=pattern.key)


def canonical_column(A: np.ndarray, mask: np.ndarray):
    """Recompute ``(s_hat, image)`` for a zero pattern from all its rows.

    Both search strategies finish through this routine so their outputs agree
    bit for bit.
    """
    zero_rows = A[mask]
    if zero_rows.shape[0] == 0:
        raise InternalInvariantError("empty zero pattern for n >= 2")
    _, _, vh = np.linalg.svd(zero_rows, full_matrices=True)
    s = vh[-1].conj()
    lead = int(np.argmin(mask))
    return _finalize(A, s, mask, lead)


# -- shared machinery ---------------------------------------------------------

def _worker_count() -> int:
    raw = os.environ.get("NFBASIS_THREADS", "").strip()
    try:
        value = int(raw) if raw else 0
    except ValueError:
        value = 0
    if value <= 0:
        value = os.cpu_count() or 1
    return max(1, value)


def _chunked(iterable, size):
    it = iter(iterable)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _map_chunks(func, chunks):
    workers = _worker_count()
    if workers == 1:
        return [func(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, chunks))


@dataclass
class _Prepared:
    A: np.ndarray
    m: int
    n: int
    smax: float
    smin: float
    tol: ToleranceConfig

    @property
    def rank_thr(self) -> float:
        return self.tol.rank_threshold(self.smax, (self.m, self.n))


def _prepare(A, tol, allow_n1) -> _Prepared:
    tol = DEFAULT_TOL if tol is None else tol
    A = check_matrix(A, name="A")
    m, n = A.shape
    if n < 2 and not allow_n1:
        raise UnsupportedDimensionError(
            "normal form requires n >= 2 columns (pass allow_n1=True to scale a single column)"
        )
    if n > m:
        raise NotFullColumnRankError(f"{m}x{n} matrix cannot have full column rank")
    s = np.linalg.svd(A, compute_uv=False)
    prep = _Prepared(A, m, n, float(s[0]), float(s[-1]), tol)
    if prep.smax == 0.0 or prep.smin <= prep.rank_thr:
        raise NotFullColumnRankError(f"rank(A) < {n}")
    if prep.smin <= 10.0 * prep.rank_thr:
        raise NotFullColumnRankError(
            f"A is numerically near rank-deficient (smallest singular value {prep.smin:.3e})"
        )
    return prep


def _single_column(prep: _Prepared, algorithm: str) -> NormalFormResult:
    col = prep.A[:, 0]
    mask = prep.tol.zero_mask(col)
    lead = int(np.argmin(mask))
    s_hat, image = _finalize(prep.A, np.ones(1, dtype=prep.A.dtype), mask, lead)
    pattern = ZeroPattern.from_mask(mask)
    return NormalFormResult(
        columns=image[:, None],
        s_vectors=s_hat[:, None],
        keys=[pattern.key],
        patterns=[pattern],
        algorithm=algorithm,
    )


def _normalize_batch(prep: _Prepared, s: np.ndarray):
    """Normalize stacked normal vectors; returns (s_hat, images, masks)."""
    images = s @ prep.A.T
    masks = prep.tol.zero_mask(images)
    if masks.all(axis=1).any():
        raise ContradictionError("a candidate image vanished identically")
    lead = np.argmin(masks, axis=1)
    pivots = images[np.arange(images.shape[0]), lead]
    return s / pivots[:, None], images / pivots[:, None], masks


def _greedy(prep: _Prepared, ordered):
    """Feed ``(key, mask, s_hat)`` triples in key order; return accepted ones."""
    tracker = IndependenceTracker(prep.n, prep.tol)
    chosen = []
    for item in ordered:
        if tracker.extend(item[2]):
            chosen.append(item)
            if tracker.full:
                break
    return tracker, chosen


def _assemble(prep: _Prepared, chosen, algorithm, stats) -> NormalFormResult:
    keys = [c[0] for c in chosen]
    for a, b in zip(keys, keys[1:]):
        if not a > b:
            raise InternalInvariantError("selected keys are not strictly decreasing")
    cols, svecs, patterns = [], [], []
    for _, mask, _ in chosen:
        s_hat, image = canonical_column(prep.A, mask)
        cols.append(image)
        svecs.append(s_hat)
        patterns.append(ZeroPattern.from_mask(mask))
    return NormalFormResult(
        columns=np.stack(cols, axis=1),
        s_vectors=np.stack(svecs, axis=1),
        keys=keys,
        patterns=patterns,
        algorithm=algorithm,
        stats=stats,
    )


# -- standard algorithm -------------------------------------------------------

def _standard_chunk(prep: _Prepared, combos):
    idx = np.asarray(combos, dtype=np.intp)
    _, sv, vh = np.linalg.svd(prep.A[idx], full_matrices=True)
    ok = sv[:, -1] > prep.rank_thr
    if not ok.any():
        return None
    s = vh[ok, -1, :].conj()
    return _normalize_batch(prep, s)


def normal_form_standard(
    A,
    tol: ToleranceConfig | None = None,
    *,
    allow_n1: bool = False,
    enumeration_order: str = "forward",
) -> NormalFormResult:
    """Normal form by enumerating every selection of ``n - 1`` rows.

    ``enumeration_order="reverse"`` walks the selections backwards; the result
    is identical and the option exists to make that checkable.
    """
    t0 = time.perf_counter()
    prep = _prepare(A, tol, allow_n1)
    if prep.n == 1:
        return _single_column(prep, "standard")
    m, n = prep.m, prep.n
    combos = itertools.combinations(range(m), n - 1)
    if enumeration_order == "reverse":
        combos = reversed(list(combos))
    elif enumeration_order != "forward":
        raise InvalidInputError(f"unknown enumeration_order {enumeration_order!r}")

    stats = SearchStats(rows_considered=m)
    chunks = list(_chunked(combos, _CHUNK))
    stats.selections_enumerated = sum(len(c) for c in chunks)
    parts = [p for p in _map_chunks(lambda c: _standard_chunk(prep, c), chunks) if p is not None]
    if not parts:
        raise ContradictionError("no row selection spans n - 1 dimensions")
    s_hat = np.concatenate([p[0] for p in parts])
    images = np.concatenate([p[1] for p in parts])
    masks = np.concatenate([p[2] for p in parts])
    stats.candidates_examined = s_hat.shape[0]

    # Deduplicate by exact zero pattern; one hyperplane per pattern.
    packed = np.packbits(masks, axis=1)
    _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    ref = images[first[inverse]]
    spread = np.abs(images - ref).max(axis=1)
    scale = np.abs(ref).max(axis=1)
    if np.any(spread > 1e-4 * scale):
        raise InternalInvariantError(
            "two selections share a zero pattern but give different normal vectors"
        )
    stats.distinct_candidates = first.size

    ordered = []
    for i in first:
        mask = masks[i]
        key = ThetaKey(int(mask.sum()), _pattern_value(mask), m)
        ordered.append((key, mask, s_hat[i]))
    ordered.sort(key=lambda t: (t[0].zero_count, t[0].pattern_value), reverse=True)

    tracker, chosen = _greedy(prep, ordered)
    if not tracker.full:
        raise ContradictionError(f"only {len(chosen)} independent normal vectors found")
    stats.wall_time = time.perf_counter() - t0
    return _assemble(prep, chosen, "standard", stats)


# -- top-down algorithm -------------------------------------------------------

def _structural_zero_rows(prep: _Prepared) -> np.ndarray:
    """Rows small enough to be classified zero in every candidate image.

    ``|r . s| <= |r| |s|`` and ``max|A s| >= smin |s| / sqrt(m)``, so a row with
    ``|r| <= zero_rel_tol * smin / sqrt(m)`` is zero in every ``A s``.
    """
    norms = np.linalg.norm(prep.A, axis=1)
    return norms <= prep.tol.zero_rel_tol * prep.smin / math.sqrt(prep.m)


def _topdown_chunk(prep: _Prepared, universe, fixed_zero, level, combos):
    """Evaluate patterns whose nonzero rows (within ``universe``) are ``combos``."""
    u = universe.size
    nz = np.asarray(combos, dtype=np.intp)
    keep = np.ones((nz.shape[0], u), dtype=bool)
    keep[np.arange(nz.shape[0])[:, None], nz] = False
    zsel = np.nonzero(keep)[1].reshape(nz.shape[0], u - level)
    rows = universe[zsel]
    if fixed_zero.size:
        rows = np.concatenate([rows, np.broadcast_to(fixed_zero, (rows.shape[0], fixed_zero.size))], axis=1)
    k = rows.shape[1]
    n = prep.n
    _, sv, vh = np.linalg.svd(prep.A[rows], full_matrices=True)
    ok = sv[:, n - 2] > prep.rank_thr
    if k >= n:
        # Deficient at a level consistent with the zero classification.
        ok &= sv[:, n - 1] <= math.sqrt(k) * prep.tol.zero_rel_tol * prep.smax
    if not ok.any():
        return None
    s = vh[ok, -1, :].conj()
    s_hat, _, masks = _normalize_batch(prep, s)
    expected = np.ones((s.shape[0], prep.m), dtype=bool)
    expected[:, universe] = keep[ok]
    exact = np.all(masks == expected, axis=1)
    return int(ok.sum()), s_hat[exact], masks[exact]


def normal_form_topdown(A, tol: ToleranceConfig | None = None, *, allow_n1: bool = False) -> NormalFormResult:
    """Normal form by searching zero patterns from the most zeros downwards.

    Level ``j`` tries every pattern with ``j`` nonzero entries among the rows
    that are not structurally zero.  A pattern contributes a candidate only if
    its rows span ``n - 1`` dimensions and the resulting image has exactly
    that pattern.  The search stops after the first complete level at which
    ``n`` independent candidates have been accepted.
    """
    t0 = time.perf_counter()
    prep = _prepare(A, tol, allow_n1)
    if prep.n == 1:
        return _single_column(prep, "topdown")
    m, n = prep.m, prep.n
    zero_rows = _structural_zero_rows(prep)
    universe = np.flatnonzero(~zero_rows)
    fixed_zero = np.flatnonzero(zero_rows)
    u = universe.size
    stats = SearchStats(rows_considered=u)

    tracker = IndependenceTracker(n, prep.tol)
    chosen = []
    # j nonzeros among the universe; at least n - 1 zeros overall.
    for level in range(1, u - (n - 1) + 1 + fixed_zero.size):
        if level > u:
            break
        stats.levels_visited += 1
        chunks = list(_chunked(itertools.combinations(range(u), level), _CHUNK))
        stats.selections_enumerated += sum(len(c) for c in chunks)
        parts = _map_chunks(lambda c: _topdown_chunk(prep, universe, fixed_zero, level, c), chunks)
        found = []
        for part in parts:
            if part is None:
                continue
            examined, s_hat, masks = part
            stats.candidates_examined += examined
            for s_row, mask in zip(s_hat, masks):
                key = ThetaKey(int(mask.sum()), _pattern_value(mask), m)
                found.append((key, mask, s_row))
        found.sort(key=lambda t: t[0].pattern_value, reverse=True)
        stats.distinct_candidates += len(found)
        for item in found:
            if not tracker.full and tracker.extend(item[2]):
                chosen.append(item)
        if tracker.full:
            break
    if not tracker.full:
        raise ContradictionError(f"only {len(chosen)} independent normal vectors found")
    stats.wall_time = time.perf_counter() - t0
    return _assemble(prep, chosen, "topdown", stats)


def normal_form(
    A,
    tol: ToleranceConfig | None = None,
    *,
    algorithm: str = "topdown",
    allow_n1: bool = False,
) -> NormalFormResult:
    """Compute the normal form of the basis given by the columns of ``A``."""
    if algorithm == "standard":
        return normal_form_standard(A, tol, allow_n1=allow_n1)
    if algorithm == "topdown":
        return normal_form_topdown(A, tol, allow_n1=allow_n1)
    raise InvalidInputError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def standard_selection_count(m: int, n: int) -> int:
    return math.comb(m, n - 1)


def topdown_selection_count(m: int, k: int) -> int:
    """Patterns tried when the top-down search stops after ``k`` nonzeros."""
    return sum(math.comb(m, m - j) for j in range(1, k + 1))

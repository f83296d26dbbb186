"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numbers

import numpy as np

from .exceptions import InvalidInputError


def _as_inexact(arr: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(arr):
        return arr.astype(np.complex128, copy=False)
    if arr.dtype == object:
        # Fractions, Python ints and the like.
        try:
            return arr.astype(np.float64)
        except (TypeError, ValueError):
            return arr.astype(np.complex128)
    return arr.astype(np.float64, copy=False)


def check_matrix(M, *, name: str = "matrix", min_rows: int = 1, min_cols: int = 1) -> np.ndarray:
    """Return ``M`` as a finite 2-D float64 or complex128 array.

    One-dimensional input is treated as a single row.
    """
    try:
        arr = np.asarray(M)
    except Exception as exc:  # ragged nested sequences
        raise InvalidInputError(f"{name}: cannot convert to array ({exc})") from exc
    if arr.dtype.kind not in "biufcO":
        raise InvalidInputError(f"{name}: unsupported dtype {arr.dtype}")
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    arr = _as_inexact(arr)
    m, n = arr.shape
    if m < min_rows or n < min_cols:
        raise InvalidInputError(f"{name}: shape {arr.shape} is too small")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or Inf")
    return arr


def check_vector(v, *, name: str = "vector", size: int | None = None) -> np.ndarray:
    arr = np.asarray(v)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise InvalidInputError(f"{name}: expected a 1-D vector, got shape {arr.shape}")
    arr = _as_inexact(arr)
    if size is not None and arr.shape[0] != size:
        raise InvalidInputError(f"{name}: expected length {size}, got {arr.shape[0]}")
    if arr.shape[0] == 0:
        raise InvalidInputError(f"{name}: empty vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or Inf")
    return arr


def check_positive_int(value, *, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise InvalidInputError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise InvalidInputError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def common_dtype(*arrays: np.ndarray):
    return np.result_type(*arrays, np.float64)

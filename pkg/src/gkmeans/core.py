"""Numeric kernels and operation counters shared by every solver.

All squared distances in the package go through the compiled kernels at the
bottom of this module.  They share one summation order, so the value
computed for a given ``(x, c)`` pair does not depend on which batch or
which kernel evaluated it.  That property is what lets the accelerated
solvers reproduce Lloyd's assignments bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from numba import njit

__all__ = [
    "GKMeansError",
    "ConfigError",
    "DataError",
    "DimensionError",
    "OpCounters",
    "as_data_matrix",
    "as_point",
    "sq_dist",
    "dist",
    "midpoint",
    "he_test",
    "rowwise_sq_dists",
    "sq_dists_to_centers",
    "he_test_rows",
    "paired_projections",
]


class GKMeansError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(GKMeansError, ValueError):
    """Invalid run configuration (bad k, bad iteration limits, ...)."""


class DataError(GKMeansError, ValueError):
    """Input data is malformed or contains non-finite values."""


class DimensionError(DataError):
    """Operands do not share a dimension."""


@dataclass
class OpCounters:
    """Instrumentation counters for one run.

    ``dc_full`` counts every full d-dimensional distance evaluation.
    ``dc_le`` and ``dc_neighbor`` are the subsets spent on own-centroid
    checks and on centroid-centroid distances.  ``proj_count`` counts
    affine-product sign tests, which are not distance computations.
    """

    dc_full: int = 0
    dc_le: int = 0
    dc_neighbor: int = 0
    proj_count: int = 0

    def add_dc(self, n: int = 1, bucket: str | None = None) -> None:
        n = int(n)
        self.dc_full += n
        if bucket == "le":
            self.dc_le += n
        elif bucket == "neighbor":
            self.dc_neighbor += n
        elif bucket is not None:
            raise ValueError(f"unknown DC bucket {bucket!r}")

    def snapshot(self) -> "OpCounters":
        return OpCounters(**self.as_dict())

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def as_data_matrix(data) -> np.ndarray:
    """Validate and return ``data`` as a C-contiguous float64 (m, d) array."""
    X = np.ascontiguousarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"data must be 2-D (m, d), got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"data must have m >= 1 rows and d >= 1 columns, got {X.shape}")
    if not np.isfinite(X).all():
        raise DataError("data contains NaN or infinite values")
    return X


def as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=np.float64)
    if a.ndim == 0:
        a = a.reshape(1)
    if a.ndim != 1:
        raise DimensionError(f"a point must be 1-D, got shape {a.shape}")
    return a


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a, b = as_point(a), as_point(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def sq_dist(a, b) -> float:
    """Squared Euclidean distance.  Not counted as a DC."""
    a, b = _pair(a, b)
    return float(rowwise_sq_dists(a, b))


def dist(a, b, counters: OpCounters | None = None) -> float:
    """Euclidean distance; increments ``counters.dc_full`` by one."""
    value = float(np.sqrt(sq_dist(a, b)))
    if counters is not None:
        counters.add_dc(1)
    return value


def midpoint(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    return 0.5 * (a + b)


def he_test(mid, affine, x, counters: OpCounters | None = None) -> bool:
    """Return True iff ``(x - mid) . affine > 0``.

    With ``mid`` the midpoint of ``c_i, c_j`` and ``affine = c_j - mid`` this
    is true exactly when ``x`` lies strictly on ``c_j``'s side of the
    bisecting hyperplane.  Counts one projection, never a DC.
    """
    mid, affine = _pair(mid, affine)
    mid, x = _pair(mid, x)
    if counters is not None:
        counters.proj_count += 1
    return bool(paired_projections(x, mid, affine)[0] > 0.0)


# -- batched kernels ---------------------------------------------------------
# Compiled loops accumulate each squared distance left to right over the
# coordinates (no fastmath), so a pair's value never depends on the batch.

@njit(cache=True)
def _paired_sq(A, B):
    n, d = A.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for t in range(d):
            diff = A[i, t] - B[i, t]
            acc += diff * diff
        out[i] = acc
    return out


@njit(cache=True)
def _matrix_sq(X, C):
    m, d = X.shape
    k = C.shape[0]
    out = np.empty((m, k))
    for i in range(m):
        for j in range(k):
            acc = 0.0
            for t in range(d):
                diff = X[i, t] - C[j, t]
                acc += diff * diff
            out[i, j] = acc
    return out


@njit(cache=True)
def _paired_proj(X, mid, affine):
    n, d = X.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for t in range(d):
            acc += (X[i, t] - mid[i, t]) * affine[i, t]
        out[i] = acc
    return out


def _rows(A) -> np.ndarray:
    return np.ascontiguousarray(A, dtype=np.float64)


def rowwise_sq_dists(A, B) -> np.ndarray:
    """Squared distances between paired rows, ``|A[i] - B[i]|^2``.

    Either operand may be a single point, broadcast against the other.
    1-D inputs give a 0-d result.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.ndim == 1 and B.ndim == 1:
        return _paired_sq(_rows(A[None]), _rows(B[None]))[0]
    A2, B2 = np.broadcast_arrays(np.atleast_2d(A), np.atleast_2d(B))
    return _paired_sq(_rows(A2), _rows(B2))


def sq_dists_to_centers(X, C) -> np.ndarray:
    """Full (m, k) matrix of squared distances."""
    return _matrix_sq(_rows(X), _rows(C))


def paired_projections(X, mid, affine) -> np.ndarray:
    """``(X[i] - mid[i]) . affine[i]`` for paired rows (uncounted)."""
    X = np.asarray(X, dtype=np.float64)
    mid = np.asarray(mid, dtype=np.float64)
    affine = np.asarray(affine, dtype=np.float64)
    X2, M2, A2 = np.broadcast_arrays(np.atleast_2d(X), np.atleast_2d(mid), np.atleast_2d(affine))
    return _paired_proj(_rows(X2), _rows(M2), _rows(A2))


def he_test_rows(X, mid, affine) -> np.ndarray:
    """Vectorized :func:`he_test` over paired rows (uncounted)."""
    return paired_projections(X, mid, affine) > 0.0

"""Solution quality and analysis metrics."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import DataError, DimensionError, GKMeansError, rowwise_sq_dists

__all__ = [
    "DegenerateInputError",
    "sse",
    "ari",
    "pearson",
    "savings_report",
    "NOT_APPLICABLE",
]

#: Marker used in savings rows whose denominator is zero.
NOT_APPLICABLE = "n/a"


class DegenerateInputError(GKMeansError, ValueError):
    """Input has no variance (or is otherwise too small) for the statistic."""


def sse(data, centroids, assign) -> float:
    """Sum of squared distances from each point to its assigned centroid."""
    X = np.asarray(data, dtype=np.float64)
    C = np.asarray(getattr(centroids, "centers", centroids), dtype=np.float64)
    a = np.asarray(assign)
    if a.shape != (X.shape[0],):
        raise DimensionError(f"{a.shape[0] if a.ndim else 0} labels for {X.shape[0]} points")
    if a.size and (a.min() < 0 or a.max() >= C.shape[0]):
        raise DataError("label out of range")
    return float(rowwise_sq_dists(X, C[a]).sum())


def _comb2(n) -> int:
    return sum(math.comb(int(v), 2) for v in np.asarray(n).ravel())


def ari(a, b) -> float:
    """Adjusted Rand index via exact integer pair counting."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError("label vectors must be 1-D and of equal length")
    n = a.size
    if n < 2:
        raise DegenerateInputError("ARI needs at least 2 labels")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    pairs = ia.astype(np.int64) * (ib.max() + 1) + ib
    _, cells = np.unique(pairs, return_counts=True)

    index = _comb2(cells)
    sum_a = _comb2(np.bincount(ia))
    sum_b = _comb2(np.bincount(ib))
    total = math.comb(n, 2)
    # Rescale by total to keep the arithmetic in integers as long as possible.
    expected_num = sum_a * sum_b
    max_num = (sum_a + sum_b) * total
    denom = max_num - 2 * expected_num
    if denom == 0:
        # Both partitions trivial (all-one-cluster or all-singletons).
        return 1.0
    return (2 * (index * total - expected_num)) / denom


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError("series must be 1-D and of equal length")
    if x.size < 2:
        raise DegenerateInputError("need at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    norm = math.sqrt(sxx) * math.sqrt(syy)
    if norm == 0.0:
        raise DegenerateInputError("zero variance in input series")
    r = float(dx @ dy) / norm
    return max(-1.0, min(1.0, r))


def _pct(total, used):
    if total == 0:
        return NOT_APPLICABLE
    return (total - used) / total * 100.0


def savings_report(telemetry, m: int, k: int) -> list[dict]:
    """Per-iteration LE/LHE/HE savings rows.

    PDC1 = (m - LE) * k and PDC2 = LHE * k; savings percentages are
    ``(PDC1 - LHE) / PDC1 * 100`` and ``(PDC2 - HE) / PDC2 * 100``, with
    :data:`NOT_APPLICABLE` in place of a zero-denominator division.
    """
    if len(telemetry) == 0:
        raise DegenerateInputError("empty telemetry")
    rows = []
    for t in telemetry:
        pdc1 = (m - t.le_count) * k
        pdc2 = t.lhe_count * k
        rows.append({
            "iter": t.iter,
            "neighbor_pairs": t.neighbor_pairs,
            "neighborhood_frac": t.neighbor_pairs / (k * k),
            "le_count": t.le_count,
            "le_frac": t.le_count / m,
            "pdc1": pdc1,
            "lhe_count": t.lhe_count,
            "lhe_savings_pct": _pct(pdc1, t.lhe_count),
            "pdc2": pdc2,
            "he_count": t.he_count,
            "he_savings_pct": _pct(pdc2, t.he_count),
        })
    return rows

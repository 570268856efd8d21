"""Neighbor-centroid tables rebuilt at every accelerated iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DataError, OpCounters, rowwise_sq_dists

__all__ = ["NeighborTables", "compute_neighbor_tables"]


@dataclass(frozen=True)
class NeighborTables:
    """Output of the neighbor search for one set of centroids.

    Neighbor lists are stored CSR-style: the neighbors of centroid ``i`` are
    ``indices[indptr[i]:indptr[i + 1]]`` in ascending order.  ``mid`` and
    ``affine`` are aligned with ``indices``, one row per directed neighbor
    pair ``(i, j)``; ``affine[e] = centers[j] - mid[e]``.
    """

    centers: np.ndarray
    M: np.ndarray
    s: np.ndarray
    radii: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    mid: np.ndarray
    affine: np.ndarray

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    @property
    def neighbor_pairs(self) -> int:
        return int(self.indices.size)

    def neighbors(self, i: int) -> list[int]:
        return self.indices[self.indptr[i]:self.indptr[i + 1]].tolist()

    def edge(self, i: int, j: int) -> int:
        row = self.indices[self.indptr[i]:self.indptr[i + 1]]
        pos = np.flatnonzero(row == j)
        if pos.size == 0:
            raise KeyError((i, j))
        return int(self.indptr[i] + pos[0])

    def midpoint(self, i: int, j: int) -> np.ndarray:
        """Midpoint of ``c_i, c_j``; defined when either direction is admitted."""
        try:
            return self.mid[self.edge(i, j)]
        except KeyError:
            return self.mid[self.edge(j, i)]

    def affine_vector(self, i: int, j: int) -> np.ndarray:
        return self.affine[self.edge(i, j)]


def compute_neighbor_tables(centroids, radii, counters: OpCounters | None = None) -> NeighborTables:
    """Half inter-centroid distances, ``s``, neighbor lists, midpoints, affine vectors.

    ``j`` is a neighbor of ``i`` iff ``M[i, j] <= radii[i] + s[i]``.  The
    relation is directional.  Exactly ``k(k-1)/2`` distances are evaluated
    and charged to ``counters`` as neighbor DCs.
    """
    C = np.asarray(getattr(centroids, "centers", centroids), dtype=np.float64)
    if C.ndim != 2:
        raise DataError(f"centroids must be 2-D, got shape {C.shape}")
    k = C.shape[0]
    if k < 2:
        raise ConfigError("neighbor tables need at least 2 centroids")
    if not np.isfinite(C).all():
        raise DataError("non-finite centroid")
    r = np.asarray(radii, dtype=np.float64)
    if r.shape != (k,):
        raise ConfigError(f"expected {k} radii, got shape {r.shape}")
    if not (np.isfinite(r).all() and (r >= 0).all()):
        raise DataError("radii must be finite and non-negative")

    iu, ju = np.triu_indices(k, 1)
    half = 0.5 * np.sqrt(rowwise_sq_dists(C[iu], C[ju]))
    if counters is not None:
        counters.add_dc(iu.size, "neighbor")

    M = np.full((k, k), np.inf)
    M[iu, ju] = half
    M[ju, iu] = half
    s = M.min(axis=1)

    admitted = M <= (r + s)[:, None]
    rows, cols = np.nonzero(admitted)
    indptr = np.zeros(k + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=k), out=indptr[1:])
    mid = 0.5 * (C[rows] + C[cols])
    affine = C[cols] - mid

    return NeighborTables(
        centers=C,
        M=M,
        s=s,
        radii=r.copy(),
        indptr=indptr,
        indices=cols.astype(np.int64),
        mid=mid,
        affine=affine,
    )

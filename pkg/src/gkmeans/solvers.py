"""Exact k-means solvers: Lloyd, Geometric k-means and Hamerly.

The three solvers share initialization, the centroid update, the tie-break
rule and the convergence test, and they evaluate every distance through the
same batched kernel.  Started from the same centroids they therefore
produce identical assignment sequences, and the final SSE values are equal
bit for bit.

Iteration ``t`` consists of an assignment step against the current
centroids followed by a centroid update.  Iteration 1 is always a full
Lloyd pass.  The run stops after the update whose largest centroid
displacement is ``<= epsilon``, or after ``max_iters`` iterations.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .core import (
    ConfigError,
    DataError,
    OpCounters,
    as_data_matrix,
    he_test,
    he_test_rows,
    rowwise_sq_dists,
    sq_dists_to_centers,
)
from .metrics import sse as _sse
from .neighbors import NeighborTables, compute_neighbor_tables

__all__ = [
    "CentroidSet",
    "AssignState",
    "SolverParams",
    "IterationTelemetry",
    "Solution",
    "NeighborCheck",
    "PointClassification",
    "GkIterationSnapshot",
    "init_random",
    "init_kmeanspp",
    "update_centroids",
    "run_lloyd",
    "run_gkmeans",
    "run_hamerly",
    "classify_point",
    "SOLVERS",
]

TIE_BREAKS = ("keep", "highest")


@dataclass
class CentroidSet:
    centers: np.ndarray
    drift: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        self.centers = np.array(self.centers, dtype=np.float64, ndmin=2)
        if self.drift is None:
            self.drift = np.zeros(self.centers.shape[0])
        else:
            self.drift = np.asarray(self.drift, dtype=np.float64)

    @property
    def k(self) -> int:
        return self.centers.shape[0]

    def copy(self) -> "CentroidSet":
        return CentroidSet(self.centers.copy(), self.drift.copy())


@dataclass
class AssignState:
    """Cluster membership of every point plus per-cluster counts and sums.

    ``sums`` is always recomputed from scratch in ascending point order,
    never updated incrementally, so that its rounding does not depend on
    the order in which points happened to move.
    """

    assign: np.ndarray
    own_dist: np.ndarray
    counts: np.ndarray
    sums: np.ndarray

    @classmethod
    def build(cls, data: np.ndarray, assign: np.ndarray, k: int,
              own_dist: np.ndarray | None = None) -> "AssignState":
        assign = np.asarray(assign, dtype=np.int64)
        counts = np.bincount(assign, minlength=k)
        sums = np.empty((k, data.shape[1]))
        for col in range(data.shape[1]):
            sums[:, col] = np.bincount(assign, weights=data[:, col], minlength=k)
        if own_dist is None:
            own_dist = np.full(assign.shape, np.nan)
        return cls(assign, own_dist, counts, sums)


@dataclass
class SolverParams:
    max_iters: int = 500
    epsilon: float = 0.0
    seed: int = 0
    #: keep a copy of the assignment produced at every iteration
    keep_history: bool = False
    #: "keep" is the shared rule.  "highest" exists only to let tests break
    #: symmetry on purpose; only the full-pass (Lloyd) argmin honours it.
    tie_break: str = "keep"

    def __post_init__(self):
        if int(self.max_iters) < 1:
            raise ConfigError("max_iters must be >= 1")
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ConfigError("epsilon must be a finite non-negative number")
        if self.tie_break not in TIE_BREAKS:
            raise ConfigError(f"tie_break must be one of {TIE_BREAKS}")


@dataclass
class IterationTelemetry:
    iter: int
    neighbor_pairs: int = 0
    le_count: int = 0
    lhe_count: int = 0
    he_count: int = 0
    dc_this_iter: int = 0
    pdc1: int = 0
    pdc2: int = 0
    sse_after_update: float = 0.0
    dc_le: int = 0
    dc_neighbor: int = 0
    dc_candidate: int = 0
    proj_this_iter: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


TELEMETRY_COLUMNS = [f for f in IterationTelemetry.__dataclass_fields__]


@dataclass
class Solution:
    centroids: CentroidSet
    assign: np.ndarray
    iterations: int
    sse: float
    telemetry: list[IterationTelemetry]
    counters: OpCounters
    converged: bool = False
    history: list[np.ndarray] = field(default_factory=list)

    @property
    def sse_trace(self) -> list[float]:
        return [t.sse_after_update for t in self.telemetry]


# -- initialization ------------------------------------------------------------

def _check_k(k: int, m: int) -> int:
    k = int(k)
    if k < 2:
        raise ConfigError(f"k must be >= 2, got {k}")
    if k > m:
        raise ConfigError(f"k={k} exceeds the number of points m={m}")
    return k


def init_random(data, k: int, seed: int) -> CentroidSet:
    """k distinct rows sampled without replacement."""
    X = as_data_matrix(data)
    k = _check_k(k, X.shape[0])
    rng = np.random.default_rng(seed)
    idx = rng.choice(X.shape[0], size=k, replace=False)
    return CentroidSet(X[idx].copy())


def init_kmeanspp(data, k: int, seed: int, counters: OpCounters | None = None) -> CentroidSet:
    """D^2 seeding.  Falls back to uniform sampling over unchosen rows when
    every remaining point coincides with a chosen center."""
    X = as_data_matrix(data)
    m = X.shape[0]
    k = _check_k(k, m)
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(m))]
    closest = rowwise_sq_dists(X, X[chosen[0]])
    if counters is not None:
        counters.add_dc(m)
    while len(chosen) < k:
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(m, p=closest / total))
        else:
            free = np.setdiff1d(np.arange(m), chosen)
            nxt = int(rng.choice(free))
        chosen.append(nxt)
        if len(chosen) < k:
            np.minimum(closest, rowwise_sq_dists(X, X[nxt]), out=closest)
            if counters is not None:
                counters.add_dc(m)
    return CentroidSet(X[chosen].copy())


# -- shared steps ------------------------------------------------------------------

def update_centroids(data, state: AssignState, prev: CentroidSet) -> CentroidSet:
    """Means of the member sums; empty clusters keep their previous center."""
    counts = state.counts
    centers = prev.centers.copy()
    live = counts > 0
    centers[live] = state.sums[live] / counts[live, None]
    drift = np.sqrt(rowwise_sq_dists(centers, prev.centers))
    return CentroidSet(centers, drift)


def _full_assign(D: np.ndarray, current: np.ndarray | None, tie_break: str) -> np.ndarray:
    """Argmin of each row of ``D`` under the shared tie-break rule.

    A point moves only to a strictly closer centroid; ties among other
    centroids go to the lowest index.
    """
    rows = np.arange(D.shape[0])
    if tie_break == "highest":
        return D.shape[1] - 1 - D[:, ::-1].argmin(axis=1)
    best = D.argmin(axis=1)
    if current is not None:
        keep = D[rows, current] == D[rows, best]
        best[keep] = current[keep]
    return best


def _all_dists(X, C, counters: OpCounters) -> np.ndarray:
    counters.add_dc(X.shape[0] * C.shape[0])
    return np.sqrt(sq_dists_to_centers(X, C))


def _prepare(data, init, params):
    X = as_data_matrix(data)
    if not isinstance(init, CentroidSet):
        init = CentroidSet(init)
    C = init.centers
    if C.ndim != 2 or C.shape[1] != X.shape[1]:
        raise DataError(f"centroids of shape {C.shape} do not match data dimension {X.shape[1]}")
    if not np.isfinite(C).all():
        raise DataError("non-finite initial centroid")
    _check_k(C.shape[0], X.shape[0])
    return X, init.copy(), params or SolverParams()


def _drive(X: np.ndarray, init: CentroidSet, params: SolverParams, stepper) -> Solution:
    counters = stepper.counters
    k = init.k
    m = X.shape[0]
    cs = init
    assign = None
    telemetry: list[IterationTelemetry] = []
    history: list[np.ndarray] = []
    converged = False
    for t in range(1, int(params.max_iters) + 1):
        before = counters.snapshot()
        if t == 1:
            assign, row = stepper.first(cs)
        else:
            assign, row = stepper.step(cs, assign, t)
        if params.keep_history:
            history.append(assign.copy())
        state = AssignState.build(X, assign, k)
        new = update_centroids(X, state, cs)
        row.iter = t
        row.sse_after_update = _sse(X, new.centers, assign)
        row.dc_this_iter = counters.dc_full - before.dc_full
        row.dc_le = counters.dc_le - before.dc_le
        row.dc_neighbor = counters.dc_neighbor - before.dc_neighbor
        row.dc_candidate = row.dc_this_iter - row.dc_le - row.dc_neighbor
        row.proj_this_iter = counters.proj_count - before.proj_count
        row.pdc1 = (m - row.le_count) * k
        row.pdc2 = row.lhe_count * k
        telemetry.append(row)
        cs = new
        if float(new.drift.max()) <= params.epsilon:
            converged = True
            break
    return Solution(
        centroids=cs,
        assign=assign,
        iterations=len(telemetry),
        sse=telemetry[-1].sse_after_update,
        telemetry=telemetry,
        counters=counters,
        converged=converged,
        history=history,
    )


# -- Lloyd -----------------------------------------------------------------------

class _LloydStepper:
    def __init__(self, X, params):
        self.X = X
        self.params = params
        self.counters = OpCounters()

    def first(self, cs):
        D = _all_dists(self.X, cs.centers, self.counters)
        return _full_assign(D, None, self.params.tie_break), IterationTelemetry(0)

    def step(self, cs, assign, t):
        D = _all_dists(self.X, cs.centers, self.counters)
        return _full_assign(D, assign, self.params.tie_break), IterationTelemetry(t)


def run_lloyd(data, init, params: SolverParams | None = None) -> Solution:
    """Lloyd's algorithm: every point against every centroid, m*k DC per iteration."""
    X, init, params = _prepare(data, init, params)
    return _drive(X, init, params, _LloydStepper(X, params))


# -- Geometric k-means -----------------------------------------------------------

@dataclass
class GkIterationSnapshot:
    """State handed to a ``run_gkmeans`` observer just before filtering."""

    iteration: int
    centers: np.ndarray
    assign: np.ndarray
    own_dist: np.ndarray
    tables: NeighborTables
    le_mask: np.ndarray


def _cluster_radii(assign, own_dist, k):
    radii = np.zeros(k)
    np.maximum.at(radii, assign, own_dist)
    return radii


class _GkStepper:
    def __init__(self, X, params, observer):
        self.X = X
        self.params = params
        self.counters = OpCounters()
        self.observer = observer

    def first(self, cs):
        D = _all_dists(self.X, cs.centers, self.counters)
        return _full_assign(D, None, self.params.tie_break), IterationTelemetry(0)

    def step(self, cs, assign, t):
        X, C, counters = self.X, cs.centers, self.counters
        k = C.shape[0]

        # Refresh every point's distance to its (moved) centroid; this also
        # yields exact radii, which the neighbor pruning relies on.
        own = np.sqrt(rowwise_sq_dists(X, C[assign]))
        counters.add_dc(X.shape[0], "le")
        tables = compute_neighbor_tables(C, _cluster_radii(assign, own, k), counters)

        le = own <= tables.s[assign]
        if self.observer is not None:
            self.observer(GkIterationSnapshot(t, C, assign.copy(), own, tables, le))

        active = np.flatnonzero(~le)
        owner = assign[active]
        start = tables.indptr[owner]
        n_nbr = tables.indptr[owner + 1] - start
        p = np.repeat(active, n_nbr)
        j = np.repeat(owner, n_nbr)
        first = np.cumsum(n_nbr) - n_nbr
        edge = np.repeat(start, n_nbr) + (np.arange(p.size) - np.repeat(first, n_nbr))
        l = tables.indices[edge]

        lhe = own[p] > tables.M[j, l]
        p, l, edge = p[lhe], l[lhe], edge[lhe]
        row = IterationTelemetry(t, neighbor_pairs=tables.neighbor_pairs)
        row.le_count = int(le.sum())
        row.lhe_count = int(np.unique(p).size)

        counters.proj_count += int(p.size)
        he = he_test_rows(X[p], tables.mid[edge], tables.affine[edge])
        p, l = p[he], l[he]
        row.he_count = int(np.unique(p).size)

        new_assign = assign.copy()
        if p.size:
            cand = np.sqrt(rowwise_sq_dists(X[p], C[l]))
            counters.add_dc(p.size)
            # Sequential scan over ascending neighbors with strict improvement
            # == the smallest candidate, lowest index among equal candidates.
            order = np.lexsort((l, cand, p))
            p, l, cand = p[order], l[order], cand[order]
            head = np.ones(p.size, dtype=bool)
            head[1:] = p[1:] != p[:-1]
            p, l, cand = p[head], l[head], cand[head]
            moves = cand < own[p]
            new_assign[p[moves]] = l[moves]
        return new_assign, row


def run_gkmeans(data, init, params: SolverParams | None = None,
                observer: Callable[[GkIterationSnapshot], None] | None = None) -> Solution:
    """Geometric k-means.

    From iteration 2 on, a point is re-examined only if it is farther from
    its centroid than half the distance to the nearest other centroid, and
    then only against neighbor centroids for which it passes both the
    half-distance check and the bisector-side projection test.

    ``observer`` (testing hook) is called once per accelerated iteration
    with a :class:`GkIterationSnapshot`, before any point is filtered.
    """
    X, init, params = _prepare(data, init, params)
    return _drive(X, init, params, _GkStepper(X, params, observer))


@dataclass
class NeighborCheck:
    neighbor: int
    lhe: bool
    he: bool = False
    distance: float | None = None


@dataclass
class PointClassification:
    le: bool
    checks: list[NeighborCheck]
    assign: int
    distance: float

    @property
    def lhe(self) -> bool:
        return any(c.lhe for c in self.checks)

    @property
    def he(self) -> bool:
        return any(c.he for c in self.checks)


def classify_point(data, point_idx: int, tables: NeighborTables, state: AssignState,
                   counters: OpCounters | None = None) -> PointClassification:
    """Replay the filtering decisions for one point, one neighbor at a time.

    ``state.own_dist[point_idx]`` must be current for ``tables.centers``;
    a stale value silently yields wrong decisions.  Neither ``state`` nor
    ``tables`` is modified.
    """
    x = np.asarray(data, dtype=np.float64)[point_idx]
    own = int(state.assign[point_idx])
    d_own = float(state.own_dist[point_idx])
    if not np.isfinite(d_own):
        raise DataError(f"own-centroid distance of point {point_idx} is not set")
    if d_own <= tables.s[own]:
        return PointClassification(True, [], own, d_own)
    best, best_d = own, d_own
    checks = []
    lo, hi = tables.indptr[own], tables.indptr[own + 1]
    for e in range(lo, hi):
        nbr = int(tables.indices[e])
        chk = NeighborCheck(nbr, bool(d_own > tables.M[own, nbr]))
        if chk.lhe:
            chk.he = he_test(tables.mid[e], tables.affine[e], x, counters)
            if chk.he:
                chk.distance = float(np.sqrt(rowwise_sq_dists(x, tables.centers[nbr])))
                if counters is not None:
                    counters.add_dc(1)
                if chk.distance < best_d:
                    best, best_d = nbr, chk.distance
        checks.append(chk)
    return PointClassification(False, checks, best, best_d)


# -- Hamerly -----------------------------------------------------------------------

def _half_min_center_dist(C, counters):
    k = C.shape[0]
    iu, ju = np.triu_indices(k, 1)
    half = 0.5 * np.sqrt(rowwise_sq_dists(C[iu], C[ju]))
    counters.add_dc(iu.size, "neighbor")
    s = np.full(k, np.inf)
    np.minimum.at(s, iu, half)
    np.minimum.at(s, ju, half)
    return s


def _second_smallest(D, chosen):
    rows = np.arange(D.shape[0])
    other = D.copy()
    other[rows, chosen] = np.inf
    return other.min(axis=1)


class _HamerlyStepper:
    """One upper bound to the own centroid, one lower bound to all others."""

    def __init__(self, X, params):
        self.X = X
        self.params = params
        self.counters = OpCounters()
        self.upper = None
        self.lower = None

    def first(self, cs):
        D = _all_dists(self.X, cs.centers, self.counters)
        assign = _full_assign(D, None, self.params.tie_break)
        self.upper = D[np.arange(D.shape[0]), assign]
        self.lower = _second_smallest(D, assign)
        return assign, IterationTelemetry(0)

    def step(self, cs, assign, t):
        X, C, counters = self.X, cs.centers, self.counters
        drift = cs.drift
        far = int(drift.argmax())
        longest = drift[far]
        second = np.delete(drift, far).max() if drift.size > 1 else 0.0
        self.upper += drift[assign]
        self.lower -= np.where(assign == far, second, longest)

        s = _half_min_center_dist(C, counters)
        bound = np.maximum(s[assign], self.lower)
        idx = np.flatnonzero(self.upper > bound)
        new_assign = assign.copy()
        if idx.size:
            self.upper[idx] = np.sqrt(rowwise_sq_dists(X[idx], C[assign[idx]]))
            counters.add_dc(idx.size, "le")
            idx = idx[self.upper[idx] > bound[idx]]
        if idx.size:
            D = _all_dists(X[idx], C, counters)
            chosen = _full_assign(D, assign[idx], self.params.tie_break)
            new_assign[idx] = chosen
            self.upper[idx] = D[np.arange(idx.size), chosen]
            self.lower[idx] = _second_smallest(D, chosen)
        return new_assign, IterationTelemetry(t)


def run_hamerly(data, init, params: SolverParams | None = None) -> Solution:
    """Hamerly's bounded k-means."""
    X, init, params = _prepare(data, init, params)
    return _drive(X, init, params, _HamerlyStepper(X, params))


SOLVERS = {"lloyd": run_lloyd, "gkmeans": run_gkmeans, "hamerly": run_hamerly}

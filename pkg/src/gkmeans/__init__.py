"""Exact accelerated k-means: Geometric k-means, Lloyd and Hamerly."""
from .core import (
    ConfigError,
    DataError,
    DimensionError,
    GKMeansError,
    OpCounters,
    dist,
    he_test,
    midpoint,
    sq_dist,
)
from .datagen import MixtureSpec, generate_gaussian_mixture, preset_spec
from .metrics import ari, pearson, savings_report, sse
from .neighbors import NeighborTables, compute_neighbor_tables
from .solvers import (
    AssignState,
    CentroidSet,
    IterationTelemetry,
    Solution,
    SolverParams,
    classify_point,
    init_kmeanspp,
    init_random,
    run_gkmeans,
    run_hamerly,
    run_lloyd,
    update_centroids,
)

__version__ = "0.1.0"

__all__ = [
    "AssignState", "CentroidSet", "ConfigError", "DataError", "DimensionError", "GKMeansError",
    "IterationTelemetry", "MixtureSpec", "NeighborTables", "OpCounters", "Solution",
    "SolverParams", "ari", "classify_point", "compute_neighbor_tables", "dist",
    "generate_gaussian_mixture", "he_test", "init_kmeanspp", "init_random", "midpoint",
    "pearson", "preset_spec", "run_gkmeans", "run_hamerly", "run_lloyd", "savings_report",
    "sq_dist", "sse", "update_centroids",
]

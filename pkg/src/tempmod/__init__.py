"""Exact and provably-approximate temporal modularity on graphs of small underlying treewidth."""

from .temporal_graph import Snapshot, TemporalGraph, build_temporal_graph
from .scoring import (
    Score,
    TemporalPartition,
    as_omega,
    kappa,
    loyalty,
    loyalty_at,
    normalizer,
    static_modularity,
    temporal_modularity,
    temporal_modularity_raw,
    temporal_modularity_sumform,
)
from .oracle import (
    BudgetExceeded,
    OracleResult,
    brute_force_c_modularity,
    brute_force_modularity,
    brute_force_static,
)

__version__ = "0.1.0"

__all__ = [
    "Snapshot",
    "TemporalGraph",
    "build_temporal_graph",
    "Score",
    "TemporalPartition",
    "as_omega",
    "kappa",
    "loyalty",
    "loyalty_at",
    "normalizer",
    "static_modularity",
    "temporal_modularity",
    "temporal_modularity_raw",
    "temporal_modularity_sumform",
    "BudgetExceeded",
    "OracleResult",
    "brute_force_c_modularity",
    "brute_force_modularity",
    "brute_force_static",
    "__version__",
]

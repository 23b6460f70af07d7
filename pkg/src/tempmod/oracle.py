"""Brute-force exact optimisers over all temporal partitions.

These are the ground truth for the tree DP and the window approximation.
Enumeration uses restricted-growth strings capped at c labels, which visits
each set partition into at most c parts exactly once (no label-permutation
duplicates).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .scoring import (
    Score,
    TemporalPartition,
    as_omega,
    normalizer,
    temporal_modularity_raw,
)
from .temporal_graph import Snapshot, TemporalGraph, build_temporal_graph

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """Raised instead of starting an enumeration that would exceed the budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration needs {required} assignments, budget is {budget}"
        )
        self.required = required
        self.budget = budget


@dataclass
class OracleResult:
    best_raw: Score
    best_normalized: Score
    witness: TemporalPartition


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    """Stirling numbers of the second kind S(n, 0..n)."""
    if n == 0:
        return (1,)
    prev = _stirling_row(n - 1)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        row[k] = k * (prev[k] if k < n else 0) + prev[k - 1]
    return tuple(row)


def rgs_count(cells: int, c: int) -> int:
    """Number of restricted-growth strings of length `cells` using at most c labels."""
    if cells == 0:
        return 1
    row = _stirling_row(cells)
    return sum(row[k] for k in range(1, min(c, cells) + 1))


def brute_force_c_modularity(
    graph: TemporalGraph, omega, c: int, budget: int = DEFAULT_BUDGET
) -> OracleResult:
    """Exact maximum of the non-normalised score over partitions into at most c parts."""
    w = as_omega(omega)
    if c < 1:
        raise ValueError("part count must be at least 1")
    n, T = graph.n, graph.T
    cells = n * T
    if cells == 0:
        witness = TemporalPartition(np.ones((n, T), dtype=np.int64), c=c)
        return OracleResult(Fraction(0), Fraction(0), witness)
    c_eff = min(c, cells)
    required = rgs_count(cells, c_eff)
    if required > budget:
        raise BudgetExceeded(required, budget)
    problem = kernels.prepare(graph, w)
    best_num, labels, seen = kernels.best_assignment(problem, c_eff)
    if seen != required:
        raise RuntimeError(f"enumerated {seen} assignments, expected {required}")
    witness = TemporalPartition(labels.astype(np.int64).reshape(n, T) + 1, c=c)
    raw = temporal_modularity_raw(graph, witness, w)
    if raw != Fraction(best_num, problem.den):
        raise RuntimeError("scoring kernel disagrees with direct evaluation")
    mu = normalizer(graph, w)
    normalized = raw / (2 * mu) if mu > 0 else Fraction(0)
    return OracleResult(raw, normalized, witness)


def brute_force_modularity(
    graph: TemporalGraph, omega, budget: int = DEFAULT_BUDGET
) -> OracleResult:
    """Unrestricted exact optimum; at most n*T parts can ever be used."""
    c = max(graph.n * graph.T, 1)
    return brute_force_c_modularity(graph, omega, c, budget=budget)


def brute_force_static(snapshot: Snapshot, budget: int = DEFAULT_BUDGET) -> Score:
    """Exact maximum static modularity of one snapshot, by set-partition enumeration."""
    triples = [(u, v, 1) for (u, v) in snapshot.active_edges]
    g1 = build_temporal_graph(snapshot.n, 1, triples)
    result = brute_force_c_modularity(g1, 0, max(snapshot.n, 1), budget=budget)
    return result.best_normalized

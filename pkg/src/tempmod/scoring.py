"""Exact-rational scoring of static and temporal partitions.

All scores are `fractions.Fraction`, so equality checks between independent
scoring paths (direct definition, pairwise sum form, tree DP, brute force)
are exact.  Snapshots with no edges contribute 0 to every snapshot sum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .temporal_graph import Snapshot, TemporalGraph, normalize_edge

Score = Fraction


def as_omega(value) -> Fraction:
    """Coerce a tuning-parameter value (int, str like "1/2", Fraction) to Fraction >= 0."""
    w = Fraction(value)
    if w < 0:
        raise ValueError(f"tuning parameter must be non-negative, got {w}")
    return w


class TemporalPartition:
    """Assignment of a part label in 1..c to every (vertex, time) pair."""

    def __init__(self, labels, c: int | None = None):
        arr = np.asarray(labels, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("labels must be an (n, T) array")
        self.n, self.T = arr.shape
        if arr.size and arr.min() < 1:
            raise ValueError("part labels must be at least 1")
        top = int(arr.max()) if arr.size else 0
        self.c = c if c is not None else max(top, 1)
        if top > self.c:
            raise ValueError(f"label {top} exceeds part count {self.c}")
        self.labels = arr
        self.labels.setflags(write=False)

    @classmethod
    def constant(cls, n: int, T: int, label: int = 1, c: int = 1) -> "TemporalPartition":
        return cls(np.full((n, T), label, dtype=np.int64), c=c)

    @classmethod
    def from_pairs(cls, pairs: Mapping[tuple[int, int], int], n: int, T: int,
                   c: int | None = None) -> "TemporalPartition":
        """Build from a total mapping (v, t) -> label, t in 1..T."""
        arr = np.zeros((n, T), dtype=np.int64)
        for (v, t), p in pairs.items():
            arr[v, t - 1] = p
        missing = np.argwhere(arr == 0)
        if missing.size:
            v, t0 = missing[0]
            raise ValueError(f"partition missing pair (vertex {v}, time {t0 + 1})")
        return cls(arr, c=c)

    def label(self, v: int, t: int) -> int:
        return int(self.labels[v, t - 1])

    def at_time(self, t: int) -> np.ndarray:
        return self.labels[:, t - 1]

    def relabeled(self, perm: Mapping[int, int]) -> "TemporalPartition":
        out = np.vectorize(lambda p: perm[p])(self.labels) if self.labels.size else self.labels
        return TemporalPartition(np.asarray(out, dtype=np.int64).reshape(self.labels.shape), c=self.c)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TemporalPartition)
                and self.c == other.c
                and np.array_equal(self.labels, other.labels))


def static_modularity(snapshot: Snapshot, parts: Sequence[int] | np.ndarray) -> Score:
    """Modularity of a vertex partition of one snapshot; 0 for edgeless snapshots."""
    if snapshot.m == 0:
        return Fraction(0)
    labels = np.asarray(parts)
    if labels.shape[0] != snapshot.n:
        raise ValueError("partition must assign a part to every vertex")
    mono = sum(1 for (u, v) in snapshot.active_edges if labels[u] == labels[v])
    vol_sq = 0
    for p in np.unique(labels):
        vol = int(snapshot.degrees[labels == p].sum())
        vol_sq += vol * vol
    m = snapshot.m
    return Fraction(mono, m) - Fraction(vol_sq, 4 * m * m)


def loyalty_at(partition: TemporalPartition, t: int) -> int:
    """Number of vertices keeping their part between times t and t+1."""
    if not 1 <= t <= partition.T - 1:
        raise ValueError(f"time {t} out of range 1..{partition.T - 1}")
    return int((partition.labels[:, t - 1] == partition.labels[:, t]).sum())


def loyalty(partition: TemporalPartition) -> int:
    """Total loyalty contribution over all consecutive time pairs."""
    if partition.T <= 1:
        return 0
    return int((partition.labels[:, :-1] == partition.labels[:, 1:]).sum())


def normalizer(graph: TemporalGraph, omega) -> Score:
    """Normalisation mass: half the tuning weight on all possible loyal steps plus all time-edges."""
    w = as_omega(omega)
    return w * graph.n * (graph.T - 1) / 2 + graph.total_time_edges()


def _snapshot_term(graph: TemporalGraph, labels_t: np.ndarray, t: int) -> Fraction:
    m = int(graph.m_t[t - 1])
    if m == 0:
        return Fraction(0)
    mono = sum(1 for (u, v) in graph.edges_at[t - 1] if labels_t[u] == labels_t[v])
    deg = graph.deg[:, t - 1]
    vol_sq = 0
    for p in np.unique(labels_t):
        vol = int(deg[labels_t == p].sum())
        vol_sq += vol * vol
    # sum over parts of 2 e(A) - vol(A)^2 / (2 m)
    return Fraction(4 * m * mono - vol_sq, 2 * m)


def temporal_modularity_raw(graph: TemporalGraph, partition: TemporalPartition, omega) -> Score:
    """Non-normalised temporal modularity of a partition."""
    w = as_omega(omega)
    if (partition.n, partition.T) != (graph.n, graph.T):
        raise ValueError("partition shape does not match graph")
    total = Fraction(0)
    for t in range(1, graph.T + 1):
        total += _snapshot_term(graph, partition.at_time(t), t)
    return total + w * loyalty(partition)


def temporal_modularity(graph: TemporalGraph, partition: TemporalPartition, omega) -> Score:
    """Normalised temporal modularity; 0 when the normalisation mass is 0."""
    mu = normalizer(graph, omega)
    if mu == 0:
        return Fraction(0)
    return temporal_modularity_raw(graph, partition, omega) / (2 * mu)


def kappa(graph: TemporalGraph, omega, u: int, u2: int, t: int, t2: int) -> Score:
    """Pairwise weight of ((u, t), (u2, t2)) in the sum form; independent of the partition."""
    w = as_omega(omega)
    mu = normalizer(graph, w)
    num = Fraction(0)
    if t == t2 - 1 and u == u2:
        num += w
    if t == t2:
        m = int(graph.m_t[t - 1])
        if m > 0:
            inside = 1 if (u != u2 and normalize_edge(u, u2) in graph.edges_at[t - 1]) else 0
            num += inside - Fraction(int(graph.deg[u, t - 1]) * int(graph.deg[u2, t - 1]), 2 * m)
    if mu == 0:
        return Fraction(0)
    return num / (2 * mu)


def temporal_modularity_sumform(graph: TemporalGraph, partition: TemporalPartition, omega) -> Score:
    """Temporal modularity evaluated as the double sum of delta * kappa over ordered cell pairs.

    Pairs with t2 not in {t, t+1} have kappa identically zero and are skipped;
    each contributing pair still goes through `kappa`.
    """
    w = as_omega(omega)
    total = Fraction(0)
    lab = partition.labels
    for t in range(1, graph.T + 1):
        for u in range(graph.n):
            pu = lab[u, t - 1]
            for u2 in range(graph.n):
                if pu == lab[u2, t - 1]:
                    total += kappa(graph, w, u, u2, t, t)
            if t < graph.T and pu == lab[u, t]:
                total += kappa(graph, w, u, u, t, t + 1)
    return total

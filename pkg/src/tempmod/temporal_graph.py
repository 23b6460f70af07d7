"""Temporal graph model: a simple underlying graph whose edges carry active-time sets.

Vertices are 0-indexed, times are 1-indexed (1..T).  Graphs are immutable after
construction, so they can be shared freely between solvers and worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Snapshot:
    """The static graph active at one timestep, on the full vertex set."""

    t: int
    n: int
    active_edges: tuple[Edge, ...]
    degrees: np.ndarray  # shape (n,), int64
    m: int

    def degree(self, v: int) -> int:
        return int(self.degrees[v])


@dataclass(frozen=True, eq=False)
class TemporalGraph:
    """Underlying simple graph plus, per edge, the non-empty set of active times."""

    n: int
    T: int
    edges: tuple[Edge, ...]
    activity: Mapping[Edge, frozenset[int]]
    # Derived, filled in by __post_init__.
    deg: np.ndarray = field(default=None, repr=False)  # (n, T) int64, deg[v, t-1]
    m_t: np.ndarray = field(default=None, repr=False)  # (T,) int64
    edges_at: tuple[tuple[Edge, ...], ...] = field(default=None, repr=False)

    def __post_init__(self):
        deg = np.zeros((self.n, self.T), dtype=np.int64)
        per_time: list[list[Edge]] = [[] for _ in range(self.T)]
        for (u, v) in self.edges:
            for t in self.activity[(u, v)]:
                deg[u, t - 1] += 1
                deg[v, t - 1] += 1
                per_time[t - 1].append((u, v))
        object.__setattr__(self, "deg", deg)
        object.__setattr__(self, "m_t", np.array([len(es) for es in per_time], dtype=np.int64))
        object.__setattr__(self, "edges_at", tuple(tuple(sorted(es)) for es in per_time))

    @property
    def m(self) -> int:
        """Number of underlying edges."""
        return len(self.edges)

    def total_time_edges(self) -> int:
        return int(self.m_t.sum())

    def snapshot(self, t: int) -> Snapshot:
        if not 1 <= t <= self.T:
            raise ValueError(f"time {t} out of range 1..{self.T}")
        return Snapshot(
            t=t,
            n=self.n,
            active_edges=self.edges_at[t - 1],
            degrees=self.deg[:, t - 1].copy(),
            m=int(self.m_t[t - 1]),
        )

    def restrict(self, a: int, b: int) -> "TemporalGraph":
        """Restriction to the time interval [a, b], re-indexed to lifetime b-a+1.

        Edges whose activity set becomes empty are dropped; the vertex set is kept
        unchanged so partitions splice across adjacent windows.
        """
        if not (1 <= a <= b <= self.T):
            raise ValueError(f"invalid interval [{a}, {b}] for lifetime {self.T}")
        activity: dict[Edge, frozenset[int]] = {}
        for e, times in self.activity.items():
            inside = frozenset(t - a + 1 for t in times if a <= t <= b)
            if inside:
                activity[e] = inside
        edges = tuple(sorted(activity))
        return TemporalGraph(n=self.n, T=b - a + 1, edges=edges, activity=activity)

    def time_edge_triples(self) -> list[tuple[int, int, int]]:
        """All active (u, v, t) triples in canonical (u, v, t) order."""
        out = []
        for (u, v) in self.edges:
            for t in sorted(self.activity[(u, v)]):
                out.append((u, v, t))
        return out


def build_temporal_graph(n: int, T: int, time_edges: Iterable[tuple[int, int, int]]) -> TemporalGraph:
    """Build a temporal graph from (u, v, t) triples.

    Rejects self-loops, out-of-range vertices or times, and duplicate
    (edge, time) entries, naming the offending triple.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    if T < 1:
        raise ValueError(f"lifetime must be at least 1, got {T}")
    activity: dict[Edge, set[int]] = {}
    for (u, v, t) in time_edges:
        if u == v:
            raise ValueError(f"self-loop in time-edge ({u}, {v}, {t})")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"vertex out of range 0..{n - 1} in time-edge ({u}, {v}, {t})")
        if not 1 <= t <= T:
            raise ValueError(f"time out of range 1..{T} in time-edge ({u}, {v}, {t})")
        e = normalize_edge(u, v)
        times = activity.setdefault(e, set())
        if t in times:
            raise ValueError(f"duplicate time-edge ({u}, {v}, {t})")
        times.add(t)
    frozen = {e: frozenset(ts) for e, ts in activity.items()}
    return TemporalGraph(n=n, T=T, edges=tuple(sorted(frozen)), activity=frozen)

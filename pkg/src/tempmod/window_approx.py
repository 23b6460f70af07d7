"""Approximation by splitting time into short windows solved exactly.

The best split of [1, T] into windows of length at most d is found by an
interval DP over suffixes; each window is solved exactly with the tree DP on
the graph restricted to that window.  One nice decomposition of the full
underlying graph is reused for every window (restriction only removes edges,
which keeps any decomposition valid).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .dp_engine import exact_c_modularity
from .scoring import Score, as_omega, normalizer
from .temporal_graph import TemporalGraph
from .treedec import NiceTreeDecomposition, heuristic_tree_decomposition, make_nice

WindowSolver = Callable[[TemporalGraph, int, int], Score]


@dataclass(frozen=True)
class WindowPlan:
    """Chosen breakpoints 0 = b_0 < ... < b_l = T and the exact score of each window."""

    breakpoints: tuple[int, ...]
    window_scores: tuple[Score, ...]
    total: Score


@dataclass(frozen=True)
class ApproxResult:
    raw: Score
    normalized: Score
    guarantee_factor: Score
    plan: WindowPlan


def guarantee_factor(c: int, d: int) -> Score:
    return 1 - (Fraction(1, c) + Fraction(2, d))


def windowed_optimum(
    graph: TemporalGraph,
    omega,
    c: int,
    d: int,
    ntd: NiceTreeDecomposition | None = None,
    window_solver: WindowSolver | None = None,
    canonicalize: bool = False,
) -> ApproxResult:
    """Best sum of exact window optima over all splits into windows of length <= d.

    Ties in the split recurrence prefer the shortest first window.  The default
    window solver runs the exact tree DP on each restriction; a replacement
    must return the same exact value for (graph, a, b).
    """
    w = as_omega(omega)
    if c < 1 or d < 1:
        raise ValueError("part count and window length must be at least 1")
    T = graph.T
    if window_solver is None:
        if ntd is None:
            ntd = make_nice(heuristic_tree_decomposition(graph.n, graph.edges))

        def window_solver(gr: TemporalGraph, a: int, b: int) -> Score:
            return exact_c_modularity(gr.restrict(a, b), w, c, ntd=ntd, canonicalize=canonicalize)[0]

    base: dict[tuple[int, int], Score] = {}

    def solve(a: int, b: int) -> Score:
        if (a, b) not in base:
            base[(a, b)] = window_solver(graph, a, b)
        return base[(a, b)]

    best: list[Score | None] = [None] * (T + 2)
    first_end: list[int] = [0] * (T + 2)
    best[T + 1] = Fraction(0)
    for s in range(T, 0, -1):
        if T - s + 1 <= d:
            best[s] = solve(s, T)
            first_end[s] = T
            continue
        top = None
        for i in range(d):
            cand = solve(s, s + i) + best[s + i + 1]
            if top is None or cand > top:
                top = cand
                first_end[s] = s + i
        best[s] = top

    breakpoints = [0]
    scores = []
    s = 1
    while s <= T:
        e = first_end[s]
        breakpoints.append(e)
        scores.append(base[(s, e)])
        s = e + 1
    raw = best[1]
    if sum(scores, Fraction(0)) != raw:
        raise RuntimeError("window plan does not reproduce the DP value")
    mu = normalizer(graph, w)
    normalized = raw / (2 * mu) if mu > 0 else Fraction(0)
    return ApproxResult(
        raw=raw,
        normalized=normalized,
        guarantee_factor=guarantee_factor(c, d),
        plan=WindowPlan(tuple(breakpoints), tuple(scores), raw),
    )


def approx_temporal_modularity(
    graph: TemporalGraph,
    omega,
    c: int,
    d: int,
    ntd: NiceTreeDecomposition | None = None,
    canonicalize: bool = False,
) -> ApproxResult:
    """End-to-end approximation: build a decomposition if needed, split, solve, normalise."""
    if ntd is None:
        ntd = make_nice(heuristic_tree_decomposition(graph.n, graph.edges))
    return windowed_optimum(graph, omega, c, d, ntd=ntd, canonicalize=canonicalize)

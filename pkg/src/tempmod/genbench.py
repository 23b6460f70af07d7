"""Seeded generation of bounded-treewidth temporal graphs and an experiment harness.

Instances are partial k-trees: a random k-tree is grown by attaching each new
vertex to a uniformly chosen existing k-clique, then every (edge, time) pair
survives independently with probability p_active.  The k-tree construction
yields a width-k decomposition witness for free; dropping edges cannot
invalidate it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .dp_engine import exact_c_modularity
from .oracle import DEFAULT_BUDGET, brute_force_modularity, rgs_count
from .scoring import Score, as_omega
from .temporal_graph import TemporalGraph, build_temporal_graph
from .treedec import TreeDecomposition, make_nice
from .window_approx import windowed_optimum

CSV_COLUMNS = [
    "instance_id",
    "n",
    "T",
    "width",
    "c",
    "d",
    "omega",
    "oracle_raw",
    "exact_raw",
    "approx_raw",
    "ratio",
    "t_oracle_ms",
    "t_exact_ms",
    "t_approx_ms",
    "error",
]


@dataclass(frozen=True)
class GenSpec:
    n: int
    k: int
    T: int
    p_active: Fraction
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "p_active", Fraction(self.p_active))
        if not 0 <= self.p_active <= 1:
            raise ValueError(f"activation probability must be in [0, 1], got {self.p_active}")
        if not 0 <= self.k < self.n:
            raise ValueError(f"need 0 <= k < n, got k={self.k}, n={self.n}")
        if self.T < 1:
            raise ValueError(f"lifetime must be at least 1, got {self.T}")

    @property
    def instance_id(self) -> str:
        p = self.p_active
        return f"n{self.n}_k{self.k}_T{self.T}_p{p.numerator}-{p.denominator}_s{self.seed}"


@dataclass
class ExperimentRow:
    instance_id: str
    n: int
    T: int
    width: int
    c: int
    d: int
    omega: Fraction
    oracle_raw: Score | None
    exact_raw: Score | None
    approx_raw: Score | None
    ratio: Score | None
    t_oracle_ms: float | None
    t_exact_ms: float | None
    t_approx_ms: float | None
    error: str


def gen_partial_ktree_temporal(spec: GenSpec) -> tuple[TemporalGraph, TreeDecomposition]:
    """Deterministic (seeded) partial k-tree instance plus its width-k witness decomposition."""
    rng = np.random.default_rng(spec.seed)
    n, k, T = spec.n, spec.k, spec.T

    base = list(range(k + 1))
    edges = [(u, v) for u, v in combinations(base, 2)]
    bags: dict[int, frozenset[int]] = {1: frozenset(base)}
    tree_edges: list[tuple[int, int]] = []
    cliques: list[tuple[int, ...]] = [tuple(s) for s in combinations(base, k)]

    def node_of(v: int) -> int:
        return 1 if v <= k else v - k + 1

    for v in range(k + 1, n):
        cliq = cliques[int(rng.integers(len(cliques)))]
        for u in cliq:
            edges.append((u, v))
        bid = v - k + 1
        bags[bid] = frozenset(cliq) | {v}
        tree_edges.append((bid, node_of(max(cliq)) if cliq else 1))
        if k >= 1:
            for rest in combinations(cliq, k - 1):
                cliques.append(tuple(sorted(rest + (v,))))

    edges = sorted((min(u, v), max(u, v)) for (u, v) in edges)
    p = float(spec.p_active)
    draws = rng.random((len(edges), T))
    triples = [
        (u, v, t + 1)
        for idx, (u, v) in enumerate(edges)
        for t in range(T)
        if draws[idx, t] < p
    ]
    graph = build_temporal_graph(n, T, triples)
    witness = TreeDecomposition(n=n, bags=bags, edges=tree_edges)
    return graph, witness


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1000.0


def run_experiment(
    specs: Iterable[GenSpec],
    params: Iterable[tuple[int, int, object]],
    budget: int = DEFAULT_BUDGET,
) -> list[ExperimentRow]:
    """Run oracle (within budget), exact DP and window approximation over a grid.

    One row per (instance, (c, d, omega)); solver failures land in the row's
    error column and the run continues.
    """
    params = [(c, d, as_omega(w)) for (c, d, w) in params]
    rows: list[ExperimentRow] = []
    for spec in specs:
        graph, witness = gen_partial_ktree_temporal(spec)
        width = witness.width()
        ntd = make_nice(witness)
        for (c, d, omega) in params:
            errors: list[str] = []
            oracle_raw = exact_raw = approx_raw = ratio = None
            t_oracle = t_exact = t_approx = None
            cells = graph.n * graph.T
            if rgs_count(cells, cells) <= budget:
                try:
                    res, t_oracle = _timed(lambda: brute_force_modularity(graph, omega, budget))
                    oracle_raw = res.best_raw
                except Exception as exc:  # noqa: BLE001 - recorded per row
                    errors.append(f"oracle: {exc}")
            try:
                (exact_raw, _), t_exact = _timed(lambda: exact_c_modularity(graph, omega, c, ntd=ntd))
            except Exception as exc:  # noqa: BLE001
                errors.append(f"exact: {exc}")
            try:
                res, t_approx = _timed(lambda: windowed_optimum(graph, omega, c, d, ntd=ntd))
                approx_raw = res.raw
            except Exception as exc:  # noqa: BLE001
                errors.append(f"approx: {exc}")
            if oracle_raw is not None and approx_raw is not None and oracle_raw != 0:
                ratio = approx_raw / oracle_raw
            rows.append(
                ExperimentRow(
                    instance_id=spec.instance_id,
                    n=spec.n,
                    T=spec.T,
                    width=width,
                    c=c,
                    d=d,
                    omega=omega,
                    oracle_raw=oracle_raw,
                    exact_raw=exact_raw,
                    approx_raw=approx_raw,
                    ratio=ratio,
                    t_oracle_ms=t_oracle,
                    t_exact_ms=t_exact,
                    t_approx_ms=t_approx,
                    error="; ".join(errors),
                )
            )
    return rows


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    def cell(value) -> str:
        if value is None:
            return ""
        if isinstance(value, Fraction):
            return str(value)
        if isinstance(value, float):
            return f"{value:.3f}"
        return str(value)

    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(cell(getattr(row, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"

"""Shared generators and hypothesis strategies for the test suite."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from tempmod import TemporalPartition, build_temporal_graph

OMEGAS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(7, 3))


def random_temporal_graph(rng, n, T, p=0.5):
    triples = [
        (u, v, t)
        for u in range(n)
        for v in range(u + 1, n)
        for t in range(1, T + 1)
        if rng.random() < p
    ]
    return build_temporal_graph(n, T, triples)


def random_partition(rng, n, T, c):
    return TemporalPartition(rng.integers(1, c + 1, size=(n, T)), c=c)


def with_nonempty_snapshots(rng, n, T, p=0.5):
    """Random graph where every snapshot has at least one active edge."""
    graph = random_temporal_graph(rng, n, T, p)
    triples = graph.time_edge_triples()
    for t in range(1, T + 1):
        if graph.m_t[t - 1] == 0:
            u = int(rng.integers(0, n - 1))
            v = int(rng.integers(u + 1, n))
            triples.append((u, v, t))
    return build_temporal_graph(n, T, triples)


def knn_repeated(side: int, T: int):
    """Complete bipartite graph with `side` vertices per class, active at all times."""
    triples = [
        (i, side + j, t) for i in range(side) for j in range(side) for t in range(1, T + 1)
    ]
    return build_temporal_graph(2 * side, T, triples)


def anti_aligned_bipartition(side: int, T: int) -> TemporalPartition:
    """Both classes as parts at each time, with fresh labels per timestep (zero loyalty)."""
    labels = np.zeros((2 * side, T), dtype=np.int64)
    for t in range(T):
        labels[:side, t] = 2 * t + 1
        labels[side:, t] = 2 * t + 2
    return TemporalPartition(labels)


@st.composite
def temporal_graphs(draw, max_n=5, max_t=3):
    n = draw(st.integers(1, max_n))
    T = draw(st.integers(1, max_t))
    triples = []
    for u in range(n):
        for v in range(u + 1, n):
            times = draw(st.sets(st.integers(1, T), max_size=T))
            triples.extend((u, v, t) for t in sorted(times))
    return build_temporal_graph(n, T, triples)


@st.composite
def graph_partition_pairs(draw, max_n=5, max_t=3, max_c=4):
    graph = draw(temporal_graphs(max_n=max_n, max_t=max_t))
    c = draw(st.integers(1, max_c))
    flat = draw(
        st.lists(
            st.integers(1, c),
            min_size=graph.n * graph.T,
            max_size=graph.n * graph.T,
        )
    )
    labels = np.array(flat, dtype=np.int64).reshape(graph.n, graph.T)
    return graph, TemporalPartition(labels, c=c)


omegas = st.sampled_from(OMEGAS)

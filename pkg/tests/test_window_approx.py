from fractions import Fraction

import numpy as np

from helpers import random_temporal_graph
from tempmod import brute_force_modularity, build_temporal_graph
from tempmod.dp_engine import exact_c_modularity
from tempmod.window_approx import approx_temporal_modularity, guarantee_factor, windowed_optimum


def all_splits(T, max_gap):
    """All breakpoint sequences 0 = t0 < ... < tl = T with gaps at most max_gap."""
    def rec(pos):
        if pos == T:
            yield []
            return
        for nxt in range(pos + 1, min(pos + max_gap, T) + 1):
            for rest in rec(nxt):
                yield [nxt] + rest
    for seq in rec(0):
        yield [0] + seq


def oracle_solver(omega):
    def solve(graph, a, b):
        return brute_force_modularity(graph.restrict(a, b), omega).best_raw
    return solve


def test_whole_lifetime_window(p3):
    res = windowed_optimum(p3, 1, 2, 5)
    assert res.plan.breakpoints == (0, 2)
    assert res.raw == exact_c_modularity(p3, 1, 2)[0]


def test_p3_single_part(p3):
    res = approx_temporal_modularity(p3, 1, 1, 2)
    assert res.raw == 3
    assert res.normalized == Fraction(1, 3)
    assert res.guarantee_factor == -1


def test_singleton_windows():
    rng = np.random.default_rng(1)
    for _ in range(6):
        graph = random_temporal_graph(rng, 4, 3)
        res = windowed_optimum(graph, 1, 2, 1)
        assert res.plan.breakpoints == (0, 1, 2, 3)
        expected = sum(
            (exact_c_modularity(graph.restrict(t, t), 1, 2)[0] for t in (1, 2, 3)),
            Fraction(0),
        )
        assert res.raw == expected


def test_edgeless_full_loyalty():
    g = build_temporal_graph(4, 2, [])
    res = approx_temporal_modularity(g, 1, 1, 5)
    assert res.raw == 4
    assert res.normalized == 1


def test_tie_breaks_prefer_short_first_window():
    g = build_temporal_graph(2, 3, [])  # every split of equal coverage scores the same
    res = windowed_optimum(g, 1, 1, 2)
    assert res.plan.breakpoints == (0, 1, 3)


def test_plan_reproduces_raw():
    rng = np.random.default_rng(2)
    for _ in range(8):
        graph = random_temporal_graph(rng, 4, 4, p=0.4)
        res = windowed_optimum(graph, Fraction(1, 2), 2, 2)
        assert sum(res.plan.window_scores, Fraction(0)) == res.raw
        gaps = [b - a for a, b in zip(res.plan.breakpoints, res.plan.breakpoints[1:])]
        assert all(1 <= gap <= 2 for gap in gaps)
        for (a, b), score in zip(
            zip(res.plan.breakpoints, res.plan.breakpoints[1:]), res.plan.window_scores
        ):
            assert score == exact_c_modularity(graph.restrict(a + 1, b), Fraction(1, 2), 2)[0]


def test_window_solver_injection_matches_default():
    rng = np.random.default_rng(3)
    for _ in range(5):
        graph = random_temporal_graph(rng, 3, 3, p=0.5)
        c = graph.n * graph.T
        via_oracle = windowed_optimum(graph, 1, c, 2, window_solver=oracle_solver(1))
        default = windowed_optimum(graph, 1, c, 2, canonicalize=True)
        assert via_oracle.raw == default.raw
        assert via_oracle.plan == default.plan


def test_guarantee_factor_values():
    assert guarantee_factor(3, 4) == Fraction(1, 6)
    assert guarantee_factor(1, 1) == -2


def test_split_sums_never_beat_optimum():
    rng = np.random.default_rng(4)
    for _ in range(6):
        graph = random_temporal_graph(rng, 3, 3, p=0.5)
        full = brute_force_modularity(graph, 1).best_raw
        for seq in all_splits(graph.T, graph.T):
            total = sum(
                (brute_force_modularity(graph.restrict(a + 1, b), 1).best_raw
                 for a, b in zip(seq, seq[1:])),
                Fraction(0),
            )
            assert total <= full


def test_short_split_achieves_most_of_optimum():
    # some split with gaps <= 2d keeps at least (1 - 1/d) of the optimum
    rng = np.random.default_rng(5)
    for _ in range(6):
        graph = random_temporal_graph(rng, 3, 4, p=0.5)
        full = brute_force_modularity(graph, 1).best_raw
        for d in (1, 2):
            best = max(
                sum(
                    (brute_force_modularity(graph.restrict(a + 1, b), 1).best_raw
                     for a, b in zip(seq, seq[1:])),
                    Fraction(0),
                )
                for seq in all_splits(graph.T, 2 * d)
            )
            assert best >= (1 - Fraction(1, d)) * full


def test_sandwich_bounds():
    rng = np.random.default_rng(6)
    for _ in range(6):
        graph = random_temporal_graph(rng, 3, 3, p=0.5)
        full = brute_force_modularity(graph, 1).best_raw
        c = graph.n * graph.T
        for d in (2, 3):
            res = windowed_optimum(graph, 1, c, d, window_solver=oracle_solver(1))
            assert (1 - (Fraction(1, c) + Fraction(2, d))) * full <= res.raw <= full

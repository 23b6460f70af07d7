from fractions import Fraction

import numpy as np
import pytest

from helpers import random_temporal_graph
from tempmod import brute_force_c_modularity, build_temporal_graph
from tempmod import kernels


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("TEMPMOD_NO_NUMBA", "1")
    assert not kernels.numba_enabled()
    monkeypatch.setenv("TEMPMOD_NO_NUMBA", "0")
    assert kernels.numba_enabled()
    monkeypatch.delenv("TEMPMOD_NO_NUMBA")
    assert kernels.numba_enabled()


def test_paths_agree(monkeypatch):
    rng = np.random.default_rng(1)
    for _ in range(12):
        n, T = int(rng.integers(2, 5)), int(rng.integers(1, 4))
        graph = random_temporal_graph(rng, n, T)
        c = int(rng.integers(1, 4))
        w = (0, Fraction(1, 2), Fraction(7, 3))[int(rng.integers(0, 3))]
        jit = brute_force_c_modularity(graph, w, c)
        monkeypatch.setenv("TEMPMOD_NO_NUMBA", "1")
        plain = brute_force_c_modularity(graph, w, c)
        monkeypatch.delenv("TEMPMOD_NO_NUMBA")
        assert jit.best_raw == plain.best_raw
        assert (jit.witness.labels == plain.witness.labels).all()


def test_enumeration_count():
    g = build_temporal_graph(3, 1, [(0, 1, 1)])
    problem = kernels.prepare(g, Fraction(1))
    _, _, count = kernels.best_assignment(problem, 2)
    assert count == 4  # S(3,1) + S(3,2)


def test_batched_numpy_enumeration():
    # batch boundary handling: force a tiny batch size
    g = build_temporal_graph(4, 2, [(0, 1, 1), (1, 2, 2), (2, 3, 1)])
    problem = kernels.prepare(g, Fraction(1, 2))
    best, labels, count = kernels._best_numpy(problem, 3, batch=7)
    bestj, labelsj, countj = kernels.best_assignment(problem, 3)
    assert (best, count) == (int(bestj), countj)
    assert (labels == labelsj).all()


def test_prepare_guards_overflow():
    g = build_temporal_graph(3, 2, [(0, 1, 1), (1, 2, 2)])
    with pytest.raises(ValueError, match="int64"):
        kernels.prepare(g, Fraction(2**40, 2**40 + 1))

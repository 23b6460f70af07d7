import numpy as np
import pytest

from tempmod import genbench
from tempmod.treedec import (
    NiceTreeDecomposition,
    TreeDecomposition,
    elimination_order,
    from_elimination_order,
    heuristic_tree_decomposition,
    make_nice,
    validate,
)


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


class TestHeuristic:
    def test_path_has_width_one(self):
        td = heuristic_tree_decomposition(5, path_edges(5))
        assert td.width() == 1
        assert validate(td, 5, path_edges(5)) == []

    def test_triangle(self):
        tri = [(0, 1), (1, 2), (0, 2)]
        td = heuristic_tree_decomposition(3, tri)
        assert td.width() == 2
        assert validate(td, 3, tri) == []

    def test_edgeless(self):
        td = heuristic_tree_decomposition(4, [])
        assert td.width() == 0
        assert validate(td, 4, []) == []

    def test_min_degree_strategy(self):
        edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
        td = heuristic_tree_decomposition(4, edges, strategy="min_degree")
        assert validate(td, 4, edges) == []
        with pytest.raises(ValueError):
            heuristic_tree_decomposition(4, edges, strategy="nope")

    def test_explicit_order(self):
        edges = path_edges(4)
        td = from_elimination_order(4, edges, [3, 2, 1, 0])
        assert validate(td, 4, edges) == []
        with pytest.raises(ValueError):
            from_elimination_order(4, edges, [0, 0, 1, 2])


class TestValidate:
    def test_missing_edge(self):
        td = TreeDecomposition(n=2, bags={1: frozenset({0}), 2: frozenset({1})}, edges=[(1, 2)])
        problems = validate(td, 2, [(0, 1)])
        assert any("edge (0, 1)" in p for p in problems)

    def test_disconnected_occurrence(self):
        td = TreeDecomposition(
            n=3,
            bags={1: frozenset({0, 1}), 2: frozenset({1, 2}), 3: frozenset({0})},
            edges=[(1, 2), (2, 3)],
        )
        problems = validate(td, 3, [(0, 1), (1, 2)])
        assert any("vertex 0" in p for p in problems)

    def test_uncovered_vertex(self):
        td = TreeDecomposition(n=2, bags={1: frozenset({0})}, edges=[])
        assert any("vertex 1" in p for p in validate(td, 2, []))

    def test_not_a_tree(self):
        td = TreeDecomposition(
            n=1, bags={1: frozenset({0}), 2: frozenset({0}), 3: frozenset({0})},
            edges=[(1, 2), (2, 3), (3, 1)],
        )
        assert validate(td, 1, []) != []


class TestMakeNice:
    def test_k2_single_bag_chain(self):
        td = TreeDecomposition(n=2, bags={1: frozenset({0, 1})}, edges=[])
        nice = make_nice(td)
        kinds = [(nd.kind, nd.vertex) for nd in nice.nodes]
        assert kinds == [
            ("leaf", None),
            ("introduce", 0),
            ("introduce", 1),
            ("forget", 0),
            ("forget", 1),
        ]
        assert nice.validate(2, [(0, 1)]) == []

    def test_path_width_preserved(self):
        edges = path_edges(3)
        td = heuristic_tree_decomposition(3, edges)
        nice = make_nice(td)
        assert nice.width() == td.width() == 1
        assert nice.validate(3, edges) == []

    def test_generated_partial_two_trees(self):
        for seed in range(10):
            spec = genbench.GenSpec(n=12, k=2, T=1, p_active=1, seed=seed)
            graph, witness = genbench.gen_partial_ktree_temporal(spec)
            assert validate(witness, graph.n, graph.edges) == []
            nice = make_nice(witness)
            assert nice.validate(graph.n, graph.edges) == []
            assert nice.width() <= witness.width() <= 2

    def test_node_count_linear(self):
        spec = genbench.GenSpec(n=30, k=3, T=1, p_active=1, seed=0)
        graph, witness = genbench.gen_partial_ktree_temporal(spec)
        nice = make_nice(witness)
        width = witness.width()
        assert len(nice.nodes) <= 4 * (width + 1) * graph.n

    def test_empty_graph(self):
        td = heuristic_tree_decomposition(0, [])
        nice = make_nice(td)
        assert nice.validate(0, []) == []
        assert [nd.kind for nd in nice.nodes] == ["leaf"]


class TestNiceValidate:
    def test_detects_bad_root(self):
        td = TreeDecomposition(n=1, bags={1: frozenset({0})}, edges=[])
        nice = make_nice(td)
        broken = NiceTreeDecomposition(nodes=nice.nodes[:-1], root=len(nice.nodes) - 2)
        assert broken.validate(1, []) != []

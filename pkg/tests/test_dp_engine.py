from fractions import Fraction

import numpy as np
import pytest

from helpers import random_temporal_graph
from reference_dp import full_product_best, uncollapsed_exact
from tempmod import brute_force_c_modularity, build_temporal_graph, temporal_modularity_raw
from tempmod.dp_engine import (
    StateTable,
    exact_c_modularity,
    forget,
    introduce,
    join,
    leaf_table,
    root_score,
)
from tempmod.treedec import from_elimination_order, heuristic_tree_decomposition, make_nice


def nice_for(graph, order=None):
    if order is None:
        td = heuristic_tree_decomposition(graph.n, graph.edges)
    else:
        td = from_elimination_order(graph.n, graph.edges, order)
    return make_nice(td)


class TestLeaf:
    @pytest.mark.parametrize("c,T", [(2, 3), (1, 1), (3, 2)])
    def test_single_zero_entry(self, c, T):
        table = leaf_table(c, T, 1)
        assert len(table) == 1
        pi, beta, alpha, gamma = next(table.entries())
        assert pi == {}
        assert all(v == 0 for v in beta.values())
        assert (alpha, gamma) == (0, 0)


class TestIntroduce:
    def test_spawn_counts(self):
        assert len(introduce(leaf_table(2, 1, 1), 0)) == 2
        assert len(introduce(leaf_table(2, 2, 1), 0)) == 4

    def test_payload_copied(self):
        table = introduce(leaf_table(3, 2, 1), 5)
        for pi, beta, alpha, gamma in table.entries():
            assert set(pi) == {(5, 1), (5, 2)}
            assert all(v == 0 for v in beta.values())
            assert (alpha, gamma) == (0, 0)

    def test_rejects_present_vertex(self):
        table = introduce(leaf_table(2, 1, 1), 0)
        with pytest.raises(ValueError):
            introduce(table, 0)


class TestForget:
    def test_edge_counted_when_labels_match(self, k2):
        table = introduce(introduce(leaf_table(2, 1, 1), 0), 1)
        out = forget(table, 1, k2)
        entries = {
            (pi[(0, 1)], beta[(1, 1)], beta[(2, 1)]): alpha
            for pi, beta, alpha, _ in out.entries()
        }
        # the edge counts exactly when the forgotten endpoint shared its label,
        # and v's degree mass lands in the part it was assigned to
        assert entries == {(1, 1, 0): 1, (1, 0, 1): 0, (2, 1, 0): 0, (2, 0, 1): 1}

    def test_loyalty_counted(self):
        g = build_temporal_graph(1, 2, [])
        table = introduce(leaf_table(2, 2, 1), 0)
        out = forget(table, 0, g)
        gammas = sorted(gamma for _, _, _, gamma in out.entries())
        assert gammas[-1] == 1  # the loyal assignments survive the payload merge
        assert len(out) == 1  # all keys collapse onto the empty bag and zero mass

    def test_isolated_vertex_leaves_beta_alone(self):
        g = build_temporal_graph(2, 1, [])
        table = introduce(introduce(leaf_table(2, 1, 1), 0), 1)
        out = forget(table, 1, g)
        for _, beta, alpha, _ in out.entries():
            assert alpha == 0
            assert all(v == 0 for v in beta.values())


class TestJoin:
    def test_identity_against_leaf_side(self, p3):
        left = forget(introduce(leaf_table(2, 2, 1), 0), 0, p3)
        right = leaf_table(2, 2, 1)
        out = join(left, right)
        assert len(out) == len(left)
        assert sorted(map(tuple, out.beta.tolist())) == sorted(map(tuple, left.beta.tolist()))

    def test_mismatched_labellings_drop(self):
        a = introduce(leaf_table(2, 1, 1), 0)
        b = introduce(leaf_table(2, 1, 1), 0)
        a = StateTable(a.bag, a.c, a.T, a.omega, a.pi[:1], a.beta[:1], a.alpha[:1], a.gamma[:1])
        b = StateTable(b.bag, b.c, b.T, b.omega, b.pi[1:], b.beta[1:], b.alpha[1:], b.gamma[1:])
        assert len(join(a, b)) == 0

    def test_payloads_add(self):
        g = build_temporal_graph(1, 3, [])
        side = forget(introduce(leaf_table(1, 3, 1), 0), 0, g)
        assert side.gamma.tolist() == [2]
        out = join(side, side)
        assert out.gamma.tolist() == [4]


class TestRoot:
    def test_handmade_loyalty_entry(self):
        g = build_temporal_graph(4, 2, [])
        table = StateTable(
            bag=(), c=1, T=2, omega=Fraction(1),
            pi=np.zeros((1, 0), dtype=np.int8),
            beta=np.zeros((1, 2), dtype=np.int32),
            alpha=np.zeros(1, dtype=np.int64),
            gamma=np.array([4], dtype=np.int64),
        )
        assert root_score(table, g) == 4

    def test_rejects_nonempty_bag(self, k2):
        table = introduce(leaf_table(2, 1, 1), 0)
        with pytest.raises(ValueError):
            root_score(table, k2)


class TestExact:
    def test_single_part_is_loyalty_mass(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            n, T = int(rng.integers(1, 5)), int(rng.integers(1, 4))
            graph = random_temporal_graph(rng, n, T)
            score, _ = exact_c_modularity(graph, Fraction(3, 2), 1)
            assert score == Fraction(3, 2) * n * (T - 1)

    def test_k2_two_parts(self, k2):
        score, _ = exact_c_modularity(k2, 1, 2)
        assert score == 0

    def test_matches_oracle(self):
        rng = np.random.default_rng(20)
        for _ in range(30):
            n, T = int(rng.integers(2, 6)), int(rng.integers(1, 4))
            c = int(rng.integers(1, 4))
            w = (0, Fraction(1, 2), 1)[int(rng.integers(0, 3))]
            graph = random_temporal_graph(rng, n, T, p=0.45)
            score, witness = exact_c_modularity(graph, w, c, emit_witness=True)
            assert score == brute_force_c_modularity(graph, w, c).best_raw
            assert temporal_modularity_raw(graph, witness, w) == score
            assert witness.c == c

    def test_decomposition_independence(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n = int(rng.integers(3, 6))
            graph = random_temporal_graph(rng, n, 2, p=0.5)
            ntd1 = nice_for(graph)
            ntd2 = nice_for(graph, order=list(rng.permutation(n)))
            s1, _ = exact_c_modularity(graph, 1, 2, ntd=ntd1)
            s2, _ = exact_c_modularity(graph, 1, 2, ntd=ntd2)
            assert s1 == s2

    def test_monotone_in_parts(self):
        rng = np.random.default_rng(22)
        graph = random_temporal_graph(rng, 4, 2, p=0.6)
        values = [exact_c_modularity(graph, 1, c)[0] for c in (1, 2, 3, 4)]
        assert values == sorted(values)

    def test_collapse_matches_uncollapsed_reference(self):
        rng = np.random.default_rng(23)
        for _ in range(8):
            n, T = int(rng.integers(2, 4)), int(rng.integers(1, 3))
            graph = random_temporal_graph(rng, n, T, p=0.6)
            ntd = nice_for(graph)
            for c in (1, 2):
                collapsed, _ = exact_c_modularity(graph, Fraction(1, 2), c, ntd=ntd)
                assert collapsed == uncollapsed_exact(graph, Fraction(1, 2), c, ntd)
                assert collapsed == full_product_best(graph, Fraction(1, 2), c)

    def test_canonicalize_changes_nothing(self):
        # star underlying graph guarantees join nodes after nicification
        star = build_temporal_graph(5, 2, [(0, i, t) for i in range(1, 5) for t in (1, 2)])
        ntd = nice_for(star)
        assert any(nd.kind == "join" for nd in ntd.nodes)
        rng = np.random.default_rng(24)
        graphs = [star] + [random_temporal_graph(rng, 4, 2, p=0.5) for _ in range(6)]
        for graph in graphs:
            for c in (1, 2, 3):
                plain, _ = exact_c_modularity(graph, 1, c)
                canon, _ = exact_c_modularity(graph, 1, c, canonicalize=True)
                assert plain == canon

    def test_witness_forces_canonicalize_off(self, p3):
        score, witness = exact_c_modularity(p3, 1, 2, emit_witness=True, canonicalize=True)
        assert witness is not None
        assert temporal_modularity_raw(p3, witness, 1) == score

    def test_numba_and_numpy_join_agree(self, monkeypatch):
        star = build_temporal_graph(6, 2, [(0, i, t) for i in range(1, 6) for t in (1, 2)])
        jit, _ = exact_c_modularity(star, Fraction(1, 2), 2)
        monkeypatch.setenv("TEMPMOD_NO_NUMBA", "1")
        plain, _ = exact_c_modularity(star, Fraction(1, 2), 2)
        assert jit == plain

    def test_rejects_invalid_decomposition(self, p3):
        wrong = nice_for(build_temporal_graph(3, 2, []))  # misses p3's edges
        with pytest.raises(ValueError, match="invalid decomposition"):
            exact_c_modularity(p3, 1, 2, ntd=wrong)

    def test_rejects_bad_part_count(self, p3):
        with pytest.raises(ValueError):
            exact_c_modularity(p3, 1, 0)

    def test_state_table_sizes_within_bound(self):
        rng = np.random.default_rng(25)
        graph = random_temporal_graph(rng, 4, 2, p=0.6)
        ntd = nice_for(graph)
        c, T = 2, graph.T
        m = graph.m
        tables = {}
        for i in ntd.postorder():
            nd = ntd.nodes[i]
            if nd.kind == "leaf":
                tab = leaf_table(c, T, Fraction(1))
            elif nd.kind == "introduce":
                tab = introduce(tables[nd.children[0]], nd.vertex)
            elif nd.kind == "forget":
                tab = forget(tables[nd.children[0]], nd.vertex, graph)
            else:
                tab = join(tables[nd.children[0]], tables[nd.children[1]])
            tables[i] = tab
            assert len(tab) <= c ** (len(nd.bag) * T) * (2 * m + 1) ** (c * T)
        assert root_score(tables[ntd.root], graph) == exact_c_modularity(graph, 1, c)[0]

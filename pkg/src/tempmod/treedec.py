"""Tree decompositions of the underlying static graph.

Provides a min-fill elimination-ordering heuristic (valid, not necessarily
minimum width), a structural validator that reports the first violations with
witnesses, and nicification into a rooted decomposition with empty root/leaf
bags and introduce/forget/join nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Edge = tuple[int, int]

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


@dataclass
class TreeDecomposition:
    n: int
    bags: dict[int, frozenset[int]]
    edges: list[tuple[int, int]]

    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


@dataclass(frozen=True)
class NiceNode:
    kind: str
    vertex: int | None
    bag: tuple[int, ...]
    children: tuple[int, ...]


@dataclass
class NiceTreeDecomposition:
    """Rooted nice decomposition; children always precede parents in `nodes`."""

    nodes: list[NiceNode]
    root: int

    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def postorder(self) -> range:
        return range(len(self.nodes))

    def validate(self, n: int, graph_edges: Iterable[Edge]) -> list[str]:
        problems: list[str] = []
        seen_as_child: set[int] = set()
        for i, nd in enumerate(self.nodes):
            for ch in nd.children:
                if not 0 <= ch < i:
                    problems.append(f"node {i} references child {ch} out of order")
                elif ch in seen_as_child:
                    problems.append(f"node {ch} has two parents")
                else:
                    seen_as_child.add(ch)
            bag = set(nd.bag)
            if nd.kind == LEAF:
                if nd.children or bag:
                    problems.append(f"leaf node {i} must have no children and an empty bag")
            elif nd.kind == INTRODUCE:
                if len(nd.children) != 1:
                    problems.append(f"introduce node {i} needs exactly one child")
                else:
                    cb = set(self.nodes[nd.children[0]].bag)
                    if nd.vertex in cb or bag != cb | {nd.vertex}:
                        problems.append(f"introduce node {i} bag relation violated for vertex {nd.vertex}")
            elif nd.kind == FORGET:
                if len(nd.children) != 1:
                    problems.append(f"forget node {i} needs exactly one child")
                else:
                    cb = set(self.nodes[nd.children[0]].bag)
                    if nd.vertex not in cb or bag != cb - {nd.vertex}:
                        problems.append(f"forget node {i} bag relation violated for vertex {nd.vertex}")
            elif nd.kind == JOIN:
                if len(nd.children) != 2:
                    problems.append(f"join node {i} needs exactly two children")
                else:
                    b1 = self.nodes[nd.children[0]].bag
                    b2 = self.nodes[nd.children[1]].bag
                    if nd.bag != b1 or nd.bag != b2:
                        problems.append(f"join node {i} children bags differ from its bag")
            else:
                problems.append(f"node {i} has unknown kind {nd.kind!r}")
        if self.nodes[self.root].bag:
            problems.append("root bag is not empty")
        if len(seen_as_child) != len(self.nodes) - 1:
            problems.append("nice decomposition is not a single rooted tree")
        if problems:
            return problems

        # Underlying Definition-3 semantics plus disjointness of join subtrees.
        below: list[set[int]] = [set() for _ in self.nodes]
        for i, nd in enumerate(self.nodes):
            acc = set(nd.bag)
            for ch in nd.children:
                acc |= below[ch]
            below[i] = acc
            if nd.kind == JOIN:
                c1, c2 = nd.children
                overlap = (below[c1] - set(nd.bag)) & (below[c2] - set(nd.bag))
                if overlap:
                    problems.append(
                        f"join node {i} children share forgotten vertices {sorted(overlap)}"
                    )
        plain = TreeDecomposition(
            n=n,
            bags={i: frozenset(nd.bag) for i, nd in enumerate(self.nodes)},
            edges=[(i, ch) for i, nd in enumerate(self.nodes) for ch in nd.children],
        )
        problems.extend(validate(plain, n, graph_edges))
        return problems


def _adjacency(n: int, edges: Iterable[Edge]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for (u, v) in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _fill_in(adj: dict[int, set[int]], v: int) -> int:
    nb = sorted(adj[v])
    missing = 0
    for i in range(len(nb)):
        for j in range(i + 1, len(nb)):
            if nb[j] not in adj[nb[i]]:
                missing += 1
    return missing


def elimination_order(n: int, edges: Iterable[Edge], strategy: str = "min_fill") -> list[int]:
    """Greedy elimination order; ties broken by lowest vertex id."""
    if strategy not in ("min_fill", "min_degree"):
        raise ValueError(f"unknown strategy {strategy!r}")
    adj = _adjacency(n, edges)
    order: list[int] = []
    while adj:
        if strategy == "min_fill":
            v = min(sorted(adj), key=lambda x: _fill_in(adj, x))
        else:
            v = min(sorted(adj), key=lambda x: len(adj[x]))
        nb = adj.pop(v)
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        order.append(v)
    return order


def from_elimination_order(n: int, edges: Iterable[Edge], order: Sequence[int]) -> TreeDecomposition:
    """Decomposition whose bags are the elimination neighbourhoods of `order`."""
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the vertices")
    if n == 0:
        return TreeDecomposition(n=0, bags={1: frozenset()}, edges=[])
    adj = _adjacency(n, edges)
    pos = {v: i for i, v in enumerate(order)}
    bags: dict[int, frozenset[int]] = {}
    tree_edges: list[tuple[int, int]] = []
    roots: list[int] = []
    for i, v in enumerate(order):
        nb = set(adj[v])
        bags[i + 1] = frozenset(nb | {v})
        if nb:
            u = min(nb, key=lambda x: pos[x])
            tree_edges.append((i + 1, pos[u] + 1))
        else:
            roots.append(i + 1)
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        del adj[v]
    for a, b in zip(roots, roots[1:]):
        tree_edges.append((a, b))
    return TreeDecomposition(n=n, bags=bags, edges=tree_edges)


def heuristic_tree_decomposition(
    n: int, edges: Iterable[Edge], strategy: str = "min_fill"
) -> TreeDecomposition:
    edges = list(edges)
    return from_elimination_order(n, edges, elimination_order(n, edges, strategy))


def validate(td: TreeDecomposition, n: int, graph_edges: Iterable[Edge]) -> list[str]:
    """Check Definition-3 properties plus tree-ness; returns violations with witnesses."""
    problems: list[str] = []
    ids = set(td.bags)
    if not ids:
        return ["decomposition has no bags"]
    neigh: dict[int, set[int]] = {b: set() for b in ids}
    seen_edges = set()
    for (a, b) in td.edges:
        if a not in ids or b not in ids:
            problems.append(f"tree edge ({a}, {b}) references unknown bag")
            continue
        if a == b or (min(a, b), max(a, b)) in seen_edges:
            problems.append(f"tree edge ({a}, {b}) is a loop or duplicate")
            continue
        seen_edges.add((min(a, b), max(a, b)))
        neigh[a].add(b)
        neigh[b].add(a)
    if len(seen_edges) != len(ids) - 1:
        problems.append(f"{len(ids)} bags need {len(ids) - 1} tree edges, got {len(seen_edges)}")
    start = next(iter(ids))
    reach = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in neigh[x]:
            if y not in reach:
                reach.add(y)
                stack.append(y)
    if reach != ids:
        problems.append("decomposition tree is not connected")
    if problems:
        return problems

    occurrences: dict[int, list[int]] = {v: [] for v in range(n)}
    for b, bag in td.bags.items():
        for v in bag:
            if not 0 <= v < n:
                problems.append(f"bag {b} contains unknown vertex {v}")
            else:
                occurrences[v].append(b)
    for v in range(n):
        if not occurrences[v]:
            problems.append(f"vertex {v} is not covered by any bag")
    for (u, v) in graph_edges:
        if not any(u in bag and v in bag for bag in td.bags.values()):
            problems.append(f"edge ({u}, {v}) is not inside any bag")
    for v in range(n):
        occ = set(occurrences[v])
        if len(occ) <= 1:
            continue
        start = next(iter(occ))
        reach = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in neigh[x]:
                if y in occ and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != occ:
            problems.append(f"vertex {v} occurs in a disconnected set of bags")
    return problems


class _NiceBuilder:
    def __init__(self):
        self.nodes: list[NiceNode] = []

    def add(self, kind: str, vertex: int | None, bag: Iterable[int], children: tuple[int, ...]) -> int:
        self.nodes.append(NiceNode(kind, vertex, tuple(sorted(bag)), children))
        return len(self.nodes) - 1

    def chain_to(self, top: int, target: frozenset[int]) -> int:
        """Forget surplus vertices then introduce missing ones, one node each."""
        bag = set(self.nodes[top].bag)
        for v in sorted(bag - target):
            bag.discard(v)
            top = self.add(FORGET, v, bag, (top,))
        for v in sorted(target - bag):
            bag.add(v)
            top = self.add(INTRODUCE, v, bag, (top,))
        return top


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Nicify a valid decomposition without increasing its width.

    The root and all leaves get empty bags; adjacent bags are linked by
    single-vertex forget/introduce chains and branching is folded into
    binary joins.
    """
    root_id = min(td.bags)
    neigh: dict[int, set[int]] = {b: set() for b in td.bags}
    for (a, b) in td.edges:
        neigh[a].add(b)
        neigh[b].add(a)
    builder = _NiceBuilder()

    def build(b: int, parent: int) -> int:
        children = sorted(x for x in neigh[b] if x != parent)
        bag = td.bags[b]
        if not children:
            top = builder.add(LEAF, None, (), ())
            return builder.chain_to(top, bag)
        tops = [builder.chain_to(build(ch, b), bag) for ch in children]
        cur = tops[0]
        for nxt in tops[1:]:
            cur = builder.add(JOIN, None, bag, (cur, nxt))
        return cur

    top = build(root_id, -1)
    top = builder.chain_to(top, frozenset())
    if builder.nodes[top].bag:
        raise AssertionError("nicification did not end at an empty bag")
    return NiceTreeDecomposition(nodes=builder.nodes, root=top)

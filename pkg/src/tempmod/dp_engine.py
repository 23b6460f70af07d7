"""Exact non-normalised temporal c-modularity by dynamic programming over a nice tree decomposition.

A state table at a decomposition node maps keys (bag labelling over all times,
per-(part, time) degree mass of forgotten vertices) to the single best payload
(time-edges inside parts with a forgotten endpoint, loyalty steps of forgotten
vertices) under the linear score 2*edges + omega*loyalty.  Keeping only the
dominant payload per key is lossless: every transition adds amounts that depend
only on the key and the graph, never on the accumulated payload, and the root
objective is linear in the payload for a fixed key.  The quadratic degree-mass
term is charged once, at the empty-bag root.

Tables are flat numpy arrays; merging is a single lexicographic sort over
radix-packed key columns, so the engine stays exact (integer arithmetic
throughout, rationals only at the root) while the hot paths are vectorised.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .scoring import Score, TemporalPartition, as_omega
from .temporal_graph import TemporalGraph, normalize_edge
from .treedec import FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, heuristic_tree_decomposition, make_nice

_INT64_GUARD = 2**62
_MAX_SPAWN = 50_000_000
_JOIN_GRID_CAP = 1 << 23


@dataclass
class TableOrigin:
    """Back-pointers from each table row to the child rows it came from."""

    kind: str
    vertex: int | None = None
    vpos: int | None = None
    src: np.ndarray | None = None
    src2: np.ndarray | None = None
    child: int | None = None
    child2: int | None = None


@dataclass
class StateTable:
    """Collapsed DP states of one decomposition node.

    Row layout: `pi[:, j*T + t]` is the 0-based label of the j-th bag vertex
    (bag sorted ascending) at time t+1; `beta[:, p*T + t]` is the forgotten
    degree mass of part p at time t+1.
    """

    bag: tuple[int, ...]
    c: int
    T: int
    omega: Fraction
    pi: np.ndarray
    beta: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    origin: TableOrigin | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.alpha)

    def entries(self):
        """Readable view for tests: (pi map, beta map, alpha, gamma) with 1-based labels/times."""
        T = self.T
        for i in range(len(self)):
            pi_map = {
                (u, t + 1): int(self.pi[i, j * T + t]) + 1
                for j, u in enumerate(self.bag)
                for t in range(T)
            }
            beta_map = {
                (p + 1, t + 1): int(self.beta[i, p * T + t])
                for p in range(self.c)
                for t in range(T)
            }
            yield pi_map, beta_map, int(self.alpha[i]), int(self.gamma[i])


def _pack_columns(mat: np.ndarray, base: int) -> list[np.ndarray]:
    """Radix-pack digit columns into int64 chunks for fast lexicographic sorting.

    Chunks stay below 2**61 so that two packed codes can be added without
    overflow (digit-wise sums below `base` never carry between digits).
    """
    depth = mat.shape[1]
    if depth == 0:
        return []
    if base < 2:
        return [np.zeros(len(mat), dtype=np.int64)]
    per = max(1, int(61 // math.log2(base)))
    out = []
    for s in range(0, depth, per):
        code = np.zeros(len(mat), dtype=np.int64)
        for j in range(s, min(s + per, depth)):
            code = code * base + mat[:, j]
        out.append(code)
    return out


def _first_per_group(key_cols: list[np.ndarray], skey: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Row index of the best (max skey, then max gamma) entry per distinct key tuple.

    When the value ranges allow, keys and payload fold into one int64 so a single
    argsort does the grouping; otherwise a multi-key lexsort is used.  Ties keep
    the earliest row, so the result is deterministic for a given input order.
    """
    n = len(skey)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    mins, spans = [], []
    total = 1
    for col in key_cols:
        lo, hi = int(col.min()), int(col.max())
        mins.append(lo)
        spans.append(hi - lo + 1)
        total *= spans[-1]
    smin, smax = int(skey.min()), int(skey.max())
    gmin, gmax = int(gamma.min()), int(gamma.max())
    sspan, gspan = smax - smin + 1, gmax - gmin + 1
    if total * sspan * gspan < _INT64_GUARD:
        combo = np.zeros(n, dtype=np.int64)
        for col, lo, span in zip(key_cols, mins, spans):
            combo = combo * span + (col - lo)
        combo = combo * sspan + (smax - skey)
        combo = combo * gspan + (gmax - gamma)
        order = np.argsort(combo, kind="stable")
        group = combo[order] // (sspan * gspan)
        diff = np.empty(n, dtype=bool)
        diff[0] = True
        diff[1:] = group[1:] != group[:-1]
        return order[diff]
    order = np.lexsort(tuple([-gamma, -skey] + list(key_cols)[::-1]))
    diff = np.zeros(n, dtype=bool)
    diff[0] = True
    for col in key_cols:
        s = col[order]
        diff[1:] |= s[1:] != s[:-1]
    return order[diff]


def _merge(bag, c, T, omega, pi, beta, alpha, gamma):
    """Indices of the dominant payload per (pi, beta) key.

    Dominance maximises 2*alpha + omega*gamma; ties prefer larger gamma (equal
    score and gamma force equal alpha, so the survivor per key is unique).
    """
    wn, wd = omega.numerator, omega.denominator
    skey = 2 * alpha * wd + wn * gamma
    pcols = _pack_columns(pi, max(int(pi.max()) + 1, 2) if pi.size else 2)
    bcols = _pack_columns(beta, max(int(beta.max()) + 1, 2) if beta.size else 2)
    key_cols = pcols + bcols
    if not key_cols:
        key_cols = [np.zeros(len(alpha), dtype=np.int64)]
    return _first_per_group(key_cols, skey, gamma)


def leaf_table(c: int, T: int, omega) -> StateTable:
    """The single all-zero state of an empty leaf bag."""
    w = as_omega(omega)
    return StateTable(
        bag=(),
        c=c,
        T=T,
        omega=w,
        pi=np.zeros((1, 0), dtype=np.int8),
        beta=np.zeros((1, c * T), dtype=np.int32),
        alpha=np.zeros(1, dtype=np.int64),
        gamma=np.zeros(1, dtype=np.int64),
        origin=TableOrigin(kind=LEAF),
    )


def _assignments(c: int, T: int) -> np.ndarray:
    rows = c**T
    out = np.zeros((rows, T), dtype=np.int8)
    for t in range(T):
        block = c ** (T - 1 - t)
        out[:, t] = (np.arange(rows) // block) % c
    return out


def introduce(table: StateTable, v: int) -> StateTable:
    """Spawn one entry per labelling of (v, 1..T); beta and payload are copied."""
    if v in table.bag:
        raise ValueError(f"vertex {v} already in bag {table.bag}")
    c, T = table.c, table.T
    spawn = c**T
    if len(table) * spawn > _MAX_SPAWN:
        raise ValueError(
            f"introduce of {v} would create {len(table) * spawn} states (limit {_MAX_SPAWN})"
        )
    bag2 = tuple(sorted(table.bag + (v,)))
    j = bag2.index(v)
    assigns = _assignments(c, T)
    K = len(table)
    pi_rep = np.repeat(table.pi, spawn, axis=0)
    blocks = np.tile(assigns, (K, 1))
    new_pi = np.concatenate([pi_rep[:, : j * T], blocks, pi_rep[:, j * T :]], axis=1)
    return StateTable(
        bag=bag2,
        c=c,
        T=T,
        omega=table.omega,
        pi=new_pi.astype(np.int8),
        beta=np.repeat(table.beta, spawn, axis=0),
        alpha=np.repeat(table.alpha, spawn),
        gamma=np.repeat(table.gamma, spawn),
        origin=TableOrigin(kind=INTRODUCE, vertex=v, src=np.repeat(np.arange(K), spawn)),
    )


def forget(table: StateTable, v: int, graph: TemporalGraph) -> StateTable:
    """Drop v from the key, charging its edges, degree mass and loyalty to the payload."""
    if v not in table.bag:
        raise ValueError(f"vertex {v} not in bag {table.bag}")
    c, T = table.c, table.T
    j = table.bag.index(v)
    K = len(table)
    vlab = table.pi[:, j * T : (j + 1) * T].astype(np.int64)
    new_pi = np.delete(table.pi, np.s_[j * T : (j + 1) * T], axis=1)
    bag2 = tuple(u for u in table.bag if u != v)

    alpha = table.alpha.copy()
    for ju, u in enumerate(table.bag):
        if u == v:
            continue
        times = graph.activity.get(normalize_edge(u, v))
        if not times:
            continue
        for t in times:
            t0 = t - 1
            alpha += table.pi[:, ju * T + t0] == vlab[:, t0]

    gamma = table.gamma.copy()
    if T > 1:
        gamma += (vlab[:, :-1] == vlab[:, 1:]).sum(axis=1)

    beta = table.beta.copy()
    rows = np.arange(K)
    for t0 in range(T):
        d = int(graph.deg[v, t0])
        if d:
            beta[rows, vlab[:, t0] * T + t0] += d

    kept = _merge(bag2, c, T, table.omega, new_pi, beta, alpha, gamma)
    return StateTable(
        bag=bag2,
        c=c,
        T=T,
        omega=table.omega,
        pi=new_pi[kept],
        beta=beta[kept],
        alpha=alpha[kept],
        gamma=gamma[kept],
        origin=TableOrigin(kind=FORGET, vertex=v, vpos=j, src=kept),
    )


def _row_codes(mat1: np.ndarray, mat2: np.ndarray, base: int) -> tuple[np.ndarray, np.ndarray]:
    """One int64 id per row such that equal rows (across both matrices) share an id."""
    chunks1 = _pack_columns(mat1, base)
    chunks2 = _pack_columns(mat2, base)
    if not chunks1:
        return np.zeros(len(mat1), dtype=np.int64), np.zeros(len(mat2), dtype=np.int64)
    if len(chunks1) == 1:
        return chunks1[0], chunks2[0]
    stacked = np.vstack([np.column_stack(chunks1), np.column_stack(chunks2)])
    _, inv = np.unique(stacked, axis=0, return_inverse=True)
    inv = inv.reshape(-1).astype(np.int64)
    return inv[: len(mat1)], inv[len(mat1) :]


def join(table1: StateTable, table2: StateTable) -> StateTable:
    """Combine children with identical bags: match on the bag labelling, add everything else.

    The pairwise product is built on packed int64 codes only (beta codes add
    digit-wise without carries since per-(part, time) masses are bounded by the
    snapshot degree sums); full rows are materialised just for the survivors.
    """
    if table1.bag != table2.bag or table1.c != table2.c or table1.T != table2.T:
        raise ValueError("join children must agree on bag, parts and lifetime")
    if table1.omega != table2.omega:
        raise ValueError("join children must agree on the tuning parameter")
    c, T = table1.c, table1.T
    K1, K2 = len(table1), len(table2)
    code1, code2 = _row_codes(table1.pi, table2.pi, max(c, 2))
    o1 = np.argsort(code1, kind="stable")
    o2 = np.argsort(code2, kind="stable")
    u1, off1, cnt1 = np.unique(code1[o1], return_index=True, return_counts=True)
    u2, off2, cnt2 = np.unique(code2[o2], return_index=True, return_counts=True)
    common, i1, i2 = np.intersect1d(u1, u2, assume_unique=True, return_indices=True)
    if len(common) == 0:
        empty = TableOrigin(kind=JOIN, src=np.zeros(0, dtype=np.int64), src2=np.zeros(0, dtype=np.int64))
        return StateTable(
            bag=table1.bag, c=c, T=T, omega=table1.omega,
            pi=table1.pi[:0], beta=table1.beta[:0],
            alpha=table1.alpha[:0], gamma=table1.gamma[:0], origin=empty,
        )
    g1, g2 = cnt1[i1].astype(np.int64), cnt2[i2].astype(np.int64)
    wn, wd = table1.omega.numerator, table1.omega.denominator
    skey1 = 2 * table1.alpha * wd + wn * table1.gamma
    skey2 = 2 * table2.alpha * wd + wn * table2.gamma

    l_r = _join_pairs_fast(table1, table2, o1, o2, off1[i1], g1, off2[i2], g2, skey1, skey2)
    if l_r is None:
        total = int((g1 * g2).sum())
        if total > _MAX_SPAWN:
            raise ValueError(f"join would create {total} candidate states (limit {_MAX_SPAWN})")
        gid = np.repeat(np.arange(len(common)), g1 * g2)
        starts = np.concatenate([[0], np.cumsum(g1 * g2)[:-1]])
        within = np.arange(total, dtype=np.int64) - np.repeat(starts, g1 * g2)
        left = o1[off1[i1][gid] + within // g2[gid]]
        right = o2[off2[i2][gid] + within % g2[gid]]
        bbase = int(table1.beta.max(initial=0)) + int(table2.beta.max(initial=0)) + 2
        b1 = _pack_columns(table1.beta, bbase)
        b2 = _pack_columns(table2.beta, bbase)
        beta_cols = [x[left] + y[right] for x, y in zip(b1, b2)]
        skey = skey1[left] + skey2[right]
        gamma = table1.gamma[left] + table2.gamma[right]
        kept = _first_per_group([code1[left]] + beta_cols, skey, gamma)
        l, r = left[kept], right[kept]
    else:
        l, r = l_r
    return StateTable(
        bag=table1.bag,
        c=c,
        T=T,
        omega=table1.omega,
        pi=table1.pi[l],
        beta=table1.beta[l] + table2.beta[r],
        alpha=table1.alpha[l] + table2.alpha[r],
        gamma=table1.gamma[l] + table2.gamma[r],
        origin=TableOrigin(kind=JOIN, src=l, src2=r),
    )


def _join_pairs_fast(table1, table2, o1, o2, offs1, cnts1, offs2, cnts2, skey1, skey2):
    """Numba scatter-max over combined reduced beta codes; None if not applicable.

    Keys drop the last part's beta digits: per (part, time) masses sum to the
    node's fixed per-time forgotten degree mass, so the remaining digits
    determine the full profile.
    """
    if not kernels.numba_enabled():
        return None
    c, T = table1.c, table1.T
    red = (c - 1) * T
    bbase = int(table1.beta.max(initial=0)) + int(table2.beta.max(initial=0)) + 2
    r1 = _pack_columns(table1.beta[:, :red], bbase)
    r2 = _pack_columns(table2.beta[:, :red], bbase)
    if len(r1) > 1:
        return None
    rc1 = r1[0] if r1 else np.zeros(len(table1), dtype=np.int64)
    rc2 = r2[0] if r2 else np.zeros(len(table2), dtype=np.int64)
    grid = int(rc1.max(initial=0)) + int(rc2.max(initial=0)) + 1
    if grid > _JOIN_GRID_CAP:
        return None
    gmin1, gmax1 = int(table1.gamma.min()), int(table1.gamma.max())
    gmin2, gmax2 = int(table2.gamma.min()), int(table2.gamma.max())
    gspan = (gmax1 + gmax2) - (gmin1 + gmin2) + 1
    if (int(skey1.max()) + int(skey2.max()) + 1) * gspan >= _INT64_GUARD:
        return None
    val1 = skey1 * gspan + (table1.gamma - gmin1)
    val2 = skey2 * gspan + (table2.gamma - gmin2)
    out_l, out_r = kernels.join_reduce(
        offs1.astype(np.int64),
        cnts1,
        offs2.astype(np.int64),
        cnts2,
        rc1[o1],
        val1[o1],
        rc2[o2],
        val2[o2],
        grid,
    )
    return o1[out_l], o2[out_r]


def _root_best(table: StateTable, graph: TemporalGraph) -> tuple[Score, int]:
    if table.bag:
        raise ValueError("root table must have an empty bag")
    if len(table) == 0:
        raise ValueError("root table is empty")
    c, T = table.c, table.T
    m_t = [int(x) for x in graph.m_t]
    doubled = [2 * m for m in m_t if m > 0]
    lcm = math.lcm(*doubled) if doubled else 1
    wn, wd = table.omega.numerator, table.omega.denominator
    volc = [wd * (lcm // (2 * m_t[t])) if m_t[t] > 0 else 0 for t in range(T)]
    den = lcm * wd

    bound = 2 * int(table.alpha.max()) * den + wn * lcm * int(table.gamma.max())
    for p in range(c):
        for t in range(T):
            if volc[t]:
                b = 2 * m_t[t]
                bound += volc[t] * b * b
    if bound < _INT64_GUARD:
        coef = np.tile(np.array(volc, dtype=np.int64), c)
        b64 = table.beta.astype(np.int64)
        nums = 2 * den * table.alpha + (wn * lcm) * table.gamma - (b64 * b64) @ coef
        i = int(np.argmax(nums))
        return Fraction(int(nums[i]), den), i

    best = None
    besti = -1
    betas = table.beta.tolist()
    for i in range(len(table)):
        num = 2 * den * int(table.alpha[i]) + wn * lcm * int(table.gamma[i])
        row = betas[i]
        for p in range(c):
            for t in range(T):
                vc = volc[t]
                if vc:
                    b = row[p * T + t]
                    num -= vc * b * b
        if best is None or num > best:
            best, besti = num, i
    return Fraction(best, den), besti


def root_score(table: StateTable, graph: TemporalGraph) -> Score:
    """Maximum non-normalised c-modularity over the root table entries."""
    return _root_best(table, graph)[0]


def canonical_form(table: StateTable) -> StateTable:
    """Relabel every row's parts into first-appearance order, identically in pi and beta.

    Labels not used in the bag labelling are ordered by their beta blocks, so
    states differing only by a global part relabelling collapse to one row.
    Purely a state-count lever; values are unchanged.
    """
    c, T, K = table.c, table.T, len(table)
    if K == 0 or c <= 1:
        return table
    rows = np.arange(K)
    map_tbl = np.full((K, c), -1, dtype=np.int64)
    nxt = np.zeros(K, dtype=np.int64)
    new_pi = np.empty_like(table.pi)
    for col in range(table.pi.shape[1]):
        lab = table.pi[:, col].astype(np.int64)
        fresh = map_tbl[rows, lab] < 0
        if fresh.any():
            map_tbl[rows[fresh], lab[fresh]] = nxt[fresh]
            nxt[fresh] += 1
        new_pi[:, col] = map_tbl[rows, lab].astype(np.int8)

    blocks = table.beta.reshape(K * c, T)
    _, block_rank = np.unique(blocks, axis=0, return_inverse=True)
    rank = block_rank.reshape(K, c).astype(np.int64)
    unused = map_tbl < 0
    sortkey = np.where(unused, rank, np.int64(-1))
    order = np.argsort(-sortkey, axis=1, kind="stable")
    for r in range(c):
        p_r = order[:, r]
        is_un = unused[rows, p_r]
        if not is_un.any():
            break
        map_tbl[rows[is_un], p_r[is_un]] = nxt[is_un]
        nxt[is_un] += 1

    inv_tbl = np.empty((K, c), dtype=np.int64)
    inv_tbl[rows[:, None], map_tbl] = np.tile(np.arange(c, dtype=np.int64), (K, 1))
    gather = np.repeat(inv_tbl * T, T, axis=1) + np.tile(np.arange(T), c)
    new_beta = np.take_along_axis(table.beta, gather, axis=1)

    kept = _merge(table.bag, c, T, table.omega, new_pi, new_beta, table.alpha, table.gamma)
    return StateTable(
        bag=table.bag,
        c=c,
        T=T,
        omega=table.omega,
        pi=new_pi[kept],
        beta=new_beta[kept],
        alpha=table.alpha[kept],
        gamma=table.gamma[kept],
        origin=None,
    )


def _expand_orbits(table: StateTable) -> StateTable:
    """All label-permutation images of every row (inverse of canonicalisation, up to dedup)."""
    c, T = table.c, table.T
    if c > 7:
        raise ValueError("canonical joins enumerate label permutations; use c <= 7")
    pis, betas = [], []
    for perm in itertools.permutations(range(c)):
        sigma = np.array(perm, dtype=np.int8)
        inv = np.argsort(sigma)
        pis.append(sigma[table.pi] if table.pi.size else table.pi)
        gather = np.repeat(inv * T, T) + np.tile(np.arange(T), c)
        betas.append(table.beta[:, gather])
    reps = math.factorial(c)
    pi = np.vstack(pis)
    beta = np.vstack(betas)
    alpha = np.tile(table.alpha, reps)
    gamma = np.tile(table.gamma, reps)
    kept = _merge(table.bag, c, T, table.omega, pi, beta, alpha, gamma)
    return StateTable(
        bag=table.bag, c=c, T=T, omega=table.omega,
        pi=pi[kept], beta=beta[kept], alpha=alpha[kept], gamma=gamma[kept], origin=None,
    )


def _backtrace(
    ntd: NiceTreeDecomposition, tables: dict[int, StateTable], root_row: int, n: int, T: int, c: int
) -> TemporalPartition:
    labels = np.zeros((n, T), dtype=np.int64)
    assigned = np.zeros(n, dtype=bool)
    stack = [(ntd.root, root_row)]
    while stack:
        node_id, row = stack.pop()
        node = ntd.nodes[node_id]
        org = tables[node_id].origin
        if node.kind == LEAF:
            continue
        if node.kind == INTRODUCE:
            stack.append((org.child, int(org.src[row])))
        elif node.kind == FORGET:
            child_row = int(org.src[row])
            child = tables[org.child]
            block = child.pi[child_row, org.vpos * T : (org.vpos + 1) * T]
            labels[org.vertex, :] = block.astype(np.int64) + 1
            assigned[org.vertex] = True
            stack.append((org.child, child_row))
        else:
            stack.append((org.child, int(org.src[row])))
            stack.append((org.child2, int(org.src2[row])))
    if not assigned.all():
        raise RuntimeError("witness reconstruction missed a vertex")
    return TemporalPartition(labels, c=c)


def exact_c_modularity(
    graph: TemporalGraph,
    omega,
    c: int,
    ntd: NiceTreeDecomposition | None = None,
    emit_witness: bool = False,
    canonicalize: bool = False,
) -> tuple[Score, TemporalPartition | None]:
    """Exact maximum non-normalised temporal c-modularity, optionally with a witness partition.

    A decomposition is computed with the min-fill heuristic when none is given;
    a supplied one is validated first.  `canonicalize` collapses label-permuted
    states (witness emission forces it off).
    """
    w = as_omega(omega)
    if c < 1:
        raise ValueError("part count must be at least 1")
    if emit_witness:
        canonicalize = False
    if ntd is None:
        ntd = make_nice(heuristic_tree_decomposition(graph.n, graph.edges))
    else:
        problems = ntd.validate(graph.n, graph.edges)
        if problems:
            raise ValueError(f"invalid decomposition: {problems[0]}")
    c_eff = min(c, max(graph.n * graph.T, 1))
    tables: dict[int, StateTable] = {}
    for i in ntd.postorder():
        nd = ntd.nodes[i]
        if nd.kind == LEAF:
            tab = leaf_table(c_eff, graph.T, w)
        elif nd.kind == INTRODUCE:
            tab = introduce(tables[nd.children[0]], nd.vertex)
        elif nd.kind == FORGET:
            tab = forget(tables[nd.children[0]], nd.vertex, graph)
        else:
            other = tables[nd.children[1]]
            if canonicalize:
                other = _expand_orbits(other)
            tab = join(tables[nd.children[0]], other)
        if canonicalize:
            tab = canonical_form(tab)
        if tab.origin is not None:
            tab.origin.child = nd.children[0] if nd.children else None
            tab.origin.child2 = nd.children[1] if len(nd.children) > 1 else None
        tables[i] = tab
        if not emit_witness:
            for ch in nd.children:
                tables.pop(ch, None)
    score, row = _root_best(tables[ntd.root], graph)
    witness = None
    if emit_witness:
        witness = _backtrace(ntd, tables, row, graph.n, graph.T, c)
    return score, witness

"""Hot scoring kernels for exhaustive partition search.

The enumeration walks restricted-growth strings over the flattened (vertex,
time) cells (vertex-major) and scores each assignment with exact integer
arithmetic: every score is an integer numerator over the fixed denominator
`ScoreProblem.den`, so the maximum numerator identifies the exact optimum.

The kernel is numba-jitted by default; set TEMPMOD_NO_NUMBA=1 to force the
vectorised pure-numpy fallback (same enumeration order, same tie-breaks).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .temporal_graph import TemporalGraph

_INT64_GUARD = 2**62


def numba_enabled() -> bool:
    if os.environ.get("TEMPMOD_NO_NUMBA", "").strip() not in ("", "0"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


@dataclass(frozen=True)
class ScoreProblem:
    """Integer-arithmetic view of one graph + tuning parameter.

    For an assignment `a` of cells to parts, the exact non-normalised score is
    (numerator computed by the kernels) / den.
    """

    n: int
    T: int
    eu: np.ndarray  # time-edge endpoints / times, int64
    ev: np.ndarray
    et: np.ndarray  # 0-based times
    deg_flat: np.ndarray  # (n*T,) int64, cell-major degrees
    coef_edge: int  # weight of one monochromatic time-edge
    volc: np.ndarray  # (T,) int64, per-time volume-squared weight
    loyc: int  # weight of one loyal step
    den: int

    @property
    def cells(self) -> int:
        return self.n * self.T


def prepare(graph: TemporalGraph, omega: Fraction) -> ScoreProblem:
    """Precompute integer coefficients; raises if int64 headroom is insufficient."""
    n, T = graph.n, graph.T
    doubled = [2 * int(m) for m in graph.m_t if m > 0]
    lcm2m = math.lcm(*doubled) if doubled else 1
    pn, pd = omega.numerator, omega.denominator
    coef_edge = 2 * lcm2m * pd
    volc = np.array(
        [pd * (lcm2m // (2 * int(m))) if m > 0 else 0 for m in graph.m_t],
        dtype=np.int64,
    )
    loyc = pn * lcm2m
    eu, ev, et = [], [], []
    for (u, v, t) in graph.time_edge_triples():
        eu.append(u)
        ev.append(v)
        et.append(t - 1)
    bound = coef_edge * max(len(eu), 1)
    for t in range(T):
        m2 = 2 * int(graph.m_t[t])
        bound += int(volc[t]) * m2 * m2
    bound += abs(loyc) * n * max(T - 1, 1)
    if bound >= _INT64_GUARD:
        raise ValueError("instance too large for int64 exact scoring")
    return ScoreProblem(
        n=n,
        T=T,
        eu=np.array(eu, dtype=np.int64),
        ev=np.array(ev, dtype=np.int64),
        et=np.array(et, dtype=np.int64),
        deg_flat=graph.deg.astype(np.int64).ravel(),
        coef_edge=coef_edge,
        volc=volc,
        loyc=loyc,
        den=lcm2m * pd,
    )


def _best_rgs_py(N, T, c, eu, ev, et, deg_flat, coef_edge, volc, loyc, n):
    """Enumerate capped restricted-growth strings, return (best numerator, labels, count)."""
    a = np.zeros(N, dtype=np.int8)
    h = np.zeros(N, dtype=np.int8)
    vol = np.zeros(c * T, dtype=np.int64)
    best = np.int64(-_INT64_GUARD)
    best_a = np.zeros(N, dtype=np.int8)
    count = 0
    while True:
        count += 1
        num = np.int64(0)
        for k in range(eu.size):
            if a[eu[k] * T + et[k]] == a[ev[k] * T + et[k]]:
                num += coef_edge
        for i in range(c * T):
            vol[i] = 0
        for v in range(n):
            for t in range(T):
                d = deg_flat[v * T + t]
                if d > 0:
                    vol[a[v * T + t] * T + t] += d
        for p in range(c):
            for t in range(T):
                val = vol[p * T + t]
                if val > 0:
                    num -= volc[t] * val * val
        for v in range(n):
            for t in range(T - 1):
                if a[v * T + t] == a[v * T + t + 1]:
                    num += loyc
        if num > best:
            best = num
            for i in range(N):
                best_a[i] = a[i]
        i = N - 1
        moved = False
        while i > 0:
            if a[i] <= h[i - 1] and a[i] < c - 1:
                a[i] += 1
                h[i] = a[i] if a[i] > h[i - 1] else h[i - 1]
                for j in range(i + 1, N):
                    a[j] = 0
                    h[j] = h[i]
                moved = True
                break
            i -= 1
        if not moved:
            return best, best_a, count


_NJIT_KERNEL = None


def _njit_kernel():
    global _NJIT_KERNEL
    if _NJIT_KERNEL is None:
        from numba import njit

        _NJIT_KERNEL = njit(cache=True)(_best_rgs_py)
    return _NJIT_KERNEL


def _iter_rgs_batches(N: int, c: int, batch: int):
    """Yield (rows_filled, buffer) with successive capped restricted-growth strings."""
    buf = np.empty((batch, N), dtype=np.int8)
    a = [0] * N
    h = [0] * N
    done = False
    while not done:
        fill = 0
        while fill < batch:
            buf[fill, :] = a
            fill += 1
            i = N - 1
            moved = False
            while i > 0:
                if a[i] <= h[i - 1] and a[i] < c - 1:
                    a[i] += 1
                    h[i] = max(h[i - 1], a[i])
                    for j in range(i + 1, N):
                        a[j] = 0
                        h[j] = h[i]
                    moved = True
                    break
                i -= 1
            if not moved:
                done = True
                break
        yield fill, buf


def _best_numpy(problem: ScoreProblem, c: int, batch: int = 1 << 16):
    N, T, n = problem.cells, problem.T, problem.n
    deg = problem.deg_flat.reshape(n, T)
    best = -_INT64_GUARD
    best_a = None
    count = 0
    for fill, buf in _iter_rgs_batches(N, c, batch):
        A = buf[:fill]
        num = np.zeros(fill, dtype=np.int64)
        for k in range(problem.eu.size):
            cu = int(problem.eu[k]) * T + int(problem.et[k])
            cv = int(problem.ev[k]) * T + int(problem.et[k])
            num += np.int64(problem.coef_edge) * (A[:, cu] == A[:, cv])
        for t in range(T):
            vc = int(problem.volc[t])
            if vc == 0:
                continue
            labels = A[:, t::T]
            dt = deg[:, t]
            for p in range(c):
                vol = ((labels == p) * dt).sum(axis=1, dtype=np.int64)
                num -= vc * vol * vol
        if problem.loyc:
            for t in range(T - 1):
                num += np.int64(problem.loyc) * (A[:, t::T] == A[:, t + 1::T]).sum(
                    axis=1, dtype=np.int64
                )
        i = int(np.argmax(num))
        if int(num[i]) > best:
            best = int(num[i])
            best_a = A[i].copy()
        count += fill
    return np.int64(best), best_a, count


def _join_reduce_py(off1, cnt1, off2, cnt2, rc1, val1, rc2, val2, grid, out_l, out_r):
    """Grouped scatter-max over combined reduced-key codes.

    For each group g, all pairs (i, j) of side rows produce code rc1[i]+rc2[j]
    and value val1[i]+val2[j]; per code the first maximal pair is kept.
    Returns the number of surviving pairs written to out_l/out_r.
    """
    stamp = np.full(grid, -1, dtype=np.int64)
    best = np.zeros(grid, dtype=np.int64)
    pos = np.zeros(grid, dtype=np.int64)
    n_out = 0
    for g in range(off1.size):
        a0, a1 = off1[g], off1[g] + cnt1[g]
        b0, b1 = off2[g], off2[g] + cnt2[g]
        for i in range(a0, a1):
            base_code = rc1[i]
            base_val = val1[i]
            for j in range(b0, b1):
                code = base_code + rc2[j]
                v = base_val + val2[j]
                if stamp[code] != g:
                    stamp[code] = g
                    best[code] = v
                    pos[code] = n_out
                    out_l[n_out] = i
                    out_r[n_out] = j
                    n_out += 1
                elif v > best[code]:
                    best[code] = v
                    out_l[pos[code]] = i
                    out_r[pos[code]] = j
    return n_out


_NJIT_JOIN = None


def _njit_join():
    global _NJIT_JOIN
    if _NJIT_JOIN is None:
        from numba import njit

        _NJIT_JOIN = njit(cache=True)(_join_reduce_py)
    return _NJIT_JOIN


def join_reduce(off1, cnt1, off2, cnt2, rc1, val1, rc2, val2, grid):
    """Dispatch the join scatter-max kernel; requires numba (callers fall back otherwise)."""
    cap = np.minimum(cnt1.astype(np.int64) * cnt2.astype(np.int64), np.int64(grid)).sum()
    out_l = np.empty(int(cap), dtype=np.int64)
    out_r = np.empty(int(cap), dtype=np.int64)
    kern = _njit_join()
    n_out = kern(off1, cnt1, off2, cnt2, rc1, val1, rc2, val2, grid, out_l, out_r)
    return out_l[:n_out], out_r[:n_out]


def best_assignment(problem: ScoreProblem, c: int) -> tuple[int, np.ndarray, int]:
    """Maximise the exact score numerator over all capped restricted-growth assignments.

    Returns (best numerator, best labels 0..c-1 as int8, assignments enumerated).
    Ties keep the first assignment in enumeration order on both paths.
    """
    if c < 1:
        raise ValueError("part count must be at least 1")
    if problem.cells == 0:
        return 0, np.zeros(0, dtype=np.int8), 1
    if numba_enabled():
        kern = _njit_kernel()
        best, best_a, count = kern(
            problem.cells,
            problem.T,
            c,
            problem.eu,
            problem.ev,
            problem.et,
            problem.deg_flat,
            problem.coef_edge,
            problem.volc,
            problem.loyc,
            problem.n,
        )
        return int(best), best_a, int(count)
    best, best_a, count = _best_numpy(problem, c)
    return int(best), best_a, count

"""Text formats for temporal graphs, tree decompositions, partitions, and results.

Graph files: header ``tg <n> <T>`` followed by ``<u> <v> <t>`` lines
(0-indexed vertices, 1-indexed times); ``#`` starts a comment.
Decomposition files: header ``s td <num_bags> <max_bag_size> <n>``, bag lines
``b <id> <v...>``, then ``<id1> <id2>`` tree edges; ``c`` starts a comment.
Partition files: one ``<v> <t> <part>`` line per (vertex, time) pair.
Writers emit canonically sorted lines, so write(parse(text)) round-trips.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .scoring import TemporalPartition
from .temporal_graph import TemporalGraph, build_temporal_graph, normalize_edge
from .treedec import TreeDecomposition


class FormatError(ValueError):
    pass


def _significant_lines(text: str, comment: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(comment):
            continue
        yield lineno, line


def parse_tg(text: str) -> TemporalGraph:
    lines = _significant_lines(text, "#")
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty graph file") from None
    parts = header.split()
    if len(parts) != 3 or parts[0] != "tg":
        raise FormatError(f"line {lineno}: expected header 'tg <n> <T>', got {header!r}")
    try:
        n, T = int(parts[1]), int(parts[2])
    except ValueError:
        raise FormatError(f"line {lineno}: non-integer header fields in {header!r}") from None
    if n < 0 or T < 1:
        raise FormatError(f"line {lineno}: need n >= 0 and T >= 1, got n={n}, T={T}")
    triples = []
    seen: set[tuple[int, int, int]] = set()
    for lineno, line in lines:
        fields = line.split()
        if len(fields) != 3:
            raise FormatError(f"line {lineno}: expected '<u> <v> <t>', got {line!r}")
        try:
            u, v, t = (int(x) for x in fields)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer fields in {line!r}") from None
        if u == v:
            raise FormatError(f"line {lineno}: self-loop ({u}, {v}, {t})")
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"line {lineno}: vertex out of range 0..{n - 1} in ({u}, {v}, {t})")
        if not 1 <= t <= T:
            raise FormatError(f"line {lineno}: time out of range 1..{T} in ({u}, {v}, {t})")
        key = normalize_edge(u, v) + (t,)
        if key in seen:
            raise FormatError(f"line {lineno}: duplicate time-edge ({u}, {v}, {t})")
        seen.add(key)
        triples.append((u, v, t))
    return build_temporal_graph(n, T, triples)


def write_tg(graph: TemporalGraph) -> str:
    lines = [f"tg {graph.n} {graph.T}"]
    lines.extend(f"{u} {v} {t}" for (u, v, t) in graph.time_edge_triples())
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> TreeDecomposition:
    lines = _significant_lines(text, "c")
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError("empty decomposition file") from None
    parts = header.split()
    if len(parts) != 5 or parts[0] != "s" or parts[1] != "td":
        raise FormatError(
            f"line {lineno}: expected header 's td <num_bags> <max_bag_size> <n>', got {header!r}"
        )
    try:
        num_bags, max_bag, n = int(parts[2]), int(parts[3]), int(parts[4])
    except ValueError:
        raise FormatError(f"line {lineno}: non-integer header fields in {header!r}") from None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, line in lines:
        fields = line.split()
        if fields[0] == "b":
            if len(fields) < 2:
                raise FormatError(f"line {lineno}: bag line needs an id")
            try:
                bid = int(fields[1])
                verts = [int(x) for x in fields[2:]]
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer fields in {line!r}") from None
            if bid in bags:
                raise FormatError(f"line {lineno}: duplicate bag id {bid}")
            bad = [v for v in verts if not 0 <= v < n]
            if bad:
                raise FormatError(f"line {lineno}: vertex {bad[0]} out of range 0..{n - 1}")
            bags[bid] = frozenset(verts)
        else:
            if len(fields) != 2:
                raise FormatError(f"line {lineno}: expected tree edge '<id1> <id2>', got {line!r}")
            try:
                a, b = int(fields[0]), int(fields[1])
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer fields in {line!r}") from None
            edges.append((a, b))
    if len(bags) != num_bags:
        raise FormatError(f"header declares {num_bags} bags, file has {len(bags)}")
    actual_max = max((len(b) for b in bags.values()), default=0)
    if actual_max > max_bag:
        raise FormatError(f"header declares max bag size {max_bag}, file has a bag of size {actual_max}")
    for (a, b) in edges:
        if a not in bags or b not in bags:
            raise FormatError(f"tree edge ({a}, {b}) references unknown bag")
    return TreeDecomposition(n=n, bags=bags, edges=edges)


def write_td(td: TreeDecomposition) -> str:
    max_bag = max((len(b) for b in td.bags.values()), default=0)
    lines = [f"s td {len(td.bags)} {max_bag} {td.n}"]
    for bid in sorted(td.bags):
        verts = " ".join(str(v) for v in sorted(td.bags[bid]))
        lines.append(f"b {bid} {verts}".rstrip())
    for (a, b) in sorted((min(a, b), max(a, b)) for (a, b) in td.edges):
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def parse_partition(text: str, n: int, T: int) -> TemporalPartition:
    entries: dict[tuple[int, int], int] = {}
    for lineno, line in _significant_lines(text, "#"):
        fields = line.split()
        if len(fields) != 3:
            raise FormatError(f"line {lineno}: expected '<v> <t> <part>', got {line!r}")
        try:
            v, t, p = (int(x) for x in fields)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer fields in {line!r}") from None
        if not 0 <= v < n:
            raise FormatError(f"line {lineno}: vertex {v} out of range 0..{n - 1}")
        if not 1 <= t <= T:
            raise FormatError(f"line {lineno}: time {t} out of range 1..{T}")
        if p < 1:
            raise FormatError(f"line {lineno}: part label {p} must be at least 1")
        if (v, t) in entries:
            raise FormatError(f"line {lineno}: duplicate pair (vertex {v}, time {t})")
        entries[(v, t)] = p
    for v in range(n):
        for t in range(1, T + 1):
            if (v, t) not in entries:
                raise FormatError(f"partition is missing pair (vertex {v}, time {t})")
    return TemporalPartition.from_pairs(entries, n, T)


def write_partition(partition: TemporalPartition) -> str:
    lines = [
        f"{v} {t} {partition.label(v, t)}"
        for v in range(partition.n)
        for t in range(1, partition.T + 1)
    ]
    return "\n".join(lines) + "\n"


def _fraction_obj(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def _float_str(value: Fraction) -> str:
    return f"{value.numerator / value.denominator:.12g}"


def result_fields(result, witness_path: str | None = None) -> dict:
    """Flatten a solver result into the ordered emission fields."""
    from .oracle import OracleResult
    from .window_approx import ApproxResult

    fields: dict = {}
    if isinstance(result, ApproxResult):
        fields["q_raw"] = result.raw
        fields["q_normalized"] = result.normalized
        fields["q_float"] = _float_str(result.normalized)
        fields["guarantee_factor"] = result.guarantee_factor
        fields["breakpoints"] = list(result.plan.breakpoints)
    elif isinstance(result, OracleResult):
        fields["q_raw"] = result.best_raw
        fields["q_normalized"] = result.best_normalized
        fields["q_float"] = _float_str(result.best_normalized)
    elif isinstance(result, tuple) and len(result) == 2:
        raw, normalized = result
        fields["q_raw"] = raw
        fields["q_normalized"] = normalized
        fields["q_float"] = _float_str(normalized)
    elif isinstance(result, Fraction):
        fields["q_raw"] = result
        fields["q_float"] = _float_str(result)
    else:
        raise TypeError(f"cannot emit result of type {type(result).__name__}")
    if witness_path is not None:
        fields["witness_path"] = witness_path
    return fields


def emit_result(result, fmt: str = "json", witness_path: str | None = None) -> str:
    """Render a result as json or a one-row tsv; all numbers stay exact rationals."""
    fields = result_fields(result, witness_path)
    if fmt == "json":
        out = {}
        for key, value in fields.items():
            if isinstance(value, Fraction):
                out[key] = _fraction_obj(value)
            else:
                out[key] = value
        return json.dumps(out, indent=2) + "\n"
    if fmt == "tsv":
        def render(value):
            if isinstance(value, Fraction):
                return str(value)
            if isinstance(value, list):
                return ",".join(str(x) for x in value)
            return str(value)

        header = "\t".join(fields)
        row = "\t".join(render(v) for v in fields.values())
        return header + "\n" + row + "\n"
    raise ValueError(f"unknown output format {fmt!r}")

"""Command-line interface.

Subcommands: score, exact, approx, brute, td (compute|validate|nicify),
gen (instance|experiment).  Exit codes: 0 success, 2 input or validation
error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import dp_engine, formats, genbench, oracle, treedec, window_approx
from .formats import FormatError
from .oracle import BudgetExceeded
from .scoring import as_omega, temporal_modularity, temporal_modularity_raw


def _omega(text: str) -> Fraction:
    try:
        return as_omega(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad tuning parameter {text!r}: {exc}") from None


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_ntd(graph, td_path: str | None):
    if td_path is None:
        return treedec.make_nice(treedec.heuristic_tree_decomposition(graph.n, graph.edges))
    td = formats.parse_td(_read(td_path))
    problems = treedec.validate(td, graph.n, graph.edges)
    if problems:
        raise FormatError(f"decomposition invalid: {problems[0]}")
    return treedec.make_nice(td)


def _emit(args, result, witness_path=None) -> None:
    sys.stdout.write(formats.emit_result(result, args.format, witness_path=witness_path))


def cmd_score(args) -> int:
    graph = formats.parse_tg(_read(args.graph))
    partition = formats.parse_partition(_read(args.partition), graph.n, graph.T)
    raw = temporal_modularity_raw(graph, partition, args.omega)
    _emit(args, (raw, temporal_modularity(graph, partition, args.omega)))
    return 0


def cmd_exact(args) -> int:
    graph = formats.parse_tg(_read(args.graph))
    ntd = _load_ntd(graph, args.td)
    from .scoring import normalizer

    score, witness = dp_engine.exact_c_modularity(
        graph,
        args.omega,
        args.parts,
        ntd=ntd,
        emit_witness=args.emit_partition is not None,
        canonicalize=args.canonical,
    )
    witness_path = None
    if args.emit_partition is not None:
        Path(args.emit_partition).write_text(formats.write_partition(witness))
        witness_path = args.emit_partition
    mu = normalizer(graph, args.omega)
    normalized = score / (2 * mu) if mu > 0 else Fraction(0)
    _emit(args, (score, normalized), witness_path=witness_path)
    return 0


def cmd_approx(args) -> int:
    graph = formats.parse_tg(_read(args.graph))
    ntd = _load_ntd(graph, args.td)
    result = window_approx.windowed_optimum(graph, args.omega, args.parts, args.window, ntd=ntd)
    _emit(args, result)
    return 0


def cmd_brute(args) -> int:
    graph = formats.parse_tg(_read(args.graph))
    result = oracle.brute_force_c_modularity(graph, args.omega, args.parts, budget=args.budget)
    _emit(args, result)
    return 0


def cmd_td(args) -> int:
    graph = formats.parse_tg(_read(args.graph))
    if args.td_action == "compute":
        td = treedec.heuristic_tree_decomposition(graph.n, graph.edges, strategy=args.strategy)
        text = formats.write_td(td)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    td = formats.parse_td(_read(args.td))
    problems = treedec.validate(td, graph.n, graph.edges)
    if args.td_action == "validate":
        if problems:
            for p in problems:
                print(p, file=sys.stderr)
            return 2
        print("ok")
        return 0
    # nicify
    if problems:
        print(f"decomposition invalid: {problems[0]}", file=sys.stderr)
        return 2
    ntd = treedec.make_nice(td)
    bags = {i + 1: frozenset(nd.bag) for i, nd in enumerate(ntd.nodes)}
    edges = [(i + 1, ch + 1) for i, nd in enumerate(ntd.nodes) for ch in nd.children]
    text = formats.write_td(treedec.TreeDecomposition(n=graph.n, bags=bags, edges=edges))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen(args) -> int:
    if args.gen_action == "instance":
        spec = genbench.GenSpec(n=args.n, k=args.k, T=args.T, p_active=args.p_active, seed=args.seed)
        graph, witness = genbench.gen_partial_ktree_temporal(spec)
        text = formats.write_tg(graph)
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        if args.td_out:
            Path(args.td_out).write_text(formats.write_td(witness))
        return 0
    # experiment
    specs = [
        genbench.GenSpec(n=n, k=k, T=T, p_active=args.p_active, seed=seed)
        for n in args.n_list
        for k in args.k_list
        if k < n
        for T in args.t_list
        for seed in range(args.seed, args.seed + args.instances)
    ]
    params = [(c, d, w) for c in args.c_list for d in args.d_list for w in args.omega_list]
    rows = genbench.run_experiment(specs, params, budget=args.budget)
    text = genbench.rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tempmod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--omega", type=_omega, default=Fraction(1), help="loyalty weight, NUM or NUM/DEN")
        p.add_argument("--format", choices=("json", "tsv"), default="json")

    p = sub.add_parser("score", help="score a partition file against a graph")
    p.add_argument("graph")
    p.add_argument("partition")
    common(p)
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("exact", help="exact c-part optimum via the tree DP")
    p.add_argument("graph")
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--td", help="decomposition file (computed heuristically when absent)")
    p.add_argument("--emit-partition", help="write an optimal partition to this path")
    p.add_argument("--canonical", action="store_true", help="collapse label-permuted DP states")
    common(p)
    p.set_defaults(fn=cmd_exact)

    p = sub.add_parser("approx", help="windowed multiplicative approximation")
    p.add_argument("graph")
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--window", type=int, required=True, help="maximum window length")
    p.add_argument("--td")
    common(p)
    p.set_defaults(fn=cmd_approx)

    p = sub.add_parser("brute", help="brute-force oracle optimum")
    p.add_argument("graph")
    p.add_argument("--parts", type=int, required=True)
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    common(p)
    p.set_defaults(fn=cmd_brute)

    p = sub.add_parser("td", help="compute, validate or nicify tree decompositions")
    tds = p.add_subparsers(dest="td_action", required=True)
    q = tds.add_parser("compute")
    q.add_argument("graph")
    q.add_argument("--strategy", choices=("min_fill", "min_degree"), default="min_fill")
    q.add_argument("-o", "--output")
    q.set_defaults(fn=cmd_td)
    q = tds.add_parser("validate")
    q.add_argument("graph")
    q.add_argument("td")
    q.set_defaults(fn=cmd_td)
    q = tds.add_parser("nicify")
    q.add_argument("graph")
    q.add_argument("td")
    q.add_argument("-o", "--output")
    q.set_defaults(fn=cmd_td)

    p = sub.add_parser("gen", help="generate instances or run the experiment harness")
    gens = p.add_subparsers(dest="gen_action", required=True)
    q = gens.add_parser("instance")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--T", type=int, required=True)
    q.add_argument("--p-active", type=_omega, default=Fraction(1, 2))
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("-o", "--output")
    q.add_argument("--td-out")
    q.set_defaults(fn=cmd_gen)
    q = gens.add_parser("experiment")
    q.add_argument("--n-list", type=_int_list, required=True)
    q.add_argument("--k-list", type=_int_list, required=True)
    q.add_argument("--t-list", type=_int_list, required=True)
    q.add_argument("--c-list", type=_int_list, required=True)
    q.add_argument("--d-list", type=_int_list, required=True)
    q.add_argument("--omega-list", type=lambda s: [_omega(x) for x in s.split(",") if x], default=[Fraction(1)])
    q.add_argument("--p-active", type=_omega, default=Fraction(1, 2))
    q.add_argument("--instances", type=int, default=1, help="seeds per grid point")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    q.add_argument("-o", "--output")
    q.set_defaults(fn=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

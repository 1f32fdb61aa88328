"""Command line surface.

Exit codes follow the verdict: 0 Moral, 1 NotMoral, 2 Unknown. Usage
errors exit 64 and bad input data exits 65. Verdict output goes to
stdout and is byte stable for a fixed input and configuration; wall
clock timings and other diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from typing import Optional

from . import __version__, generate
from .decide import MORAL, NOT_MORAL, UNKNOWN, Decision, decide
from .eliminate import (
    BACKTRACKING,
    ELIMINATED,
    GREEDY,
    eliminate,
    trace_to_text,
)
from .graphs import (
    GraphError,
    align_dag,
    dag_to_dot,
    graph_to_dot,
    read_dag_text,
    read_graph_text,
    write_dag_text,
    write_graph_text,
    moralize,
)
from .reduction import (
    TEMPLATE_TABLE_DIGEST,
    assignment_from_text,
    assignment_to_text,
    cnf_to_text,
    extract_assignment,
    instance_from_text,
    normalize_clauses,
    parse_cnf,
    preprocess,
    reduce,
    roles_to_text,
    satisfies,
    witness_dag,
)
from .screens import CYCLE_CAP, report_to_keyvalue, report_to_text, screen

EX_MORAL = 0
EX_NOT_MORAL = 1
EX_UNKNOWN = 2
EX_USAGE = 64
EX_DATA = 65

_VERDICT_EXIT = {MORAL: EX_MORAL, NOT_MORAL: EX_NOT_MORAL, UNKNOWN: EX_UNKNOWN}


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code this tool promises."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from exc


def _write_file(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise GraphError(f"cannot write {path}: {exc}") from exc


def _write_dag(path: str, dag) -> None:
    text = dag_to_dot(dag) if path.endswith(".dot") else write_dag_text(dag)
    _write_file(path, text)


def _write_graph(path: str, g) -> None:
    text = graph_to_dot(g) if path.endswith(".dot") else write_graph_text(g)
    _write_file(path, text)


def _print_pairs(pairs: list[tuple[str, object]], fmt: str) -> None:
    for key, value in pairs:
        if fmt == "keyvalue":
            print(f"{key}={value}")
        else:
            print(f"{key}: {value}")


def _decision_pairs(dec: Decision) -> list[tuple[str, object]]:
    pairs: list[tuple[str, object]] = [("verdict", dec.verdict)]
    for key in ("nodes", "commits", "seed", "portfolio"):
        if key in dec.stats:
            pairs.append((key, dec.stats[key]))
    cert = dec.certificate
    if cert:
        pairs.append(("certificate", cert.get("kind")))
        if "config" in cert:
            pairs.append(("certificate.config", cert["config"]))
    return pairs


def _portfolio_decide(g, args) -> Decision:
    """Run decide under several seeds at once; first settled answer wins.

    Which run answers first depends on scheduling, so the winning
    witness or certificate may differ between invocations; the stats
    say so.
    """
    seeds = [args.seed + k for k in range(args.portfolio)]
    with ThreadPoolExecutor(max_workers=len(seeds)) as pool:
        pending = {
            pool.submit(
                decide,
                g,
                budget_nodes=args.budget_nodes,
                budget_ms=args.budget_ms,
                seed=s,
                cap=args.cap,
            ): s
            for s in seeds
        }
        fallback: Optional[Decision] = None
        while pending:
            done, _ = wait(list(pending), return_when=FIRST_COMPLETED)
            for fut in done:
                seed = pending.pop(fut)
                dec = fut.result()
                if dec.verdict != UNKNOWN:
                    dec.stats["portfolio"] = len(seeds)
                    dec.stats["seed"] = seed
                    dec.stats["nondeterministic"] = True
                    return dec
                fallback = dec
    assert fallback is not None
    fallback.stats["portfolio"] = len(seeds)
    fallback.stats["nondeterministic"] = True
    return fallback


def cmd_check(args) -> int:
    g = read_graph_text(_read_file(args.graph))
    t0 = time.monotonic()
    rep = screen(g, args.cap)
    if args.format == "keyvalue":
        sys.stdout.write(report_to_keyvalue(rep))
    else:
        sys.stdout.write(report_to_text(rep))

    if args.screens_only:
        verdict = rep.verdict if rep.verdict in _VERDICT_EXIT else UNKNOWN
        if rep.witness is not None and args.witness:
            _write_dag(args.witness, rep.witness)
        _print_pairs([("verdict", verdict)], args.format)
        _note(f"time_ms {1000 * (time.monotonic() - t0):.1f}")
        return _VERDICT_EXIT[verdict]

    if args.explain:
        out = eliminate(g, args.strategy, budget=args.budget_nodes, seed=args.seed)
        if out.status == ELIMINATED:
            _write_file(args.explain, trace_to_text(g, out.trace))
            pairs = [
                ("verdict", MORAL),
                ("settled_by", f"eliminator.{args.strategy}"),
                ("steps", len(out.trace)),
                ("expansions", out.stats["expansions"]),
            ]
            _print_pairs(pairs, args.format)
            if args.witness and out.witness is not None:
                _write_dag(args.witness, out.witness)
            _note(f"time_ms {1000 * (time.monotonic() - t0):.1f}")
            return EX_MORAL
        _note(f"eliminator did not settle: {out.status}; falling back to exact search")

    if args.portfolio > 1:
        dec = _portfolio_decide(g, args)
    else:
        dec = decide(
            g,
            budget_nodes=args.budget_nodes,
            budget_ms=args.budget_ms,
            seed=args.seed,
            cap=args.cap,
        )
    _print_pairs(_decision_pairs(dec), args.format)
    if dec.witness is not None and args.witness:
        _write_dag(args.witness, dec.witness)
    _note(f"time_ms {1000 * (time.monotonic() - t0):.1f}")
    return _VERDICT_EXIT[dec.verdict]


def cmd_moralize(args) -> int:
    d = read_dag_text(_read_file(args.dag))
    _write_graph(args.out, moralize(d))
    return 0


def _formula_pipeline(args):
    """Parse, optionally repair, and preprocess a CNF file."""
    text = _read_file(args.cnf)
    f = parse_cnf(text, strict=not args.lenient)
    if args.lenient:
        f, notes = normalize_clauses(f)
        for note in notes:
            _note(note)
    pre = preprocess(f)
    for var, value in pre.fixed:
        _note(f"pure literal: variable {var} fixed {'true' if value else 'false'}")
    return f, pre


def cmd_reduce(args) -> int:
    f, pre = _formula_pipeline(args)
    if pre.settled:
        print("settled: satisfiable by pure literals")
        sys.stdout.write(assignment_to_text(pre.lift()))
        return 0
    inst = reduce(pre.formula)
    comments = [f"reduced from {args.cnf}"]
    comments += [
        f"fixed {var} {'true' if value else 'false'}" for var, value in pre.fixed
    ]
    comments += [f"residual {i + 1} was {v}" for i, v in enumerate(pre.mapping)]
    _write_graph(args.out, inst.graph)
    if args.out != "-":
        _write_file(args.out + ".cnf", cnf_to_text(pre.formula, tuple(comments)))
        _write_file(args.out + ".roles", roles_to_text(inst))
    print(f"instance: {inst.graph.n} vertices, {inst.graph.m} edges")
    print(f"template: {TEMPLATE_TABLE_DIGEST}")
    return 0


def cmd_witness(args) -> int:
    f, pre = _formula_pipeline(args)
    if args.assign is not None:
        a_orig = assignment_from_text("v " + args.assign + " 0")
    else:
        a_orig = assignment_from_text(_read_file(args.assign_file))
    for var in range(1, f.num_vars + 1):
        if var not in a_orig:
            _note(f"assignment leaves variable {var} free; defaulting true")
            a_orig[var] = True
    if not satisfies(f, a_orig):
        raise GraphError("assignment does not satisfy the formula")
    if pre.settled:
        _note("formula settled by pure literals; no instance to witness")
        return 0
    a_res = {i + 1: a_orig[v] for i, v in enumerate(pre.mapping)}
    inst = reduce(pre.formula)
    d = witness_dag(
        inst, a_res, budget_nodes=args.budget_nodes, budget_ms=args.budget_ms
    )
    _write_dag(args.out, d)
    print(f"witness: verified, {d.n} vertices, {len(d.arcs)} arcs")
    return 0


def cmd_extract(args) -> int:
    inst = instance_from_text(
        _read_file(args.instance), _read_file(args.instance + ".cnf")
    )
    # dag files number vertices by first appearance; labels carry the
    # identity, so renumber onto the instance before reading arcs
    d = align_dag(read_dag_text(_read_file(args.dag)), inst.graph)
    a = extract_assignment(inst, d)
    sys.stdout.write(assignment_to_text(a))
    print(f"satisfies: {'yes' if satisfies(inst.formula, a) else 'no'}")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "dag":
        _write_dag(args.out, generate.random_dag(args.n, args.p, args.seed))
    elif args.kind == "chordal":
        _write_graph(args.out, generate.random_chordal(args.n, args.seed))
    elif args.kind == "gnp":
        _write_graph(args.out, generate.gnp(args.n, args.p, args.seed))
    else:
        _write_graph(args.out, generate.moralized(args.n, args.p, args.seed))
    return 0


def _bench_screens_vs_exact(args, writer) -> None:
    from itertools import combinations

    writer.writerow(
        [
            "family",
            "id",
            "n",
            "m",
            "screen_verdict",
            "screen_rule",
            "exact_verdict",
            "agree",
            "screen_ms",
            "exact_ms",
        ]
    )
    pairs5 = list(combinations(range(5), 2))
    mismatches = 0
    definitive = 0

    def row(family, ident, g):
        nonlocal mismatches, definitive
        t0 = time.monotonic()
        rep = screen(g, args.cap)
        t1 = time.monotonic()
        dec = decide(
            g, budget_nodes=args.budget_nodes, budget_ms=args.budget_ms, cap=args.cap
        )
        t2 = time.monotonic()
        agree = ""
        if rep.verdict in (MORAL, NOT_MORAL) and dec.verdict != UNKNOWN:
            definitive += 1
            agree = int(rep.verdict == dec.verdict)
            mismatches += 1 - agree
        writer.writerow(
            [
                family,
                ident,
                g.n,
                g.m,
                rep.verdict,
                rep.rule_id or "",
                dec.verdict,
                agree,
                f"{1000 * (t1 - t0):.2f}",
                f"{1000 * (t2 - t1):.2f}",
            ]
        )

    from .graphs import UndirectedGraph

    for mask in range(1 << len(pairs5)):
        edges = [pairs5[i] for i in range(len(pairs5)) if (mask >> i) & 1]
        row("exhaustive5", mask, UndirectedGraph(5, edges))
    for seed in range(50):
        row("gnp12", seed, generate.gnp_capped(12, 0.3, 18, seed))
    _note(f"definitive screens: {definitive}, mismatches: {mismatches}")


def _bench_eliminator(args, writer) -> None:
    from .fixtures import marked_edge_trap

    writer.writerow(
        ["family", "strategy", "seed", "status", "steps", "expansions", "ms"]
    )
    g = marked_edge_trap()
    runs = [(GREEDY, s) for s in range(20)] + [(BACKTRACKING, args.seed)]
    for strategy, seed in runs:
        t0 = time.monotonic()
        out = eliminate(g, strategy, budget=args.budget_nodes, seed=seed)
        writer.writerow(
            [
                "marked_edge_trap",
                strategy,
                seed,
                out.status,
                len(out.trace),
                out.stats["expansions"],
                f"{1000 * (time.monotonic() - t0):.2f}",
            ]
        )


def _bench_kernel(args, writer) -> None:
    from . import _kernel_py
    from .fixtures import clique_overlap, wheel, wheel_with_ears

    kernels = [("py", _kernel_py.search_dispositions)]
    try:
        from . import _kernel_c

        kernels.append(("c", _kernel_c.search_dispositions))
    except ImportError:
        _note("compiled kernel unavailable; benchmarking pure python only")

    writer.writerow(["graph", "kernel", "n", "m", "witness_found", "nodes", "ms"])
    graphs = [
        ("wheel", wheel()),
        ("wheel_with_ears", wheel_with_ears()),
        ("clique_overlap", clique_overlap()),
    ]
    for seed in range(3):
        graphs.append((f"gnp8_{seed}", generate.gnp_capped(8, 0.5, 13, seed)))
    for name, g in graphs:
        masks = [0] * g.n
        for a, b in g.edges:
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        for kname, search in kernels:
            t0 = time.monotonic()
            disp, nodes = search(g.n, list(g.edges), masks, 0)
            writer.writerow(
                [
                    name,
                    kname,
                    g.n,
                    g.m,
                    int(disp is not None),
                    abs(nodes),
                    f"{1000 * (time.monotonic() - t0):.2f}",
                ]
            )


def cmd_bench(args) -> int:
    sink = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        writer = csv.writer(sink)
        if args.suite == "screens-vs-exact":
            _bench_screens_vs_exact(args, writer)
        elif args.suite == "eliminator-orderings":
            _bench_eliminator(args, writer)
        else:
            _bench_kernel(args, writer)
    finally:
        if sink is not sys.stdout:
            sink.close()
    return 0


def _add_budget_flags(p) -> None:
    p.add_argument("--budget-nodes", type=int, default=1_000_000, metavar="N")
    p.add_argument("--budget-ms", type=int, default=10_000, metavar="MS")
    p.add_argument("--seed", type=int, default=0, metavar="S")


def build_parser() -> _Parser:
    parser = _Parser(prog="moralgraph", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=f"moralgraph {__version__} template-table {TEMPLATE_TABLE_DIGEST}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether a graph is moral")
    p.add_argument("graph", help="graph file, or - for stdin")
    p.add_argument("--screens-only", action="store_true")
    p.add_argument("--witness", metavar="PATH", help="write the witness dag here")
    p.add_argument(
        "--explain",
        metavar="PATH",
        help="try the eliminator first and write its trace here if it settles",
    )
    p.add_argument(
        "--strategy", choices=[GREEDY, BACKTRACKING], default=BACKTRACKING
    )
    p.add_argument("--cap", type=int, default=CYCLE_CAP, metavar="LEN")
    p.add_argument("--format", choices=["text", "keyvalue"], default="text")
    p.add_argument("--portfolio", type=int, default=1, metavar="N")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("moralize", help="moral graph of a dag")
    p.add_argument("dag")
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(fn=cmd_moralize)

    p = sub.add_parser("reduce", help="build a morality instance from 3-CNF")
    p.add_argument("cnf")
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--lenient", action="store_true", help="repair bad clauses")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("witness", help="witness dag for a satisfying assignment")
    p.add_argument("cnf")
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--assign", metavar="LITS", help='e.g. "1 -2 3"')
    p.add_argument("--assign-file", metavar="PATH")
    p.add_argument("--lenient", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_witness)

    p = sub.add_parser("extract", help="read the assignment out of a witness dag")
    p.add_argument("instance", help="instance graph file (expects sidecar .cnf)")
    p.add_argument("dag")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("gen", help="generate test graphs and dags")
    p.add_argument("kind", choices=["dag", "chordal", "gnp", "moralized"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", default="-")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="benchmark suites, CSV output")
    p.add_argument(
        "suite", choices=["screens-vs-exact", "eliminator-orderings", "kernel"]
    )
    p.add_argument("-o", "--out", default="-")
    p.add_argument("--cap", type=int, default=CYCLE_CAP, metavar="LEN")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "assign", None) is None and args.command == "witness":
        if args.assign_file is None:
            parser.error("witness needs --assign or --assign-file")
    try:
        return args.fn(args)
    except GraphError as exc:
        _note(f"error: {exc}")
        return EX_DATA
    except AssertionError as exc:
        _note(f"internal check failed: {exc}")
        return EX_DATA


if __name__ == "__main__":
    sys.exit(main())

"""Acceptance gate: one test per shipping requirement.

Each test prints one `[acceptance] <name>: PASS` line when it holds,
so a verbose run doubles as the release checklist.
"""

import itertools
import time

import pytest

from moralgraph.decide import MORAL, NOT_MORAL, UNKNOWN, brute_force, decide, propagate
from moralgraph.eliminate import (
    BACKTRACKING,
    ELIMINATED,
    GREEDY,
    STUCK,
    ExtremeRemoval,
    eliminate,
)
from moralgraph.fixtures import (
    clique_overlap,
    marked_edge_trap,
    twin_squares,
    wheel,
    wheel_with_ears,
)
from moralgraph.generate import gnp_capped, random_formula
from moralgraph.graphs import UndirectedGraph, is_moral_graph_of, toposort
from moralgraph.reduction import (
    ANCHOR_BLOCK,
    CLAUSE_BLOCK,
    VAR_BLOCK,
    CnfFormula,
    extract_assignment,
    forced_constraints,
    parse_cnf,
    preprocess,
    reduce,
    satisfies,
    satisfying_assignments,
    verify_instance,
    witness_dag,
)
from moralgraph.screens import (
    check_web,
    exterior_cliques,
    extreme_vertices,
    screen,
)

EXAMPLE_CNF = "p cnf 3 3\n1 2 3 0\n-1 -2 3 0\n-1 -2 -3 0\n"


def ok(name):
    print(f"[acceptance] {name}: PASS")


def committed_arcs(state):
    from moralgraph.decide import BACKWARD, FORWARD

    arcs = set()
    for i, (a, b) in enumerate(state.edges):
        if state.value[i] == FORWARD:
            arcs.add((a, b))
        elif state.value[i] == BACKWARD:
            arcs.add((b, a))
    return arcs


def test_exact_decider_matches_exhaustive_reference():
    # every labeled 5 vertex graph, then seeded 6 and 7 vertex samples
    pairs = list(itertools.combinations(range(5), 2))
    for mask in range(1 << len(pairs)):
        edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
        g = UndirectedGraph(5, edges)
        want = brute_force(g).verdict
        got = decide(g)
        assert got.verdict == want, f"disagreement on 5 vertex mask {mask}"
        if got.verdict == MORAL:
            assert is_moral_graph_of(g, got.witness)
    for seed in range(200):
        n = 6 + seed % 2
        g = gnp_capped(n, 0.5, 12, seed)
        want = brute_force(g).verdict
        got = decide(g)
        assert got.verdict == want, f"disagreement on seed {seed}"
        if got.verdict == MORAL:
            assert is_moral_graph_of(g, got.witness)
    ok("exact decider matches exhaustive reference")


def test_reference_fixture_classification():
    d = decide(wheel())
    assert d.verdict == NOT_MORAL

    g = wheel_with_ears()
    d = decide(g)
    assert d.verdict == MORAL and is_moral_graph_of(g, d.witness)

    g = clique_overlap()
    d = decide(g)
    assert d.verdict == MORAL and is_moral_graph_of(g, d.witness)
    assert check_web(g).verdict != MORAL
    want = tuple(sorted(g.id_of(x) for x in "def"))
    assert exterior_cliques(g) == [want]
    assert extreme_vertices(g) == [g.id_of("f")]

    g = twin_squares()
    rep = screen(g)
    assert rep.verdict == "Inconclusive"
    assert rep.checks["no_exterior"] == "Inconclusive"
    assert rep.checks["cycle_triangle"] == "Inconclusive"
    assert decide(g).verdict == NOT_MORAL

    assert decide(marked_edge_trap()).verdict == MORAL
    ok("reference fixture classification")


def test_eliminator_order_sensitivity():
    g = marked_edge_trap()
    out = eliminate(g, GREEDY, seed=0)
    assert out.status == STUCK
    marks = {
        (g.label(a), g.label(b))
        for step in out.trace
        if isinstance(step, ExtremeRemoval)
        for a, b in step.marked
    }
    assert {("c", "f"), ("d", "f"), ("k", "n"), ("l", "n")} <= marks

    lucky = eliminate(g, GREEDY, seed=3)
    assert lucky.status == ELIMINATED
    assert is_moral_graph_of(g, lucky.witness)

    bt = eliminate(g, BACKTRACKING)
    assert bt.status == ELIMINATED
    assert is_moral_graph_of(g, bt.witness)
    ok("eliminator order sensitivity")


def test_instance_size_law():
    for seed in range(100):
        n = 3 + seed % 3
        t = 5 + seed % 4
        f = random_formula(n, t, seed)
        inst = reduce(f)
        assert inst.graph.n == VAR_BLOCK * n + CLAUSE_BLOCK * t + ANCHOR_BLOCK
    assert reduce(parse_cnf(EXAMPLE_CNF)).graph.n == 170
    ok("instance size law")


def test_witness_pipeline_round_trip():
    done = 0
    seed = 0
    while done < 50:
        n = 3 + seed % 3
        t = 5 + seed % 4
        f = random_formula(n, t, seed)
        seed += 1
        sat = next(satisfying_assignments(f), None)
        if sat is None:
            continue
        inst = reduce(f)
        t0 = time.monotonic()
        w = witness_dag(inst, sat)
        elapsed = time.monotonic() - t0
        assert elapsed < 1.0, f"witness took {elapsed:.2f}s on seed {seed - 1}"
        assert toposort(w.n, list(w.arcs)) is not None
        assert is_moral_graph_of(inst.graph, w)
        assert extract_assignment(inst, w) == sat
        done += 1
    ok("witness pipeline round trip")


def test_forced_seed_consistency():
    inst = reduce(parse_cnf(EXAMPLE_CNF))
    st = forced_constraints(inst)
    assert propagate(st), "forced constraints must propagate without conflict"
    forced = committed_arcs(st)
    assert forced

    sat = next(satisfying_assignments(inst.formula))
    w = witness_dag(inst, sat)
    assert is_moral_graph_of(inst.graph, w)
    assert forced <= set(w.arcs)
    ok("forced seed consistency")


def test_instance_structural_invariants():
    instances = [reduce(parse_cnf(EXAMPLE_CNF))]
    for seed in range(20):
        instances.append(reduce(random_formula(3 + seed % 3, 5 + seed % 4, seed)))
    for inst in instances:
        verify_instance(inst)
    ok("instance structural invariants")


def test_screen_soundness_at_scale():
    definitive = 0
    pairs = list(itertools.combinations(range(5), 2))
    for mask in range(1 << len(pairs)):
        edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
        g = UndirectedGraph(5, edges)
        rep = screen(g)
        if rep.verdict in (MORAL, NOT_MORAL):
            definitive += 1
            assert rep.verdict == brute_force(g).verdict, f"5 vertex mask {mask}"
    for seed in range(1000):
        n = 6 + seed % 7
        g = gnp_capped(n, 0.35, 16, seed)
        rep = screen(g)
        if rep.verdict not in (MORAL, NOT_MORAL):
            continue
        dec = decide(g, use_screens=False)
        if dec.verdict == UNKNOWN:
            continue
        definitive += 1
        assert rep.verdict == dec.verdict, f"screen contradiction on seed {seed}"
    assert definitive > 1000
    ok("screen soundness at scale")


def test_unsat_instance_never_accepted():
    # all eight sign patterns over three variables: unsatisfiable, and
    # small enough to hammer within the gate's budget; nothing may say
    # Moral even though outright refutation is out of reach here
    clauses = tuple(
        (s1 * 1, s2 * 2, s3 * 3)
        for s1, s2, s3 in itertools.product((1, -1), repeat=3)
    )
    f = CnfFormula(3, clauses)
    assert next(satisfying_assignments(f), None) is None
    assert preprocess(f).formula == f
    inst = reduce(f)
    assert inst.graph.n == 280

    rep = screen(inst.graph)
    assert rep.verdict != MORAL

    out = eliminate(inst.graph, BACKTRACKING, budget=20_000)
    assert out.status != ELIMINATED

    d = decide(inst.graph, budget_nodes=200_000)
    assert d.verdict != MORAL
    ok("unsatisfiable instance never accepted")

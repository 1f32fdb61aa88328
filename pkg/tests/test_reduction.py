"""Tests for the satisfiability to morality reduction."""

import pytest

from moralgraph.decide import DELETED, FORWARD, BACKWARD, propagate
from moralgraph.generate import random_formula
from moralgraph.graphs import Dag, GraphError, is_moral_graph_of, write_graph_text
from moralgraph.reduction import (
    ANCHOR_BLOCK,
    CLAUSE_BLOCK,
    VAR_BLOCK,
    CnfFormula,
    assignment_from_text,
    assignment_to_text,
    cnf_to_text,
    extract_assignment,
    forced_constraints,
    instance_from_text,
    normalize_clauses,
    occurrences,
    parse_cnf,
    preprocess,
    reduce,
    roles_to_text,
    satisfies,
    satisfying_assignments,
    verify_instance,
    witness_dag,
)

EX_TEXT = "p cnf 3 3\n1 2 3 0\n-1 -2 3 0\n-1 -2 -3 0\n"


def example_formula():
    return parse_cnf(EX_TEXT)


def committed_arcs(state):
    arcs = set()
    for i, (a, b) in enumerate(state.edges):
        v = state.value[i]
        if v == FORWARD:
            arcs.add((a, b))
        elif v == BACKWARD:
            arcs.add((b, a))
    return arcs


class TestParseCnf:
    def test_basic(self):
        f = parse_cnf("c a comment\np cnf 3 1\n1 2 3 0\n")
        assert f.num_vars == 3
        assert f.clauses == ((1, 2, 3),)

    def test_clause_spanning_lines(self):
        f = parse_cnf("p cnf 3 2\n1 2\n3 0 -1\n-2 -3 0\n")
        assert f.clauses == ((1, 2, 3), (-1, -2, -3))

    def test_percent_trailer_ignored(self):
        f = parse_cnf("p cnf 3 1\n1 -2 3 0\n%\n")
        assert f.clauses == ((1, -2, 3),)

    @pytest.mark.parametrize(
        "text,what",
        [
            ("1 2 3 0\n", "missing header"),
            ("p cnf 3 1\n1 2 3\n", "unterminated clause"),
            ("p cnf 3 2\n1 2 3 0\n", "clause count mismatch"),
            ("p cnf 2 1\n1 2 3 0\n", "variable beyond declared"),
            ("p dnf 3 1\n1 2 3 0\n", "bad header word"),
            ("p cnf 3 1\n1 x 3 0\n", "bad literal token"),
            ("p cnf 3 1\n1 2 0\n", "two literal clause"),
            ("p cnf 3 1\n1 -1 2 0\n", "repeated variable in clause"),
        ],
    )
    def test_strict_rejections(self, text, what):
        with pytest.raises(GraphError):
            parse_cnf(text)

    def test_lenient_takes_what_it_finds(self):
        f = parse_cnf("1 2 0\n-1 -5 0\n3", strict=False)
        assert f.num_vars == 5
        assert f.clauses == ((1, 2), (-1, -5), (3,))

    def test_lenient_grows_declared_vars(self):
        f = parse_cnf("p cnf 2 1\n1 2 7 0\n", strict=False)
        assert f.num_vars == 7

    def test_literal_zero_rejected_everywhere(self):
        with pytest.raises(GraphError):
            CnfFormula(2, ((1, 0),))


class TestPreprocess:
    def test_all_positive_settles(self):
        pre = preprocess(parse_cnf("p cnf 3 1\n1 2 3 0\n"))
        assert pre.settled
        assert pre.formula is None
        assert pre.fixed == ((1, True),)
        full = pre.lift()
        assert full == {1: True, 2: True, 3: True}

    def test_example_formula_unchanged(self):
        f = example_formula()
        pre = preprocess(f)
        assert not pre.settled
        assert pre.formula == f
        assert pre.fixed == ()
        assert pre.mapping == (1, 2, 3)

    def test_cascade(self):
        # fixing the pure variable 2 removes clause one, which turns
        # variable 1 pure negative and clears the rest
        f = parse_cnf("p cnf 5 3\n1 2 3 0\n-1 4 5 0\n-4 -5 -1 0\n")
        pre = preprocess(f)
        assert pre.settled
        assert pre.fixed == ((2, True), (1, False))
        assert satisfies(f, pre.lift())

    def test_residual_renumbering(self):
        f = parse_cnf("p cnf 5 3\n2 3 4 0\n-3 -4 5 0\n3 4 -5 0\n")
        pre = preprocess(f)
        assert pre.fixed == ((2, True),)
        assert pre.mapping == (3, 4, 5)
        assert pre.formula.clauses == ((-1, -2, 3), (1, 2, -3))
        for a in satisfying_assignments(pre.formula):
            assert satisfies(f, pre.lift(a))

    def test_residual_is_reducible(self):
        # whatever survives preprocessing meets reduce's precondition
        pre = preprocess(example_formula())
        inst = reduce(pre.formula)
        assert inst.num_vars == 3


class TestNormalize:
    def test_tautology_removed(self):
        f = CnfFormula(3, ((1, -1, 2), (1, 2, 3)))
        out, notes = normalize_clauses(f)
        assert out.clauses == ((1, 2, 3),)
        assert any("tautology" in n for n in notes)

    def test_duplicate_literal_dropped(self):
        out, notes = normalize_clauses(CnfFormula(3, ((1, 1, 2, 3),)))
        assert out.clauses == ((1, 2, 3),)
        assert any("duplicate" in n for n in notes)

    def test_repeated_clause_removed(self):
        out, notes = normalize_clauses(CnfFormula(3, ((1, 2, 3), (3, 2, 1))))
        assert out.clauses == ((1, 2, 3),)
        assert any("repeated" in n for n in notes)

    def test_short_clause_padded_both_ways(self):
        out, notes = normalize_clauses(CnfFormula(2, ((1, 2),)))
        assert out.num_vars == 3
        assert out.clauses == ((1, 2, 3), (1, 2, -3))

    def test_unit_clause_padding(self):
        out, _ = normalize_clauses(CnfFormula(1, ((1,),)))
        assert out.num_vars == 3
        assert len(out.clauses) == 4
        for bits in range(8):
            a = {i + 1: bool(bits >> i & 1) for i in range(3)}
            assert satisfies(out, a) == a[1]


class TestReduce:
    def test_example_instance_size(self):
        inst = reduce(example_formula())
        assert inst.graph.n == 170
        assert inst.graph.m == 261
        assert (inst.num_vars, inst.num_clauses) == (3, 3)

    def test_two_clause_instance_size(self):
        inst = reduce(parse_cnf("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n"))
        assert (inst.graph.n, inst.graph.m) == (148, 224)

    @pytest.mark.parametrize("seed", range(6))
    def test_vertex_count_law(self, seed):
        f = random_formula(4, 5, seed)
        inst = reduce(f)
        n, t = inst.num_vars, inst.num_clauses
        assert inst.graph.n == VAR_BLOCK * n + CLAUSE_BLOCK * t + ANCHOR_BLOCK

    def test_single_polarity_rejected(self):
        f = CnfFormula(3, ((1, 2, 3), (1, -2, -3)))
        with pytest.raises(GraphError, match="polarit"):
            reduce(f)

    def test_short_clause_rejected(self):
        with pytest.raises(GraphError):
            reduce(CnfFormula(2, ((1, -2),)))

    def test_empty_formula_rejected(self):
        with pytest.raises(GraphError):
            reduce(CnfFormula(0, ()))

    def test_vertex_names(self):
        inst = reduce(example_formula())
        g = inst.graph
        assert g.label(inst.pos(1, 0)) == "v1p0"
        assert g.label(inst.neg(2, 15)) == "v2n15"
        assert g.label(inst.cls(3, 21)) == "c3s21"
        assert g.label(inst.anchor(7)) == "a7"

    def test_literal_clique(self):
        # the negative literal of variable 1 sits in clauses 2 and 3,
        # so its two slots form a clique with the hub
        inst = reduce(example_formula())
        g = inst.graph
        s2, s3 = inst.cls(2, 0), inst.cls(3, 0)
        h = inst.hub(-1)
        assert g.label(h) == "v1n15"
        assert g.has_edge(s2, s3)
        assert g.has_edge(s2, h) and g.has_edge(s3, h)

    def test_variable_chain(self):
        inst = reduce(example_formula())
        g = inst.graph
        assert g.has_edge(inst.anchor(0), inst.pos(1, 0))
        assert g.has_edge(inst.neg(1, 0), inst.pos(2, 0))
        assert g.has_edge(inst.neg(2, 0), inst.pos(3, 0))
        assert g.has_edge(inst.neg(3, 0), inst.anchor(5))

    def test_occurrences(self):
        occ = occurrences(example_formula())
        assert occ[1] == [(1, 0)]
        assert occ[-1] == [(2, 0), (3, 0)]
        assert occ[3] == [(1, 2), (2, 2)]
        assert occ[-3] == [(3, 2)]

    def test_self_check_catches_tampering(self):
        inst = reduce(example_formula())
        g = inst.graph
        edges = list(g.edges)
        edges.remove((inst.pos(1, 14), inst.pos(1, 15)))
        from moralgraph.graphs import UndirectedGraph

        inst.graph = UndirectedGraph(g.n, edges, names=list(g.names))
        with pytest.raises(AssertionError):
            verify_instance(inst)

    def test_roles_cover_every_vertex(self):
        inst = reduce(example_formula())
        rows = inst.roles()
        assert len(rows) == inst.graph.n
        assert rows[0] == ("v1p0", "var", 1, 0, "+")
        kinds = {r[1] for r in rows}
        assert kinds == {"var", "clause", "anchor"}


class TestForcedConstraints:
    def test_propagation_is_consistent(self):
        inst = reduce(example_formula())
        st = forced_constraints(inst)
        assert propagate(st)

    def test_anchor_rail_arcs(self):
        inst = reduce(example_formula())
        st = forced_constraints(inst)
        assert propagate(st)
        arcs = committed_arcs(st)
        A = inst.anchor
        assert (A(5), A(6)) in arcs
        assert (A(6), A(7)) in arcs
        for i in range(1, inst.num_clauses + 1):
            assert (A(7), inst.cls(i, 21)) in arcs

    def test_chain_arcs(self):
        inst = reduce(example_formula())
        st = forced_constraints(inst)
        assert propagate(st)
        arcs = committed_arcs(st)
        assert (inst.anchor(0), inst.pos(1, 0)) in arcs
        assert (inst.neg(1, 0), inst.pos(2, 0)) in arcs
        assert (inst.neg(3, 0), inst.anchor(5)) in arcs

    def test_hub_feeds(self):
        inst = reduce(example_formula())
        st = forced_constraints(inst)
        assert propagate(st)
        arcs = committed_arcs(st)
        for i in (1, 2, 3):
            assert (inst.pos(i, 15), inst.pos(i, 14)) in arcs
            assert (inst.neg(i, 15), inst.neg(i, 14)) in arcs

    def test_forced_arcs_appear_in_witnesses(self):
        inst = reduce(example_formula())
        st = forced_constraints(inst)
        assert propagate(st)
        forced = committed_arcs(st)
        w = witness_dag(inst, {1: True, 2: False, 3: False})
        assert forced <= set(w.arcs)


class TestWitness:
    def test_example_witness(self):
        inst = reduce(example_formula())
        a = {1: True, 2: False, 3: False}
        w = witness_dag(inst, a)
        assert is_moral_graph_of(inst.graph, w)
        assert extract_assignment(inst, w) == a

    def test_every_satisfying_assignment_extends(self):
        f = example_formula()
        inst = reduce(f)
        sats = list(satisfying_assignments(f))
        assert len(sats) == 5
        for a in sats:
            w = witness_dag(inst, a)
            assert is_moral_graph_of(inst.graph, w)
            assert extract_assignment(inst, w) == a

    def test_falsifying_assignment_refused(self):
        inst = reduce(example_formula())
        with pytest.raises(GraphError, match="does not satisfy"):
            witness_dag(inst, {1: False, 2: False, 3: False})

    def test_starved_budget_raises(self):
        inst = reduce(example_formula())
        with pytest.raises(GraphError, match="witness search failed"):
            witness_dag(inst, {1: True, 2: False, 3: False}, budget_nodes=1)

    @pytest.mark.parametrize("seed", range(4))
    def test_random_formulas_round_trip(self, seed):
        f = random_formula(4, 6, seed)
        inst = reduce(f)
        for a in satisfying_assignments(f):
            w = witness_dag(inst, a)
            assert extract_assignment(inst, w) == a
            break


class TestExtraction:
    def test_unoriented_crossing_rejected(self):
        inst = reduce(example_formula())
        w = witness_dag(inst, {1: True, 2: False, 3: False})
        crossings = {
            frozenset((inst.pos(i, 8), inst.neg(i, 8)))
            for i in range(1, inst.num_vars + 1)
        }
        arcs = [ab for ab in w.arcs if frozenset(ab) not in crossings]
        stripped = Dag(w.n, arcs, names=list(w.names))
        with pytest.raises(GraphError, match="unoriented"):
            extract_assignment(inst, stripped)

    def test_falsifying_orientation_rejected(self):
        inst = reduce(example_formula())
        arcs = [
            (inst.neg(i, 8), inst.pos(i, 8)) for i in range(1, inst.num_vars + 1)
        ]
        fake = Dag(inst.graph.n, arcs)
        with pytest.raises(GraphError, match="does not satisfy"):
            extract_assignment(inst, fake)


class TestTextFormats:
    def test_assignment_round_trip(self):
        a = {1: True, 2: False, 3: True}
        text = assignment_to_text(a)
        assert text == "v 1 -2 3 0\n"
        assert assignment_from_text(text) == a

    def test_assignment_without_v_prefix(self):
        assert assignment_from_text("1 -2 0\n") == {1: True, 2: False}

    def test_assignment_with_comments_and_lines(self):
        text = "c solver says\nv 1 -2\nv 3 0\n"
        assert assignment_from_text(text) == {1: True, 2: False, 3: True}

    def test_empty_assignment_rejected(self):
        with pytest.raises(GraphError):
            assignment_from_text("c nothing\n")

    def test_cnf_round_trip(self):
        f = example_formula()
        assert parse_cnf(cnf_to_text(f)) == f

    def test_cnf_comments(self):
        text = cnf_to_text(example_formula(), comments=("made for a test",))
        assert text.startswith("c made for a test\np cnf 3 3\n")

    def test_roles_text(self):
        inst = reduce(example_formula())
        lines = roles_to_text(inst).splitlines()
        assert len(lines) == inst.graph.n
        assert lines[0] == "role v1p0 var 1 0 +"
        assert lines[-1] == "role a7 anchor 0 7 ."

    def test_instance_round_trip(self):
        f = example_formula()
        inst = reduce(f)
        back = instance_from_text(write_graph_text(inst.graph), cnf_to_text(f))
        assert back.graph.n == inst.graph.n
        assert set(back.graph.edges) == set(inst.graph.edges)

    def test_instance_mismatch_detected(self):
        f = example_formula()
        inst = reduce(f)
        text = write_graph_text(inst.graph)
        bad = text.replace("v1p14 v1p15\n", "v1p13 v1p15\n", 1)
        with pytest.raises(GraphError, match="does not match"):
            instance_from_text(bad, cnf_to_text(f))

    def test_instance_against_wrong_formula(self):
        f = example_formula()
        inst = reduce(f)
        other = parse_cnf("p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n")
        with pytest.raises(GraphError, match="does not match"):
            instance_from_text(write_graph_text(inst.graph), cnf_to_text(other))

"""End to end tests of the command line, run as subprocesses."""

import csv
import io
import subprocess
import sys

import pytest

from moralgraph import __version__
from moralgraph.fixtures import clique_overlap, marked_edge_trap, twin_squares, wheel
from moralgraph.generate import moralized
from moralgraph.graphs import (
    align_dag,
    is_chordal,
    is_moral_graph_of,
    moralize,
    read_dag_text,
    read_graph_text,
    write_graph_text,
)
from moralgraph.reduction import TEMPLATE_TABLE_DIGEST

EX_CNF = "p cnf 3 3\n1 2 3 0\n-1 -2 3 0\n-1 -2 -3 0\n"


def run(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "moralgraph", *args],
        input=stdin,
        capture_output=True,
        text=True,
    )


class TestTopLevel:
    def test_version(self):
        r = run("--version")
        assert r.returncode == 0
        assert r.stdout == f"moralgraph {__version__} template-table {TEMPLATE_TABLE_DIGEST}\n"

    def test_no_command_is_usage_error(self):
        assert run().returncode == 64

    def test_unknown_command_is_usage_error(self):
        assert run("frobnicate").returncode == 64

    def test_unknown_flag_is_usage_error(self):
        assert run("check", "-", "--goose").returncode == 64


class TestCheck:
    def test_moral_graph_exits_zero(self):
        r = run("check", "-", stdin=write_graph_text(clique_overlap()))
        assert r.returncode == 0
        assert "verdict: Moral" in r.stdout
        assert "time_ms" in r.stderr

    def test_not_moral_graph_exits_one(self):
        r = run("check", "-", stdin=write_graph_text(wheel()))
        assert r.returncode == 1
        assert "verdict: NotMoral" in r.stdout

    def test_search_refutation_exits_one(self):
        r = run("check", "-", stdin=write_graph_text(twin_squares()))
        assert r.returncode == 1

    def test_budget_blown_exits_two(self):
        text = write_graph_text(moralized(12, 0.3, 3))
        r = run("check", "-", "--budget-nodes", "2", stdin=text)
        assert r.returncode == 2
        assert "verdict: Unknown" in r.stdout

    def test_stdout_is_byte_stable(self):
        text = write_graph_text(marked_edge_trap())
        a = run("check", "-", stdin=text)
        b = run("check", "-", stdin=text)
        assert a.stdout == b.stdout
        assert a.returncode == b.returncode == 0

    def test_keyvalue_format(self):
        r = run("check", "-", "--format", "keyvalue", stdin=write_graph_text(wheel()))
        assert r.returncode == 1
        assert "verdict=NotMoral" in r.stdout

    def test_screens_only_settles_wheel(self):
        r = run("check", "-", "--screens-only", stdin=write_graph_text(wheel()))
        assert r.returncode == 1
        assert "no_exterior" in r.stdout

    def test_screens_only_punts_on_twin_squares(self):
        r = run("check", "-", "--screens-only", stdin=write_graph_text(twin_squares()))
        assert r.returncode == 2
        assert "verdict: Unknown" in r.stdout

    def test_witness_file(self, tmp_path):
        g = clique_overlap()
        out = tmp_path / "w.dag"
        r = run("check", "-", "--witness", str(out), stdin=write_graph_text(g))
        assert r.returncode == 0
        d = align_dag(read_dag_text(out.read_text()), g)
        assert is_moral_graph_of(g, d)

    def test_witness_dot_file(self, tmp_path):
        out = tmp_path / "w.dot"
        r = run("check", "-", "--witness", str(out), stdin=write_graph_text(clique_overlap()))
        assert r.returncode == 0
        assert out.read_text().startswith("digraph {")

    def test_explain_writes_trace(self, tmp_path):
        out = tmp_path / "trace.txt"
        r = run(
            "check", "-", "--explain", str(out),
            stdin=write_graph_text(marked_edge_trap()),
        )
        assert r.returncode == 0
        assert "settled_by: eliminator.backtracking" in r.stdout
        lines = out.read_text().splitlines()
        assert lines
        assert all(l.startswith(("extreme ", "unmark ")) for l in lines)

    def test_explain_greedy_falls_back(self, tmp_path):
        out = tmp_path / "trace.txt"
        r = run(
            "check", "-", "--explain", str(out), "--strategy", "greedy",
            stdin=write_graph_text(marked_edge_trap()),
        )
        assert r.returncode == 0
        assert "falling back" in r.stderr
        assert "verdict: Moral" in r.stdout
        assert not out.exists()

    def test_portfolio(self):
        r = run(
            "check", "-", "--portfolio", "3",
            stdin=write_graph_text(clique_overlap()),
        )
        assert r.returncode == 0
        assert "portfolio: 3" in r.stdout

    def test_garbage_graph_exits_65(self):
        r = run("check", "-", stdin="not a graph at all\n")
        assert r.returncode == 65
        assert "error:" in r.stderr


class TestMoralize:
    def test_collider_marriage(self):
        r = run("moralize", "-", stdin="dag 3\na -> c\nb -> c\n")
        assert r.returncode == 0
        g = read_graph_text(r.stdout)
        assert g.m == 3

    def test_dot_output(self, tmp_path):
        out = tmp_path / "g.dot"
        r = run("moralize", "-", "-o", str(out), stdin="dag 3\na -> c\nb -> c\n")
        assert r.returncode == 0
        assert out.read_text().startswith("graph {")

    def test_cycle_rejected(self):
        r = run("moralize", "-", stdin="dag 2\na -> b\nb -> a\n")
        assert r.returncode == 65


class TestReduceWitnessExtract:
    def test_full_chain(self, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text(EX_CNF)
        inst_path = tmp_path / "inst.graph"

        r = run("reduce", str(cnf), "-o", str(inst_path))
        assert r.returncode == 0
        assert "instance: 170 vertices, 261 edges" in r.stdout
        assert f"template: {TEMPLATE_TABLE_DIGEST}" in r.stdout
        assert inst_path.exists()
        roles = (tmp_path / "inst.graph.roles").read_text().splitlines()
        assert len(roles) == 170
        assert roles[0].startswith("role v1p0 var 1 0 +")

        dag_path = tmp_path / "w.dag"
        r = run(
            "witness", str(cnf), "--assign", "1 -2 -3", "-o", str(dag_path)
        )
        assert r.returncode == 0
        assert "witness: verified, 170 vertices" in r.stdout

        r = run("extract", str(inst_path), str(dag_path))
        assert r.returncode == 0
        assert r.stdout.splitlines()[0] == "v 1 -2 -3 0"
        assert "satisfies: yes" in r.stdout

    def test_reduce_settled_formula(self, tmp_path):
        cnf = tmp_path / "pure.cnf"
        cnf.write_text("p cnf 3 1\n1 2 3 0\n")
        r = run("reduce", str(cnf))
        assert r.returncode == 0
        assert "settled: satisfiable by pure literals" in r.stdout
        assert "v 1 2 3 0" in r.stdout

    def test_reduce_lenient_repairs(self, tmp_path):
        cnf = tmp_path / "short.cnf"
        cnf.write_text("p cnf 2 2\n1 2 0\n-1 -2 0\n")
        r = run("reduce", str(cnf), "--lenient", "-o", str(tmp_path / "i.graph"))
        assert r.returncode == 0
        assert "padded with fresh variable" in r.stderr

    def test_reduce_strict_rejects_short_clause(self, tmp_path):
        cnf = tmp_path / "short.cnf"
        cnf.write_text("p cnf 2 2\n1 2 0\n-1 -2 0\n")
        assert run("reduce", str(cnf)).returncode == 65

    def test_witness_requires_assignment_flag(self, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text(EX_CNF)
        assert run("witness", str(cnf)).returncode == 64

    def test_witness_refuses_falsifying_assignment(self, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text(EX_CNF)
        r = run("witness", str(cnf), "--assign", "-1 -2 -3")
        assert r.returncode == 65
        assert "does not satisfy" in r.stderr

    def test_witness_defaults_free_variables(self, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text(EX_CNF)
        r = run("witness", str(cnf), "--assign", "-1", "-o", str(tmp_path / "w.dag"))
        assert r.returncode == 0
        assert "defaulting true" in r.stderr

    def test_witness_assign_file(self, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text(EX_CNF)
        af = tmp_path / "model.txt"
        af.write_text("v 1 -2 -3 0\n")
        r = run(
            "witness", str(cnf), "--assign-file", str(af),
            "-o", str(tmp_path / "w.dag"),
        )
        assert r.returncode == 0

    def test_extract_rejects_stale_instance(self, tmp_path):
        cnf = tmp_path / "f.cnf"
        cnf.write_text(EX_CNF)
        inst_path = tmp_path / "inst.graph"
        dag_path = tmp_path / "w.dag"
        assert run("reduce", str(cnf), "-o", str(inst_path)).returncode == 0
        assert (
            run("witness", str(cnf), "--assign", "1 -2 -3", "-o", str(dag_path)).returncode
            == 0
        )
        text = inst_path.read_text()
        inst_path.write_text(text.replace("v1p14 v1p15\n", "v1p13 v1p15\n", 1))
        r = run("extract", str(inst_path), str(dag_path))
        assert r.returncode == 65
        assert "does not match" in r.stderr


class TestGen:
    def test_gnp(self):
        r = run("gen", "gnp", "--n", "8", "--seed", "3")
        assert r.returncode == 0
        assert read_graph_text(r.stdout).n == 8

    def test_dag(self):
        r = run("gen", "dag", "--n", "6", "--p", "0.5")
        assert r.returncode == 0
        assert read_dag_text(r.stdout).n == 6

    def test_chordal(self):
        r = run("gen", "chordal", "--n", "9", "--seed", "2")
        assert r.returncode == 0
        assert is_chordal(read_graph_text(r.stdout))[0]

    def test_moralized_output_is_moral(self):
        r = run("gen", "moralized", "--n", "8", "--seed", "4")
        g = read_graph_text(r.stdout)
        chk = run("check", "-", stdin=write_graph_text(g))
        assert chk.returncode == 0

    def test_determinism(self):
        a = run("gen", "gnp", "--n", "10", "--seed", "7")
        b = run("gen", "gnp", "--n", "10", "--seed", "7")
        assert a.stdout == b.stdout


class TestBench:
    @pytest.mark.parametrize(
        "suite", ["kernel", "eliminator-orderings", "screens-vs-exact"]
    )
    def test_suites_emit_csv(self, suite):
        r = run("bench", suite)
        assert r.returncode == 0
        rows = list(csv.reader(io.StringIO(r.stdout)))
        assert len(rows) > 1
        width = len(rows[0])
        assert all(len(row) == width for row in rows)

    def test_screens_never_disagree_with_exact(self):
        r = run("bench", "screens-vs-exact")
        assert "mismatches: 0" in r.stderr

"""3-SAT to graph-morality reduction.

A formula with n variables and t clauses maps to a graph on
32n + 22t + 8 vertices: one 16-slot block per literal polarity of each
variable, one 22-slot block per clause, and an 8-slot anchor block
that chains everything together. The graph is moral exactly when the
formula is satisfiable; a witness dag encodes a satisfying assignment
in the orientation of each variable's crossing edge (slot 8 to slot 8
between the two polarity blocks), and every satisfying assignment
extends to a witness dag.

Slot conventions inside the blocks:
  variable side: 0 chain port, 1-2 entry triangle, 3-6 entry cycle,
    7 spare sink, 8 crossing switch, 9-11 and 13-14 switch cycles,
    12 relay, 15 literal hub.
  clause: 0-2 literal slots, 3-5 collectors, 6-11 forced pairs,
    12-17 descent rails, 18-20 term tops, 21 clause top.
  anchor: 0 start funnel, 1-4 start cycle, 5-7 tail rail.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional

from .decide import PartialOrientation, decide, MORAL
from .graphs import Dag, GraphError, UndirectedGraph, read_graph_text

VAR_BLOCK = 32
SIDE_BLOCK = 16
CLAUSE_BLOCK = 22
ANCHOR_BLOCK = 8

# Intra-block edge templates, in slot numbers. These three tables plus
# the inter-block rules below fully determine every generated graph.
SIDE_EDGES = (
    (0, 1), (0, 2), (1, 2),
    (2, 3), (2, 4),
    (3, 4), (3, 5), (5, 6), (6, 4),
    (5, 12), (12, 13),
    (10, 11), (11, 14), (14, 13), (13, 10),
    (8, 10), (8, 11), (8, 13), (8, 14),
    (9, 10), (9, 11),
    (7, 9),
    (14, 15),
)

CLAUSE_TERM_EDGES = tuple(
    e
    for k in range(3)
    for e in (
        (k, k + 3),
        (k + 3, 6 + 2 * k),
        (k + 3, 7 + 2 * k),
        (6 + 2 * k, 7 + 2 * k),
        (6 + 2 * k, 12 + 2 * k),
        (12 + 2 * k, 13 + 2 * k),
        (13 + 2 * k, 7 + 2 * k),
        (18 + k, 12 + 2 * k),
    )
)

CLAUSE_TOP_EDGES = ((18, 19), (18, 20), (18, 21), (19, 20), (19, 21), (20, 21))

ANCHOR_EDGES = (
    (1, 2), (2, 3), (3, 4), (4, 1),
    (0, 1), (0, 2),
    (5, 6), (6, 7),
)

CROSS_SLOTS = (1, 8)

TEMPLATE_TABLE_DIGEST = hashlib.sha256(
    repr(
        (
            VAR_BLOCK,
            SIDE_BLOCK,
            CLAUSE_BLOCK,
            ANCHOR_BLOCK,
            SIDE_EDGES,
            CLAUSE_TERM_EDGES,
            CLAUSE_TOP_EDGES,
            ANCHOR_EDGES,
            CROSS_SLOTS,
        )
    ).encode()
).hexdigest()[:16]


@dataclass(frozen=True)
class CnfFormula:
    """CNF over variables 1..num_vars; literals are signed ints."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise GraphError("negative variable count")
        for cl in self.clauses:
            for lit in cl:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise GraphError(f"literal {lit} out of range")


def parse_cnf(text: str, strict: bool = True) -> CnfFormula:
    """Parse DIMACS cnf text.

    Comment lines start with c, the header is `p cnf <vars> <clauses>`,
    and clauses are 0 terminated integer runs that may span lines.
    strict mode insists the header counts match the body and that every
    clause has three distinct variables; lenient mode takes the body as
    found (growing num_vars to fit) for normalize_clauses to repair.
    """
    num_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise GraphError(f"bad header: {line!r}")
            num_vars = int(parts[2])
            declared = int(parts[3])
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise GraphError(f"bad literal token {tok!r}") from exc
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if cur:
        if strict:
            raise GraphError("unterminated clause at end of input")
        clauses.append(tuple(cur))
    if num_vars is None:
        if strict:
            raise GraphError("missing p cnf header")
        num_vars = max((abs(l) for cl in clauses for l in cl), default=0)
    if strict and declared is not None and declared != len(clauses):
        raise GraphError(f"header declares {declared} clauses, found {len(clauses)}")
    seen = max((abs(l) for cl in clauses for l in cl), default=0)
    if seen > num_vars:
        if strict:
            raise GraphError(f"variable {seen} exceeds declared {num_vars}")
        num_vars = seen
    if strict:
        for cl in clauses:
            if len(cl) != 3 or len({abs(l) for l in cl}) != 3:
                raise GraphError(
                    f"clause {cl} needs three distinct variables (use lenient mode to repair)"
                )
    return CnfFormula(num_vars, tuple(clauses))


@dataclass(frozen=True)
class PreprocessResult:
    """Pure literal elimination outcome.

    formula is the residual formula renumbered to compact variable ids,
    or None when every clause was eliminated (the input is satisfiable
    outright). fixed lists (original variable, value) pairs in the
    order they were eliminated; mapping[i - 1] gives the original id of
    residual variable i. Variables that end up in no clause are simply
    dropped and lift() defaults them to true.
    """

    orig_num_vars: int
    formula: Optional[CnfFormula]
    fixed: tuple[tuple[int, bool], ...] = ()
    mapping: tuple[int, ...] = ()

    @property
    def settled(self) -> bool:
        return self.formula is None

    def lift(self, assignment: Optional[dict[int, bool]] = None) -> dict[int, bool]:
        """Turn an assignment of the residual into one of the original."""
        full = {v: True for v in range(1, self.orig_num_vars + 1)}
        for var, value in self.fixed:
            full[var] = value
        if assignment:
            for var, value in assignment.items():
                full[self.mapping[var - 1]] = value
        return full


def preprocess(f: CnfFormula) -> PreprocessResult:
    """Eliminate pure literals to fixpoint.

    A variable occurring with only one polarity is fixed to satisfy its
    clauses, which are then removed; repeat until every remaining
    variable occurs both positively and negatively. The residual
    formula (if any) is exactly what reduce() accepts. Clause order and
    content survive untouched; only whole clauses are removed.
    """
    alive = list(f.clauses)
    fixed: list[tuple[int, bool]] = []
    while alive:
        polarity: dict[int, set[bool]] = {}
        for cl in alive:
            for lit in cl:
                polarity.setdefault(abs(lit), set()).add(lit > 0)
        pure = None
        for var in sorted(polarity):
            if len(polarity[var]) == 1:
                pure = (var, polarity[var].pop())
                break
        if pure is None:
            break
        var, value = pure
        lit = var if value else -var
        fixed.append((var, value))
        alive = [cl for cl in alive if lit not in cl]
    if not alive:
        return PreprocessResult(f.num_vars, None, tuple(fixed))
    used = sorted({abs(lit) for cl in alive for lit in cl})
    renum = {v: i + 1 for i, v in enumerate(used)}
    clauses = tuple(
        tuple(renum[abs(lit)] * (1 if lit > 0 else -1) for lit in cl) for cl in alive
    )
    residual = CnfFormula(len(used), clauses)
    return PreprocessResult(f.num_vars, residual, tuple(fixed), tuple(used))


def normalize_clauses(f: CnfFormula) -> tuple[CnfFormula, list[str]]:
    """Lenient clause repair: report what changed alongside the result.

    Duplicate literals inside a clause are dropped, tautological and
    repeated clauses are removed, and clauses left with fewer than
    three variables are padded with fresh variables, splitting into two
    clauses per missing slot so the padding variable appears in both
    polarities and satisfiability is untouched.
    """
    notes: list[str] = []
    num_vars = f.num_vars
    work: list[tuple[int, ...]] = []
    seen = set()
    for cl in f.clauses:
        lits = tuple(dict.fromkeys(cl))
        if len(lits) != len(cl):
            notes.append(f"clause {cl}: dropped duplicate literals")
        if any(-l in lits for l in lits):
            notes.append(f"clause {cl}: tautology removed")
            continue
        key = tuple(sorted(lits))
        if key in seen:
            notes.append(f"clause {cl}: repeated clause removed")
            continue
        seen.add(key)
        work.append(lits)
    out: list[tuple[int, ...]] = []
    for lits in work:
        short = [lits]
        while len(short[0]) < 3:
            num_vars += 1
            notes.append(f"clause {lits}: padded with fresh variable {num_vars}")
            short = [cl + (num_vars,) for cl in short] + [cl + (-num_vars,) for cl in short]
        out.extend(short)
    return CnfFormula(num_vars, tuple(out)), notes


def satisfies(f: CnfFormula, assignment: dict[int, bool]) -> bool:
    for cl in f.clauses:
        if not any(assignment[abs(l)] == (l > 0) for l in cl):
            return False
    return True


def satisfying_assignments(f: CnfFormula) -> Iterator[dict[int, bool]]:
    """Enumerate satisfying assignments by trying all 2^n candidates."""
    n = f.num_vars
    for bits in range(1 << n):
        a = {i + 1: bool((bits >> i) & 1) for i in range(n)}
        if satisfies(f, a):
            yield a


@dataclass
class MoralityInstance:
    """Reduction output: the graph plus enough layout to read it back."""

    formula: CnfFormula
    graph: UndirectedGraph
    num_vars: int
    num_clauses: int

    def pos(self, i: int, j: int) -> int:
        """Slot j of variable i's positive block (1 based variable index)."""
        return (i - 1) * VAR_BLOCK + j

    def neg(self, i: int, j: int) -> int:
        return (i - 1) * VAR_BLOCK + SIDE_BLOCK + j

    def cls(self, i: int, j: int) -> int:
        return VAR_BLOCK * self.num_vars + (i - 1) * CLAUSE_BLOCK + j

    def anchor(self, j: int) -> int:
        return VAR_BLOCK * self.num_vars + CLAUSE_BLOCK * self.num_clauses + j

    def hub(self, lit: int) -> int:
        """Literal hub vertex (slot 15 on the matching polarity block)."""
        return self.pos(abs(lit), 15) if lit > 0 else self.neg(abs(lit), 15)

    def slot(self, clause_index: int, term: int) -> int:
        return self.cls(clause_index, term)

    def roles(self) -> list[tuple[str, str, int, int, str]]:
        """(name, kind, index, slot, polarity) rows for every vertex."""
        g = self.graph
        rows = []
        for i in range(1, self.num_vars + 1):
            for j in range(SIDE_BLOCK):
                rows.append((g.label(self.pos(i, j)), "var", i, j, "+"))
            for j in range(SIDE_BLOCK):
                rows.append((g.label(self.neg(i, j)), "var", i, j, "-"))
        for i in range(1, self.num_clauses + 1):
            for j in range(CLAUSE_BLOCK):
                rows.append((g.label(self.cls(i, j)), "clause", i, j, "."))
        for j in range(ANCHOR_BLOCK):
            rows.append((g.label(self.anchor(j)), "anchor", 0, j, "."))
        return rows


def occurrences(f: CnfFormula) -> dict[int, list[tuple[int, int]]]:
    """literal -> list of (clause index, term position), 1 based clauses."""
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, cl in enumerate(f.clauses, start=1):
        for k, lit in enumerate(cl):
            occ.setdefault(lit, []).append((ci, k))
    return occ


def reduce(f: CnfFormula) -> MoralityInstance:
    """Build the morality instance for a normalized 3-CNF formula.

    Requires every clause to have exactly three literals on three
    distinct variables and every variable to occur both positively and
    negatively (preprocess establishes that). The output graph always
    passes the structural self check; a failure there means the
    construction itself is broken and is raised rather than returned.
    """
    n, t = f.num_vars, len(f.clauses)
    if n < 1:
        raise GraphError("reduction needs at least one variable")
    for cl in f.clauses:
        if len(cl) != 3 or len({abs(l) for l in cl}) != 3:
            raise GraphError(f"clause {cl} is not three distinct variables")
    polarity: dict[int, set[bool]] = {}
    for cl in f.clauses:
        for lit in cl:
            polarity.setdefault(abs(lit), set()).add(lit > 0)
    for var in range(1, n + 1):
        if len(polarity.get(var, ())) != 2:
            raise GraphError(
                f"variable {var} does not occur in both polarities; preprocess first"
            )

    total = VAR_BLOCK * n + CLAUSE_BLOCK * t + ANCHOR_BLOCK
    names = [""] * total
    inst = MoralityInstance(f, None, n, t)  # type: ignore[arg-type]
    for i in range(1, n + 1):
        for j in range(SIDE_BLOCK):
            names[inst.pos(i, j)] = f"v{i}p{j}"
            names[inst.neg(i, j)] = f"v{i}n{j}"
    for i in range(1, t + 1):
        for j in range(CLAUSE_BLOCK):
            names[inst.cls(i, j)] = f"c{i}s{j}"
    for j in range(ANCHOR_BLOCK):
        names[inst.anchor(j)] = f"a{j}"

    edges: list[tuple[int, int]] = []
    for a, b in ANCHOR_EDGES:
        edges.append((inst.anchor(a), inst.anchor(b)))
    for i in range(1, n + 1):
        for a, b in SIDE_EDGES:
            edges.append((inst.pos(i, a), inst.pos(i, b)))
            edges.append((inst.neg(i, a), inst.neg(i, b)))
        for j in CROSS_SLOTS:
            edges.append((inst.pos(i, j), inst.neg(i, j)))
    for i in range(1, t + 1):
        for a, b in CLAUSE_TERM_EDGES:
            edges.append((inst.cls(i, a), inst.cls(i, b)))
        for a, b in CLAUSE_TOP_EDGES:
            edges.append((inst.cls(i, a), inst.cls(i, b)))
    # Inter-block rules: start funnel into the first variable, polarity
    # chain through all variables, tail rail, tail fanout to clause
    # tops, and one clique per literal tying its slots to its hub.
    edges.append((inst.anchor(0), inst.pos(1, 0)))
    for i in range(1, n):
        edges.append((inst.neg(i, 0), inst.pos(i + 1, 0)))
    edges.append((inst.neg(n, 0), inst.anchor(5)))
    for i in range(1, t + 1):
        edges.append((inst.anchor(7), inst.cls(i, 21)))
    for lit, occ in sorted(occurrences(f).items()):
        slots = [inst.slot(ci, k) for ci, k in occ]
        h = inst.hub(lit)
        for s in slots:
            edges.append((s, h))
        for s, s2 in combinations(slots, 2):
            edges.append((s, s2))

    inst.graph = UndirectedGraph(total, edges, names=names)
    verify_instance(inst)
    return inst


def verify_instance(inst: MoralityInstance) -> None:
    """Structural self check of a generated instance; raises on failure.

    Re-derives the load bearing incidences from the layout: blocked
    4-cycles where required, forced adjacencies and non-adjacencies,
    the clause collector wiring, mirror symmetry of the two polarity
    blocks, and the vertex count law.
    """
    g = inst.graph
    f = inst.formula
    n, t = inst.num_vars, inst.num_clauses

    def chk(cond: bool, what: str) -> None:
        if not cond:
            raise AssertionError(f"instance self check failed: {what}")

    chk(g.n == VAR_BLOCK * n + CLAUSE_BLOCK * t + ANCHOR_BLOCK, "vertex count law")

    expected_m = (
        len(ANCHOR_EDGES)
        + n * (2 * len(SIDE_EDGES) + len(CROSS_SLOTS))
        + t * (len(CLAUSE_TERM_EDGES) + len(CLAUSE_TOP_EDGES))
        + 1 + (n - 1) + 1 + t
        + sum(len(o) + len(o) * (len(o) - 1) // 2 for o in occurrences(f).values())
    )
    chk(g.m == expected_m, "edge count law")

    A = inst.anchor
    ring = [A(1), A(2), A(3), A(4)]
    for i in range(4):
        chk(g.has_edge(ring[i], ring[(i + 1) % 4]), "anchor ring edge")
    chk(not g.has_edge(A(1), A(3)) and not g.has_edge(A(2), A(4)), "anchor ring chord")
    chk(g.has_edge(A(0), A(1)) and g.has_edge(A(0), A(2)), "anchor funnel")
    chk(not g.has_edge(A(0), inst.pos(1, 2)), "funnel stays off the triangle")
    chk(g.has_edge(A(0), inst.pos(1, 0)), "funnel reaches first chain port")
    chk(g.has_edge(A(5), A(6)) and g.has_edge(A(6), A(7)), "tail rail")
    chk(not g.has_edge(A(5), A(7)), "tail rail chord")
    for i in range(1, t + 1):
        chk(g.has_edge(A(7), inst.cls(i, 21)), "tail fanout")
        chk(not g.has_edge(A(6), inst.cls(i, 21)), "fanout only from the tail end")

    for i in range(1, n + 1):
        for side in (inst.pos, inst.neg):
            s = lambda j: side(i, j)
            chk(
                g.has_edge(s(0), s(1)) and g.has_edge(s(0), s(2)) and g.has_edge(s(1), s(2)),
                "entry triangle",
            )
            cyc = [s(3), s(4), s(6), s(5)]
            for k in range(4):
                chk(g.has_edge(cyc[k], cyc[(k + 1) % 4]), "entry cycle edge")
            chk(not g.has_edge(s(3), s(6)) and not g.has_edge(s(4), s(5)), "entry cycle chord")
            chk(g.has_edge(s(2), s(3)) and g.has_edge(s(2), s(4)), "entry cycle anchor slots")
            sw = [s(10), s(11), s(14), s(13)]
            for k in range(4):
                chk(g.has_edge(sw[k], sw[(k + 1) % 4]), "switch cycle edge")
            chk(not g.has_edge(s(10), s(14)) and not g.has_edge(s(11), s(13)), "switch cycle chord")
            for j in (10, 11, 13, 14):
                chk(g.has_edge(s(8), s(j)), "switch hub spoke")
            chk(g.has_edge(s(15), s(14)), "literal hub attachment")
        chk(g.has_edge(inst.pos(i, 1), inst.neg(i, 1)), "triangle crossing")
        chk(not g.has_edge(inst.pos(i, 0), inst.neg(i, 1)), "crossing stays local")
        chk(g.has_edge(inst.pos(i, 8), inst.neg(i, 8)), "switch crossing")
        chk(not g.has_edge(inst.neg(i, 8), inst.pos(i, 10)), "switch blocks stay apart")
        chk(not g.has_edge(inst.neg(i, 8), inst.pos(i, 13)), "switch blocks stay apart")
        pos_set = {
            (a, b)
            for a in range(SIDE_BLOCK)
            for b in range(a + 1, SIDE_BLOCK)
            if g.has_edge(inst.pos(i, a), inst.pos(i, b))
        }
        neg_set = {
            (a, b)
            for a in range(SIDE_BLOCK)
            for b in range(a + 1, SIDE_BLOCK)
            if g.has_edge(inst.neg(i, a), inst.neg(i, b))
        }
        chk(pos_set == neg_set, "polarity blocks mirror each other")

    for i in range(1, t + 1):
        c = lambda j: inst.cls(i, j)
        for k in range(3):
            chk(g.has_edge(c(6 + 2 * k), c(7 + 2 * k)), "forced pair")
            chk(
                g.has_edge(c(6 + 2 * k), c(k + 3)) and g.has_edge(c(7 + 2 * k), c(k + 3)),
                "forced pair collector",
            )
            chk(g.has_edge(c(k + 3), c(k)), "collector to slot")
        for a, b in combinations((18, 19, 20, 21), 2):
            chk(g.has_edge(c(a), c(b)), "top clique")

    occ = occurrences(f)
    for lit, places in occ.items():
        h = inst.hub(lit)
        slots = [inst.slot(ci, k) for ci, k in places]
        for s in slots:
            chk(g.has_edge(s, h), "slot to hub")
        for s, s2 in combinations(slots, 2):
            chk(g.has_edge(s, s2), "slot clique")


def forced_constraints(inst: MoralityInstance) -> PartialOrientation:
    """Truth independent commitments every witness dag must satisfy.

    Returns a fresh search state over the instance graph preloaded
    with the forced deletions and arcs: the anchor start cycle and
    funnel, the polarity chain, both blocked entry cycles of every
    variable, the occupied literal hub feeds, the tail rail and
    fanout, the forced pairs of every clause, and each literal
    clique's slot dispositions.
    """
    st = PartialOrientation(inst.graph)
    A = inst.anchor
    ok = True
    ok &= st.delete(A(1), A(2))
    ok &= st.orient(A(1), A(0))
    ok &= st.orient(A(2), A(0))
    ok &= st.orient(A(0), inst.pos(1, 0))
    n, t = inst.num_vars, inst.num_clauses
    occ = occurrences(inst.formula)
    for i in range(1, n + 1):
        if i > 1:
            ok &= st.orient(inst.neg(i - 1, 0), inst.pos(i, 0))
        p = lambda j: inst.pos(i, j)
        q = lambda j: inst.neg(i, j)
        ok &= st.delete(p(0), p(2))
        ok &= st.orient(p(0), p(1))
        ok &= st.orient(p(2), p(1))
        ok &= st.orient(p(1), q(1))
        ok &= st.delete(q(1), q(2))
        ok &= st.orient(q(1), q(0))
        ok &= st.orient(q(2), q(0))
        for s in (p, q):
            ok &= st.delete(s(3), s(4))
            ok &= st.orient(s(3), s(2))
            ok &= st.orient(s(4), s(2))
        if occ.get(i):
            ok &= st.orient(p(15), p(14))
        if occ.get(-i):
            ok &= st.orient(q(15), q(14))
    ok &= st.orient(inst.neg(n, 0), A(5))
    ok &= st.orient(A(5), A(6))
    ok &= st.orient(A(6), A(7))
    for i in range(1, t + 1):
        c = lambda j: inst.cls(i, j)
        ok &= st.orient(A(7), c(21))
        for k in range(3):
            ok &= st.delete(c(6 + 2 * k), c(7 + 2 * k))
            ok &= st.orient(c(6 + 2 * k), c(k + 3))
            ok &= st.orient(c(7 + 2 * k), c(k + 3))
            ok &= st.orient(c(k + 3), c(k))
    for lit, places in sorted(occ.items()):
        h = inst.hub(lit)
        slots = [inst.slot(ci, k) for ci, k in places]
        for s in slots:
            ok &= st.orient(s, h)
        for s, s2 in combinations(slots, 2):
            ok &= st.delete(s, s2)
    if not ok:
        raise AssertionError("forced constraints wiped out a domain")
    return st


def witness_dag(
    inst: MoralityInstance,
    assignment: dict[int, bool],
    *,
    budget_nodes: int = 2_000_000,
    budget_ms: Optional[int] = None,
) -> Dag:
    """Witness dag realizing a satisfying assignment; refuses others.

    Seeds the search with the forced constraints, the crossing arc of
    every variable (true points positive to negative), and one
    descending term per clause (the first true literal), then lets the
    decision search complete the orientation. The result is verified
    before being returned.
    """
    if not satisfies(inst.formula, assignment):
        raise GraphError("assignment does not satisfy the formula")
    st = forced_constraints(inst)
    ok = True
    for i in range(1, inst.num_vars + 1):
        if assignment[i]:
            ok &= st.orient(inst.pos(i, 8), inst.neg(i, 8))
        else:
            ok &= st.orient(inst.neg(i, 8), inst.pos(i, 8))
    for ci, cl in enumerate(inst.formula.clauses, start=1):
        true_terms = [k for k, lit in enumerate(cl) if assignment[abs(lit)] == (lit > 0)]
        j = true_terms[0]
        top = inst.cls(ci, 21)
        ok &= st.orient(top, inst.cls(ci, 18 + j))
        for k in range(3):
            if k != j:
                ok &= st.delete(top, inst.cls(ci, 18 + k))
                ok &= st.orient(inst.cls(ci, 18 + k), inst.cls(ci, 18 + j))
    if not ok:
        raise AssertionError("witness seeding wiped out a domain")
    d = decide(
        inst.graph,
        budget_nodes=budget_nodes,
        budget_ms=budget_ms,
        use_screens=False,
        start=st,
    )
    if d.verdict != MORAL or d.witness is None:
        raise GraphError(f"witness search failed: {d.verdict}")
    return d.witness


def extract_assignment(inst: MoralityInstance, d: Dag) -> dict[int, bool]:
    """Read the assignment off a witness dag's crossing arcs and check it.

    The crossing edge of each variable has no common neighbor, so any
    witness orients it; positive into negative means true. The decoded
    assignment must satisfy the formula or the dag was no witness.
    """
    out: dict[int, bool] = {}
    for i in range(1, inst.num_vars + 1):
        p, q = inst.pos(i, 8), inst.neg(i, 8)
        if d.has_arc(p, q):
            out[i] = True
        elif d.has_arc(q, p):
            out[i] = False
        else:
            raise GraphError(f"crossing edge of variable {i} is unoriented")
    if not satisfies(inst.formula, out):
        raise GraphError("decoded assignment does not satisfy the formula")
    return out


def assignment_to_text(a: dict[int, bool]) -> str:
    lits = [str(i if a[i] else -i) for i in sorted(a)]
    return "v " + " ".join(lits) + " 0\n"


def assignment_from_text(text: str) -> dict[int, bool]:
    out: dict[int, bool] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks and toks[0] == "v":
            toks = toks[1:]
        for tok in toks:
            lit = int(tok)
            if lit == 0:
                continue
            out[abs(lit)] = lit > 0
    if not out:
        raise GraphError("no literals in assignment text")
    return out


def roles_to_text(inst: MoralityInstance) -> str:
    lines = [
        f"role {name} {kind} {idx} {slot} {pol}"
        for name, kind, idx, slot, pol in inst.roles()
    ]
    return "\n".join(lines) + "\n"


def cnf_to_text(f: CnfFormula, comments: tuple[str, ...] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    for cl in f.clauses:
        lines.append(" ".join(str(lit) for lit in cl) + " 0")
    return "\n".join(lines) + "\n"


def instance_from_text(graph_text: str, cnf_text: str) -> MoralityInstance:
    """Rebuild an instance from its exported graph and formula files.

    The formula sidecar is the source of truth: the instance is rebuilt
    by reduce() and then checked against the stored graph, so a stale
    or edited graph file is caught instead of silently trusted.
    """
    f = parse_cnf(cnf_text)
    inst = reduce(f)
    g = read_graph_text(graph_text)
    built = inst.graph

    # Compare as named graphs: the text format numbers vertices by
    # first appearance, so integer ids are not stable across a round
    # trip, but names and name level edges are.
    def named(h: UndirectedGraph):
        labels = sorted(h.label(v) for v in range(h.n))
        edges = {frozenset((h.label(a), h.label(b))) for a, b in h.edges}
        return h.n, labels, edges

    if named(g) != named(built):
        raise GraphError("graph file does not match its formula sidecar")
    return inst

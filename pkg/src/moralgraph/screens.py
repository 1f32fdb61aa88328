"""Cheap sound screens run before the exact search.

Each rule either fires with a verdict it can justify (Moral rules are
backed by a construction, NotMoral rules by a structural obstruction)
or stays quiet. Rules never guess: a quiet screen means Inconclusive.

Rule ids: no_exterior and cycle_triangle refute; chordal, web and
cycle_exterior accept. Cycle based rules keep silent whenever cycle
enumeration was truncated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graphs import (
    Dag,
    UndirectedGraph,
    chordless_cycles,
    is_chordal,
    maximal_cliques,
)

MORAL = "Moral"
NOT_MORAL = "NotMoral"
INCONCLUSIVE = "Inconclusive"

CYCLE_CAP = 12
CYCLE_WORK_LIMIT = 250_000

RULE_IDS = {
    "no_exterior": "NOTMORAL.NO_EXT",
    "chordal": "MORAL.CHORDAL",
    "cycle_triangle": "NOTMORAL.CYCLE_TRI",
    "web": "MORAL.WEB",
    "cycle_exterior": "MORAL.CYCLE_EXT",
}


@dataclass
class RuleResult:
    verdict: str
    evidence: dict = field(default_factory=dict)
    witness: Optional[Dag] = None
    truncated: bool = False


@dataclass
class ScreenReport:
    """Combined screen outcome: first firing rule wins.

    verdict is Moral, NotMoral, or Inconclusive; rule names the rule
    that fired (None when inconclusive). checks holds the verdict of
    every rule that was evaluated, truncated records whether cycle
    enumeration hit a cap along the way.
    """

    verdict: str
    rule: Optional[str] = None
    evidence: dict = field(default_factory=dict)
    witness: Optional[Dag] = None
    truncated: bool = False
    checks: dict = field(default_factory=dict)

    @property
    def rule_id(self) -> Optional[str]:
        """Public identifier of the firing rule, None when inconclusive."""
        return RULE_IDS.get(self.rule) if self.rule else None


def extreme_vertices(g: UndirectedGraph) -> list[int]:
    """Vertices whose neighborhood is a clique."""
    out = []
    for v in range(g.n):
        nb = sorted(g.adj(v))
        ok = True
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                if not g.has_edge(a, b):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(v)
    return out


def exterior_cliques(g: UndirectedGraph) -> list[tuple[int, ...]]:
    """Maximal cliques that are the closed neighborhood of some extreme vertex.

    Single vertex cliques (isolated vertices) are excluded; exterior
    here always means at least one edge.
    """
    seen = set()
    for v in extreme_vertices(g):
        if g.degree(v) == 0:
            continue
        seen.add(tuple(sorted(g.adj(v) | {v})))
    return sorted(seen)


def check_has_exterior(g: UndirectedGraph) -> RuleResult:
    """Refute when a graph with edges has no exterior clique.

    In any witness dag, the latest vertex with an incident arc has only
    incoming arcs and its neighborhood is its (married) parent set, a
    clique. So a moral graph with at least one edge has an exterior
    clique and a graph without one cannot be moral.
    """
    if g.m == 0:
        return RuleResult(INCONCLUSIVE)
    if exterior_cliques(g):
        return RuleResult(INCONCLUSIVE)
    return RuleResult(NOT_MORAL)


def check_chordal(g: UndirectedGraph) -> RuleResult:
    """Accept chordal graphs, with a witness built from elimination order.

    Orienting every edge from the later eliminated endpoint to the
    earlier gives an acyclic orientation in which each vertex's parents
    are its higher neighbors, a clique. No marriages, no deletions, so
    the dag moralizes back to the graph exactly.
    """
    ok, elim = is_chordal(g)
    if not ok:
        return RuleResult(INCONCLUSIVE)
    pos = {v: i for i, v in enumerate(elim)}
    arcs = []
    for a, b in g.edges:
        arcs.append((a, b) if pos[a] > pos[b] else (b, a))
    d = Dag(g.n, arcs, names=g.names)
    return RuleResult(MORAL, evidence={"elimination": [g.label(v) for v in elim]}, witness=d)


def _cycle_edges(cycle: tuple[int, ...]) -> list[tuple[int, int]]:
    out = []
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        out.append((u, v) if u < v else (v, u))
    return out


def check_cycle_triangle(g: UndirectedGraph, cap: int = CYCLE_CAP) -> RuleResult:
    """Refute when some chordless cycle has no edge in any triangle.

    Every chordless cycle of length four or more must lose an edge in
    any witness, and a deletable edge needs a common neighbor of its
    endpoints. A cycle made entirely of triangle-free edges leaves no
    edge to delete.
    """
    ok, _ = is_chordal(g)
    if ok:
        return RuleResult(INCONCLUSIVE)
    scan = chordless_cycles(g, max_len=cap, work_limit=CYCLE_WORK_LIMIT)
    if scan.truncated:
        return RuleResult(INCONCLUSIVE, truncated=True)
    for cycle in scan.cycles:
        if all(not (g.adj(a) & g.adj(b)) for a, b in _cycle_edges(cycle)):
            names = [g.label(v) for v in cycle]
            return RuleResult(NOT_MORAL, evidence={"cycle": names})
    return RuleResult(INCONCLUSIVE)


def check_web(g: UndirectedGraph) -> RuleResult:
    """Accept graphs whose maximal cliques peel away one by one.

    Repeatedly remove from the collection a clique containing a vertex
    private to it (a vertex in no other remaining clique). Emptying the
    collection certifies morality; the peel order is the evidence. A
    vertex private to a clique stays private as other cliques leave, so
    greedy choice cannot get stuck when any peel order succeeds.
    """
    cliques = [frozenset(c) for c in maximal_cliques(g)]
    order = sorted(range(len(cliques)), key=lambda i: tuple(sorted(cliques[i])))
    alive = set(order)
    peeled = []
    progress = True
    while alive and progress:
        progress = False
        count: dict[int, int] = {}
        for i in alive:
            for v in cliques[i]:
                count[v] = count.get(v, 0) + 1
        for i in order:
            if i not in alive:
                continue
            if any(count[v] == 1 for v in cliques[i]):
                alive.remove(i)
                peeled.append(sorted(cliques[i]))
                progress = True
                break
    if alive:
        return RuleResult(INCONCLUSIVE, evidence={"stuck": len(alive)})
    names = [[g.label(v) for v in c] for c in peeled]
    return RuleResult(MORAL, evidence={"peeled": names})


def check_cycle_exterior(g: UndirectedGraph, cap: int = CYCLE_CAP) -> RuleResult:
    """Accept when every chordless cycle has an edge in an exterior clique.

    Chordal graphs pass vacuously. Otherwise all chordless cycles must
    be enumerable within the caps; each needs at least one edge lying
    inside an exterior clique for the rule to fire.
    """
    ok, _ = is_chordal(g)
    if ok:
        return RuleResult(MORAL, evidence={"cycles": 0})
    scan = chordless_cycles(g, max_len=cap, work_limit=CYCLE_WORK_LIMIT)
    if scan.truncated:
        return RuleResult(INCONCLUSIVE, truncated=True)
    ext = [frozenset(c) for c in exterior_cliques(g)]
    for cycle in scan.cycles:
        hit = False
        for a, b in _cycle_edges(cycle):
            if any(a in c and b in c for c in ext):
                hit = True
                break
        if not hit:
            return RuleResult(INCONCLUSIVE, evidence={"cycle": [g.label(v) for v in cycle]})
    return RuleResult(MORAL, evidence={"cycles": len(scan.cycles)})


_RULES = (
    ("no_exterior", check_has_exterior, False),
    ("chordal", check_chordal, False),
    ("cycle_triangle", check_cycle_triangle, True),
    ("web", check_web, False),
    ("cycle_exterior", check_cycle_exterior, True),
)


def screen(g: UndirectedGraph, cap: int = CYCLE_CAP) -> ScreenReport:
    """Run all screens in order; the first firing rule decides the report.

    Rules run refuters first, cheapest first; a report with no firing
    rule is Inconclusive. Edgeless graphs fall through no_exterior and
    are accepted by the chordal rule with an empty witness dag.
    """
    checks: dict = {}
    truncated = False
    for name, fn, takes_cap in _RULES:
        r = fn(g, cap) if takes_cap else fn(g)
        checks[name] = r.verdict
        truncated = truncated or r.truncated
        if r.verdict != INCONCLUSIVE:
            return ScreenReport(
                r.verdict,
                rule=name,
                evidence=r.evidence,
                witness=r.witness,
                truncated=truncated,
                checks=checks,
            )
    return ScreenReport(INCONCLUSIVE, truncated=truncated, checks=checks)


def _flat(value) -> str:
    if isinstance(value, (list, tuple)):
        if value and isinstance(value[0], (list, tuple)):
            return ";".join(",".join(str(x) for x in inner) for inner in value)
        return ",".join(str(x) for x in value)
    return str(value)


def report_to_text(report: ScreenReport) -> str:
    """Human readable line report, deterministic for a given report."""
    lines = [f"verdict: {report.verdict}"]
    if report.rule is not None:
        lines.append(f"rule: {report.rule_id}")
    lines.append(f"truncated: {'yes' if report.truncated else 'no'}")
    for name, verdict in report.checks.items():
        lines.append(f"check {name}: {verdict}")
    for key, value in report.evidence.items():
        lines.append(f"evidence {key}: {_flat(value)}")
    return "\n".join(lines) + "\n"


def report_to_keyvalue(report: ScreenReport) -> str:
    """Machine readable key=value block, one pair per line."""
    lines = [f"verdict={report.verdict}"]
    if report.rule is not None:
        lines.append(f"rule={report.rule_id}")
    lines.append(f"truncated={int(report.truncated)}")
    for name, verdict in report.checks.items():
        lines.append(f"check.{name}={verdict}")
    for key, value in report.evidence.items():
        lines.append(f"evidence.{key}={_flat(value)}")
    return "\n".join(lines) + "\n"

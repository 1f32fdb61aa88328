"""Clique elimination: peel extreme vertices, defer shared clique edges.

The eliminator repeatedly selects an exterior clique C with an extreme
vertex v (a vertex whose neighborhood is exactly C minus v), removes
v's edges, and marks the remaining edges of C. Marked edges stay in
the working graph (they still count for adjacency, cliques, and
extremeness) until no exterior clique exists, at which point one
marked edge is removed and the search resumes. A run that removes
every edge has Eliminated the graph and its trace replays into a
witness dag; a run with no exterior clique and no marked edge left is
Stuck, which decides nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Union

from .graphs import Dag, GraphError, UndirectedGraph, is_moral_graph_of

ELIMINATED = "Eliminated"
STUCK = "Stuck"
BUDGET_EXHAUSTED = "BudgetExhausted"

GREEDY = "greedy"
BACKTRACKING = "backtracking"


@dataclass(frozen=True)
class ExtremeRemoval:
    """One peel: clique at selection time, its extreme vertex, edges newly marked."""

    clique: tuple[int, ...]
    vertex: int
    marked: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class MarkedEdgeRemoval:
    edge: tuple[int, int]


Step = Union[ExtremeRemoval, MarkedEdgeRemoval]


@dataclass
class EliminationOutcome:
    status: str
    trace: tuple[Step, ...] = ()
    witness: Optional[Dag] = None
    stats: dict = field(default_factory=dict)


class _Budget(Exception):
    pass


class _State:
    def __init__(self, g: UndirectedGraph):
        self.adj = [set(g.adj(v)) for v in range(g.n)]
        self.marked: list[tuple[int, int]] = []
        self.marked_set: set[tuple[int, int]] = set()
        self.edge_count = g.m

    def exterior_pairs(self) -> list[tuple[tuple[int, ...], int]]:
        """(clique, extreme vertex) pairs, canonically ordered."""
        pairs = []
        for v in range(len(self.adj)):
            nb = self.adj[v]
            if not nb:
                continue
            nbs = sorted(nb)
            if all(b in self.adj[a] for a, b in combinations(nbs, 2)):
                pairs.append((tuple(sorted(nb | {v})), v))
        pairs.sort(key=lambda p: (len(p[0]), p[0], p[1]))
        return pairs

    def apply_extreme(self, clique: tuple[int, ...], v: int):
        removed = []
        for u in sorted(self.adj[v]):
            e = (u, v) if u < v else (v, u)
            pos = -1
            if e in self.marked_set:
                pos = self.marked.index(e)
                del self.marked[pos]
                self.marked_set.remove(e)
            self.adj[u].remove(v)
            removed.append((e, pos))
        self.adj[v].clear()
        self.edge_count -= len(removed)
        newly = []
        rest = [u for u in clique if u != v]
        for x, y in combinations(rest, 2):
            e = (x, y) if x < y else (y, x)
            if e not in self.marked_set:
                self.marked.append(e)
                self.marked_set.add(e)
                newly.append(e)
        return removed, tuple(newly)

    def undo_extreme(self, v: int, removed, newly) -> None:
        for e in newly:
            self.marked.pop()
            self.marked_set.remove(e)
        for e, pos in reversed(removed):
            a, b = e
            u = a if b == v else b
            self.adj[u].add(v)
            self.adj[v].add(u)
            if pos >= 0:
                self.marked.insert(pos, e)
                self.marked_set.add(e)
        self.edge_count += len(removed)

    def apply_unmark(self, idx: int) -> tuple[int, int]:
        e = self.marked.pop(idx)
        self.marked_set.remove(e)
        a, b = e
        self.adj[a].remove(b)
        self.adj[b].remove(a)
        self.edge_count -= 1
        return e

    def undo_unmark(self, idx: int, e: tuple[int, int]) -> None:
        a, b = e
        self.adj[a].add(b)
        self.adj[b].add(a)
        self.marked.insert(idx, e)
        self.marked_set.add(e)
        self.edge_count += 1


def eliminate(
    g: UndirectedGraph,
    strategy: str = GREEDY,
    *,
    budget: int = 1_000_000,
    seed: int = 0,
) -> EliminationOutcome:
    """Run the eliminator; Eliminated carries a verified witness dag.

    greedy commits to one choice per step: canonical tie breaks with
    seed 0 (cliques by size then vertex order, smallest extreme vertex,
    oldest marked edge), shuffled choices otherwise. backtracking
    explores alternatives depth first and counts each tried choice
    against the budget. Running out of choices reports Stuck, running
    out of budget reports BudgetExhausted; neither claims the graph is
    not moral.
    """
    if strategy not in (GREEDY, BACKTRACKING):
        raise GraphError(f"unknown strategy {strategy!r}")
    state = _State(g)
    rng = random.Random(seed) if seed else None
    trace: list[Step] = []
    expansions = 0

    def finish(status: str) -> EliminationOutcome:
        stats = {
            "strategy": strategy,
            "seed": seed,
            "steps": len(trace),
            "expansions": expansions,
        }
        witness = None
        if status == ELIMINATED:
            witness = witness_from_trace(g, trace)
        return EliminationOutcome(status, tuple(trace), witness, stats)

    if strategy == GREEDY:
        while state.edge_count:
            pairs = state.exterior_pairs()
            if pairs:
                if rng is not None:
                    rng.shuffle(pairs)
                clique, v = pairs[0]
                removed, newly = state.apply_extreme(clique, v)
                trace.append(ExtremeRemoval(clique, v, newly))
            elif state.marked:
                idx = rng.randrange(len(state.marked)) if rng is not None else 0
                e = state.apply_unmark(idx)
                trace.append(MarkedEdgeRemoval(e))
            else:
                return finish(STUCK)
            expansions += 1
            if expansions > budget:
                return finish(BUDGET_EXHAUSTED)
        return finish(ELIMINATED)

    def dfs() -> bool:
        nonlocal expansions
        if state.edge_count == 0:
            return True
        pairs = state.exterior_pairs()
        if pairs:
            if rng is not None:
                rng.shuffle(pairs)
            for clique, v in pairs:
                expansions += 1
                if expansions > budget:
                    raise _Budget
                removed, newly = state.apply_extreme(clique, v)
                trace.append(ExtremeRemoval(clique, v, newly))
                if dfs():
                    return True
                trace.pop()
                state.undo_extreme(v, removed, newly)
            return False
        if not state.marked:
            return False
        indices = list(range(len(state.marked)))
        if rng is not None:
            rng.shuffle(indices)
        for idx in indices:
            expansions += 1
            if expansions > budget:
                raise _Budget
            e = state.apply_unmark(idx)
            trace.append(MarkedEdgeRemoval(e))
            if dfs():
                return True
            trace.pop()
            state.undo_unmark(idx, e)
        return False

    try:
        ok = dfs()
    except _Budget:
        trace.clear()
        return finish(BUDGET_EXHAUSTED)
    if not ok:
        trace.clear()
        return finish(STUCK)
    return finish(ELIMINATED)


def witness_from_trace(g: UndirectedGraph, trace) -> Dag:
    """Replay a complete elimination trace into a dag and verify it.

    Each extreme removal contributes arcs from the rest of its clique
    into the removed vertex; marked edge removals contribute nothing
    (those edges are covered by marriages at the clique's extreme
    vertex). The result must moralize back to the graph exactly.
    """
    arcs = []
    for step in trace:
        if isinstance(step, ExtremeRemoval):
            for u in step.clique:
                if u != step.vertex:
                    arcs.append((u, step.vertex))
    d = Dag(g.n, arcs, names=g.names)
    if not is_moral_graph_of(g, d):
        raise GraphError("elimination trace does not witness the graph")
    return d


def trace_to_text(g: UndirectedGraph, trace) -> str:
    """Human readable trace listing, one step per line."""
    lines = []
    for step in trace:
        if isinstance(step, ExtremeRemoval):
            cl = ",".join(g.label(u) for u in step.clique)
            mk = " ".join(
                f"{g.label(a)}-{g.label(b)}" for a, b in step.marked
            )
            line = f"extreme {g.label(step.vertex)} clique {cl}"
            if mk:
                line += f" marked {mk}"
            lines.append(line)
        else:
            a, b = step.edge
            lines.append(f"unmark {g.label(a)}-{g.label(b)}")
    return "\n".join(lines) + ("\n" if lines else "")

"""Exact morality decision: constraint search over per-edge dispositions.

Every undirected edge of a candidate graph ends up in one of three
states in a witness dag: oriented one way, oriented the other way, or
deleted. A deleted edge's endpoints must share a child, and any two
parents of a vertex must be adjacent in the graph. decide() searches
that space with unit propagation and returns Moral (with a verified
witness dag), NotMoral (with a certificate), or Unknown (budget hit).
brute_force() enumerates the same space exhaustively and is the
reference implementation the search is tested against.
"""

from __future__ import annotations

import hashlib
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import _kernel
from .graphs import Dag, GraphError, UndirectedGraph, is_moral_graph_of
from .screens import CYCLE_CAP, screen

FORWARD = 1
BACKWARD = 2
DELETED = 4

MORAL = "Moral"
NOT_MORAL = "NotMoral"
UNKNOWN = "Unknown"

_DISP_NAMES = {FORWARD: "forward", BACKWARD: "backward", DELETED: "deleted"}


class _Conflict:
    __slots__ = ()

    def __repr__(self) -> str:
        return "Conflict"


CONFLICT = _Conflict()


class BruteForceCapError(GraphError):
    """Raised when brute_force is asked to search past its edge cap."""


class _BudgetExceeded(Exception):
    pass


@dataclass
class Decision:
    """Outcome of a morality decision.

    verdict is Moral, NotMoral, or Unknown. Moral always carries a
    witness dag that has been re-checked against the input graph.
    NotMoral carries a certificate naming either the screen rule or
    the exhausted search. Unknown means a budget was hit.
    """

    verdict: str
    witness: Optional[Dag] = None
    certificate: Optional[dict] = None
    stats: dict = field(default_factory=dict)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class PartialOrientation:
    """Search state: per-edge disposition domains plus derived structure.

    Tracks committed arcs (with incremental ancestor and descendant
    masks for cycle detection), committed deletions (with their set of
    surviving cover candidates), and a trail so the search can undo to
    any mark. Domains are bitmasks over FORWARD, BACKWARD, DELETED.
    """

    def __init__(self, g: UndirectedGraph):
        self.g = g
        self.edges = list(g.edges)
        self.eindex = {e: i for i, e in enumerate(self.edges)}
        n = g.n
        self.adjmask = [0] * n
        for a, b in self.edges:
            self.adjmask[a] |= 1 << b
            self.adjmask[b] |= 1 << a
        self.dom = []
        for a, b in self.edges:
            d = FORWARD | BACKWARD
            if self.adjmask[a] & self.adjmask[b]:
                d |= DELETED
            self.dom.append(d)
        self.value = [0] * len(self.edges)
        self.parents = [0] * n
        self.anc = [0] * n
        self.desc = [0] * n
        self.covered = [False] * len(self.edges)
        self.open_deleted: list[int] = []
        self.queue: list[int] = []
        self.trail: list[tuple] = []
        self._dirty = True
        self.commits = 0

    # -- public edge addressing -------------------------------------

    def _index(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        i = self.eindex.get(key)
        if i is None:
            raise GraphError(f"no edge {u}-{v} in graph")
        return i

    def orient(self, u: int, v: int) -> bool:
        """Require the arc u -> v. Returns False on immediate wipeout."""
        disp = FORWARD if u < v else BACKWARD
        return self._restrict(self._index(u, v), disp)

    def delete(self, u: int, v: int) -> bool:
        """Require that edge u-v is deleted. False on immediate wipeout."""
        return self._restrict(self._index(u, v), DELETED)

    def domain(self, u: int, v: int) -> tuple[str, ...]:
        d = self.dom[self._index(u, v)]
        return tuple(_DISP_NAMES[b] for b in (FORWARD, BACKWARD, DELETED) if d & b)

    def committed(self, u: int, v: int) -> Optional[str]:
        val = self.value[self._index(u, v)]
        return _DISP_NAMES[val] if val else None

    def is_complete(self) -> bool:
        return all(self.value)

    def to_dag(self) -> Dag:
        arcs = []
        for i, (a, b) in enumerate(self.edges):
            if self.value[i] == FORWARD:
                arcs.append((a, b))
            elif self.value[i] == BACKWARD:
                arcs.append((b, a))
        return Dag(self.g.n, arcs, names=self.g.names)

    # -- trail ------------------------------------------------------

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            kind, idx, old = trail.pop()
            if kind == 0:
                self.dom[idx] = old
            elif kind == 1:
                self.value[idx] = old
            elif kind == 2:
                self.parents[idx] = old
            elif kind == 3:
                self.anc[idx] = old
            elif kind == 4:
                self.desc[idx] = old
            elif kind == 5:
                self.covered[idx] = old
            else:
                self.open_deleted.pop()
        self.queue.clear()
        self._dirty = True

    # -- propagation core -------------------------------------------

    def _restrict(self, i: int, mask: int) -> bool:
        new = self.dom[i] & mask
        if new == self.dom[i]:
            return True
        if new == 0:
            return False
        self.trail.append((0, i, self.dom[i]))
        self.dom[i] = new
        if new in (FORWARD, BACKWARD, DELETED) and not self.value[i]:
            self.queue.append(i)
        return True

    def _commit(self, i: int) -> bool:
        val = self.dom[i]
        if self.value[i]:
            return self.value[i] == val
        self.trail.append((1, i, 0))
        self.value[i] = val
        self.commits += 1
        self._dirty = True
        a, b = self.edges[i]
        if val == DELETED:
            self.trail.append((6, i, None))
            self.open_deleted.append(i)
            return True
        t, h = (a, b) if val == FORWARD else (b, a)
        # Cycle closure: the head must not already reach the tail.
        if (self.anc[t] >> h) & 1:
            return False
        # Marriage: every existing parent of h must neighbor t.
        if self.parents[h] & ~self.adjmask[t]:
            return False
        self.trail.append((2, h, self.parents[h]))
        self.parents[h] |= 1 << t
        up = self.anc[t] | (1 << t)
        down = self.desc[h] | (1 << h)
        for x in _bits(down):
            if up & ~self.anc[x]:
                self.trail.append((3, x, self.anc[x]))
                self.anc[x] |= up
        for y in _bits(up):
            if down & ~self.desc[y]:
                self.trail.append((4, y, self.desc[y]))
                self.desc[y] |= down
        # Any further parent of h must neighbor t: drop x -> h for
        # non-neighbors x of t.
        for x in _bits(self.adjmask[h] & ~self.adjmask[t]):
            if x == t:
                continue
            f = self.eindex[(x, h) if x < h else (h, x)]
            if self.value[f]:
                continue
            bad = FORWARD if x < h else BACKWARD
            if not self._restrict(f, 7 ^ bad):
                return False
        return True

    def _refresh_deleted(self, i: int) -> bool:
        a, b = self.edges[i]
        cands = []
        for c in _bits(self.adjmask[a] & self.adjmask[b]):
            fa = self.eindex[(a, c) if a < c else (c, a)]
            fb = self.eindex[(b, c) if b < c else (c, b)]
            da = FORWARD if a < c else BACKWARD
            db = FORWARD if b < c else BACKWARD
            committed_a = self.value[fa] == da
            committed_b = self.value[fb] == db
            if committed_a and committed_b:
                self.trail.append((5, i, False))
                self.covered[i] = True
                return True
            possible_a = committed_a or (not self.value[fa] and self.dom[fa] & da)
            possible_b = committed_b or (not self.value[fb] and self.dom[fb] & db)
            if not possible_a or not possible_b:
                continue
            # Marriage screen for the would-be cover arcs. Only test an
            # endpoint whose arc is still open: a committed arc already
            # passed this at commit time, and its endpoint now sits in
            # parents[c] where it would wrongly trip the mask (a vertex
            # is never in its own adjacency mask).
            if not committed_a and self.parents[c] & ~self.adjmask[a]:
                continue
            if not committed_b and self.parents[c] & ~self.adjmask[b]:
                continue
            cands.append((c, fa, da, fb, db))
        if not cands:
            return False
        if len(cands) == 1:
            _, fa, da, fb, db = cands[0]
            if not self._restrict(fa, da):
                return False
            if not self._restrict(fb, db):
                return False
        return True

    def _propagate(self) -> bool:
        while self.queue or self._dirty:
            if self.queue:
                i = self.queue.pop()
                if not self._commit(i):
                    self.queue.clear()
                    return False
            else:
                self._dirty = False
                for i in self.open_deleted:
                    if not self.covered[i] and not self._refresh_deleted(i):
                        self.queue.clear()
                        return False
        return True


def propagate(state: PartialOrientation):
    """Run propagation to fixpoint; the refined state, or CONFLICT."""
    return state if state._propagate() else CONFLICT


def four_cycle_seed(state: PartialOrientation) -> bool:
    """Constrain every chordless 4-cycle at the root.

    Such a cycle needs at least one deleted edge in any witness. With
    no deletable edge on the cycle the state is wiped out; with exactly
    one, that edge is forced deleted. Returns False on wipeout.
    """
    g = state.g
    adj = state.adjmask
    for a in range(g.n):
        for c in range(a + 1, g.n):
            if (adj[a] >> c) & 1:
                continue
            common = adj[a] & adj[c]
            for b in _bits(common):
                for d in _bits(common):
                    if d <= b or (adj[b] >> d) & 1:
                        continue
                    cyc = [
                        state.eindex[(min(a, b), max(a, b))],
                        state.eindex[(min(b, c), max(b, c))],
                        state.eindex[(min(c, d), max(c, d))],
                        state.eindex[(min(d, a), max(d, a))],
                    ]
                    deletable = [i for i in cyc if state.dom[i] & DELETED]
                    if not deletable:
                        return False
                    if len(deletable) == 1:
                        if not state._restrict(deletable[0], DELETED):
                            return False
    return True


def _config_token(budget_nodes: int, budget_ms: Optional[int], seed: int) -> str:
    """Short fingerprint of the search configuration, stamped on
    exhaustion certificates so a NotMoral token names the search that
    produced it."""
    blob = f"nodes={budget_nodes} ms={budget_ms} seed={seed}"
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _value_order(state: PartialOrientation, i: int) -> list[int]:
    a, b = state.edges[i]
    heavy = (state.adjmask[a] & state.adjmask[b]).bit_count() >= 2
    order = (DELETED, FORWARD, BACKWARD) if heavy else (FORWARD, BACKWARD, DELETED)
    return [v for v in order if state.dom[i] & v]


def decide(
    g: UndirectedGraph,
    *,
    budget_nodes: int = 1_000_000,
    budget_ms: Optional[int] = None,
    seed: int = 0,
    use_screens: bool = True,
    cap: int = CYCLE_CAP,
    start: Optional[PartialOrientation] = None,
) -> Decision:
    """Decide whether g is the moral graph of some dag.

    Runs the cheap screens first (unless disabled), then a propagation
    driven search over edge dispositions. Moral verdicts always carry
    a witness dag re-verified against g; NotMoral comes either from a
    sound screen or from exhausting the search; a blown node or time
    budget yields Unknown, never a wrong answer.
    """
    t0 = time.monotonic()
    stats: dict = {"nodes": 0, "seed": seed}
    if g.m == 0:
        d = Dag(g.n, [], names=g.names)
        stats["elapsed_ms"] = (time.monotonic() - t0) * 1000
        return Decision(MORAL, witness=d, stats=stats)

    if use_screens:
        rep = screen(g, cap)
        stats["screen_rule"] = rep.rule
        if rep.verdict == NOT_MORAL:
            stats["elapsed_ms"] = (time.monotonic() - t0) * 1000
            cert = {"kind": "screen", "rule": rep.rule, "evidence": rep.evidence}
            return Decision(NOT_MORAL, certificate=cert, stats=stats)
        if rep.verdict == MORAL and rep.witness is not None:
            if not is_moral_graph_of(g, rep.witness):
                raise AssertionError("screen produced an invalid witness")
            stats["elapsed_ms"] = (time.monotonic() - t0) * 1000
            return Decision(MORAL, witness=rep.witness, stats=stats)

    state = start if start is not None else PartialOrientation(g)
    if state.g is not g and state.g != g:
        raise GraphError("start state built for a different graph")
    if not four_cycle_seed(state):
        stats["elapsed_ms"] = (time.monotonic() - t0) * 1000
        cert = {
            "kind": "exhausted",
            "nodes": 0,
            "config": _config_token(budget_nodes, budget_ms, seed),
        }
        return Decision(NOT_MORAL, certificate=cert, stats=stats)

    rng = random.Random(seed) if seed else None
    deadline = t0 + budget_ms / 1000.0 if budget_ms is not None else None
    nodes = 0
    limit = budget_nodes
    config = _config_token(budget_nodes, budget_ms, seed)

    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * len(state.edges) + 100))

    def dfs() -> bool:
        nonlocal nodes
        if not state._propagate():
            return False
        pick = -1
        best = 4
        for i in range(len(state.edges)):
            if state.value[i]:
                continue
            w = state.dom[i].bit_count()
            if w < best:
                best = w
                pick = i
                if w == 1:
                    break
        if pick < 0:
            return True
        vals = _value_order(state, pick)
        if rng is not None and len(vals) > 1:
            rng.shuffle(vals)
        for v in vals:
            nodes += 1
            if nodes > limit:
                raise _BudgetExceeded
            if deadline is not None and time.monotonic() > deadline:
                raise _BudgetExceeded
            mk = state.mark()
            if state._restrict(pick, v) and dfs():
                return True
            state.undo(mk)
        return False

    try:
        found = dfs()
    except _BudgetExceeded:
        stats["nodes"] = nodes
        stats["commits"] = state.commits
        stats["elapsed_ms"] = (time.monotonic() - t0) * 1000
        cert = {"kind": "budget", "nodes": nodes, "budget_nodes": budget_nodes}
        if budget_ms is not None:
            cert["budget_ms"] = budget_ms
        return Decision(UNKNOWN, certificate=cert, stats=stats)

    stats["nodes"] = nodes
    stats["commits"] = state.commits
    stats["elapsed_ms"] = (time.monotonic() - t0) * 1000
    if found:
        dag = state.to_dag()
        if not is_moral_graph_of(g, dag):
            raise AssertionError("search produced an invalid witness")
        return Decision(MORAL, witness=dag, stats=stats)
    cert = {"kind": "exhausted", "nodes": nodes, "config": config}
    return Decision(NOT_MORAL, certificate=cert, stats=stats)


def brute_force(g: UndirectedGraph, cap: int = 14) -> Decision:
    """Exhaustive reference decision by full disposition enumeration.

    Tries all per-edge dispositions in a fixed order with only sound
    pruning, so the first witness is deterministic. Graphs with more
    than cap edges are refused outright.
    """
    if g.m > cap:
        raise BruteForceCapError(
            f"graph has {g.m} edges; brute force is capped at {cap}"
        )
    state = PartialOrientation(g)
    disp, nodes = _kernel.search_dispositions(
        g.n, list(g.edges), state.adjmask, 0
    )
    stats = {"nodes": abs(nodes), "kernel": _kernel.KERNEL}
    if disp is None:
        return Decision(NOT_MORAL, certificate={"kind": "exhausted", "nodes": nodes}, stats=stats)
    arcs = []
    for i, (a, b) in enumerate(g.edges):
        if disp[i] == FORWARD:
            arcs.append((a, b))
        elif disp[i] == BACKWARD:
            arcs.append((b, a))
    dag = Dag(g.n, arcs, names=g.names)
    if not is_moral_graph_of(g, dag):
        raise AssertionError("enumeration produced an invalid witness")
    return Decision(MORAL, witness=dag, stats=stats)

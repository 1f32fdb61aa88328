"""Undirected graphs, dags, moralization and the structural primitives.

Vertices are dense integers 0..n-1 with an optional name table so files
can use letters or words. All iteration orders are sorted, so every
operation is deterministic for a fixed input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence


class GraphError(ValueError):
    """Invalid graph or dag input."""


def _canon_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class UndirectedGraph:
    """Immutable undirected graph: vertex count, symmetric adjacency, canonical edge list."""

    __slots__ = ("n", "edges", "_adj", "_adj_sorted", "names", "_name_to_id")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], names: Optional[Sequence[str]] = None):
        if n < 0:
            raise GraphError("vertex count must be >= 0")
        seen: set[tuple[int, int]] = set()
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge endpoint out of range: ({a}, {b}) with n={n}")
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            seen.add(_canon_edge(a, b))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        self._adj = tuple(frozenset(s) for s in adj)
        self._adj_sorted = tuple(tuple(sorted(s)) for s in adj)
        if names is not None:
            names = tuple(names)
            if len(names) != n:
                raise GraphError("name table length must equal vertex count")
            if len(set(names)) != n:
                raise GraphError("vertex names must be distinct")
        self.names = names
        self._name_to_id = {nm: i for i, nm in enumerate(names)} if names else {}

    def adj(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj_sorted[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    @property
    def m(self) -> int:
        return len(self.edges)

    def id_of(self, name: str) -> int:
        return self._name_to_id[name]

    def label(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def edge_label(self, e: tuple[int, int]) -> str:
        return f"{self.label(e[0])}-{self.label(e[1])}"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UndirectedGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, m={self.m})"


def build_graph(
    n: int, edges: Iterable[tuple[int, int]], names: Optional[Sequence[str]] = None
) -> UndirectedGraph:
    """Build a canonical graph; duplicate edges collapse, bad input raises GraphError."""
    return UndirectedGraph(n, edges, names)


def graph_from_names(edge_names: Iterable[tuple[str, str]], names: Sequence[str]) -> UndirectedGraph:
    """Build a graph over the given name table from name pairs."""
    idx = {nm: i for i, nm in enumerate(names)}
    return UndirectedGraph(len(names), [(idx[a], idx[b]) for a, b in edge_names], names)


class Dag:
    """Immutable directed acyclic graph with cached parent sets.

    Construction verifies acyclicity and rejects duplicate or two-way
    edges between the same pair.
    """

    __slots__ = ("n", "arcs", "_parents", "_children", "names", "_order")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]], names: Optional[Sequence[str]] = None):
        if n < 0:
            raise GraphError("vertex count must be >= 0")
        arcset: set[tuple[int, int]] = set()
        for a, b in arcs:
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"arc endpoint out of range: ({a}, {b}) with n={n}")
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            arcset.add((a, b))
        for a, b in arcset:
            if (b, a) in arcset and a < b:
                raise GraphError(f"two-cycle between {a} and {b}")
        self.n = n
        self.arcs: tuple[tuple[int, int], ...] = tuple(sorted(arcset))
        parents: list[set[int]] = [set() for _ in range(n)]
        children: list[set[int]] = [set() for _ in range(n)]
        for a, b in self.arcs:
            parents[b].add(a)
            children[a].add(b)
        self._parents = tuple(tuple(sorted(s)) for s in parents)
        self._children = tuple(tuple(sorted(s)) for s in children)
        order = toposort(n, self.arcs)
        if order is None:
            raise GraphError("directed cycle in dag input")
        self._order = tuple(order)
        if names is not None:
            names = tuple(names)
            if len(names) != n:
                raise GraphError("name table length must equal vertex count")
        self.names = names

    def parents(self, v: int) -> tuple[int, ...]:
        return self._parents[v]

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def has_arc(self, a: int, b: int) -> bool:
        return b in self._children[a]

    def topological_order(self) -> tuple[int, ...]:
        return self._order

    def label(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dag) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, arcs={len(self.arcs)})"


def build_dag(n: int, arcs: Iterable[tuple[int, int]], names: Optional[Sequence[str]] = None) -> Dag:
    return Dag(n, arcs, names)


def toposort(n: int, arcs: Iterable[tuple[int, int]]) -> Optional[list[int]]:
    """Deterministic topological order (smallest id first among ready vertices), or None on a cycle."""
    import heapq

    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        indeg[b] += 1
        out[a].append(b)
    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    return order if len(order) == n else None


def is_acyclic(n: int, arcs: Iterable[tuple[int, int]]) -> tuple[bool, Optional[list[int]]]:
    """True plus a deterministic topological order when the arc set is acyclic."""
    order = toposort(n, list(arcs))
    return (order is not None), order


def moralize(d: Dag) -> UndirectedGraph:
    """Drop orientations and connect every two parents sharing a child."""
    from itertools import combinations

    edges: set[tuple[int, int]] = set()
    for a, b in d.arcs:
        edges.add(_canon_edge(a, b))
    for v in range(d.n):
        for p, q in combinations(d.parents(v), 2):
            edges.add(_canon_edge(p, q))
    return UndirectedGraph(d.n, edges, d.names)


def is_moral_graph_of(g: UndirectedGraph, d: Dag) -> bool:
    """True iff moralize(d) equals g edge for edge.

    Scans arcs and parent pairs with early exit: fail as soon as a dag
    edge or married pair is not a g edge, then confirm every g edge is
    covered by an arc or a marriage.
    """
    from itertools import combinations

    if g.n != d.n:
        raise GraphError("graph and dag must share one vertex set")
    covered: set[tuple[int, int]] = set()
    for a, b in d.arcs:
        e = _canon_edge(a, b)
        if not g.has_edge(a, b):
            return False
        covered.add(e)
    for v in range(d.n):
        for p, q in combinations(d.parents(v), 2):
            e = _canon_edge(p, q)
            if not g.has_edge(p, q):
                return False
            covered.add(e)
    return len(covered) == g.m


def maximal_cliques(g: UndirectedGraph) -> list[frozenset[int]]:
    """All inclusion-maximal cliques, each once, in sorted order (Bron-Kerbosch with pivot)."""
    out: list[frozenset[int]] = []
    adj = g._adj

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(range(g.n)), set())
    return sorted(out, key=lambda c: tuple(sorted(c)))


def is_clique(g: UndirectedGraph, members: Iterable[int]) -> bool:
    ms = list(members)
    return all(g.has_edge(a, b) for i, a in enumerate(ms) for b in ms[i + 1 :])


def is_chordal(g: UndirectedGraph) -> tuple[bool, Optional[list[int]]]:
    """Chordality via lexicographic BFS; returns a perfect elimination order when chordal.

    The returned list is in elimination order: each vertex's later
    neighbors form a clique.
    """
    n = g.n
    if n == 0:
        return True, []
    # Lex-BFS produces a reverse perfect elimination order on chordal graphs.
    label: list[list[int]] = [[] for _ in range(n)]
    visited = [False] * n
    lexorder: list[int] = []
    for _ in range(n):
        v = max(
            (u for u in range(n) if not visited[u]),
            key=lambda u: (label[u], -u),
        )
        visited[v] = True
        lexorder.append(v)
        stamp = n - len(lexorder)
        for w in g.neighbors(v):
            if not visited[w]:
                label[w].append(stamp)
    elim = list(reversed(lexorder))
    pos = {v: i for i, v in enumerate(elim)}
    # Verify: for each vertex, its earliest later neighbor must see the rest.
    for v in elim:
        later = [w for w in g.neighbors(v) if pos[w] > pos[v]]
        if not later:
            continue
        u = min(later, key=lambda w: pos[w])
        rest = set(later) - {u}
        if not rest <= g.adj(u):
            return False, None
    return True, elim


@dataclass
class CycleScan:
    """Chordless cycles found up to the length cap, plus a truncation flag.

    truncated means some search path was abandoned (length cap or work
    limit), so absence of further cycles is not established.
    """

    cycles: list[tuple[int, ...]]
    truncated: bool

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.cycles)


def chordless_cycles(
    g: UndirectedGraph, min_len: int = 4, max_len: int = 12, work_limit: int = 250_000
) -> CycleScan:
    """Enumerate chordless cycles with min_len <= length <= max_len, each exactly once.

    Cycles are reported as vertex tuples starting at their smallest
    vertex, second element smaller than the last (one rotation and
    reflection per cycle).
    """
    if max_len < 4 or min_len < 4:
        raise GraphError("cycle length bounds must be >= 4")
    cycles: list[tuple[int, ...]] = []
    truncated = False
    steps = 0
    adj = g._adj

    def extend(start: int, path: list[int], banned: frozenset[int]) -> None:
        nonlocal truncated, steps
        last = path[-1]
        first_hop = len(path) == 1
        for w in g.neighbors(last):
            steps += 1
            if steps > work_limit:
                truncated = True
                return
            if w <= start or w in banned:
                continue
            if not first_hop and w in adj[start]:
                # w closes a cycle; extending past it would keep the
                # chord w-start, so either report or drop the branch.
                length = len(path) + 1
                if length >= min_len:
                    if length <= max_len:
                        if path[1] < w:
                            cycles.append(tuple(path) + (w,))
                    else:
                        truncated = True
                continue
            if len(path) + 2 > max_len:
                truncated = True
                continue
            # Grow the induced path: the old tail becomes interior, so
            # its other neighbors are banned from now on.
            grown = banned | {w} if first_hop else banned | adj[last] | {w}
            extend(start, path + [w], grown)

    for s in range(g.n):
        extend(s, [s], frozenset([s]))
        if steps > work_limit:
            truncated = True
            break
    cycles.sort()
    return CycleScan(cycles, truncated)


# ---------------------------------------------------------------------------
# Text formats and DOT export.
#
# Graph files: a "graph <n>" header line, one "u v" edge per line,
# "#" comments. Dag files: "dag <n>" header, "u -> v" arc lines.
# Vertex tokens are either all integers or all names per file.
# ---------------------------------------------------------------------------


def _parse_vertex_lines(
    kind: str, text: str
) -> tuple[int, list[tuple[str, str]], bool]:
    header = None
    pairs: list[tuple[str, str]] = []
    arrow = kind == "dag"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or parts[0] != kind:
                raise GraphError(f"line {lineno}: expected '{kind} <n>' header")
            try:
                header = int(parts[1])
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex count {parts[1]!r}")
            continue
        if arrow:
            if len(parts) != 3 or parts[1] != "->":
                raise GraphError(f"line {lineno}: expected 'u -> v'")
            pairs.append((parts[0], parts[2]))
        else:
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: expected 'u v'")
            pairs.append((parts[0], parts[1]))
    if header is None:
        raise GraphError(f"missing '{kind} <n>' header")
    tokens = [t for p in pairs for t in p]
    numeric = all(t.lstrip("-").isdigit() for t in tokens)
    return header, pairs, numeric


def _resolve_tokens(
    n: int, pairs: list[tuple[str, str]], numeric: bool
) -> tuple[list[tuple[int, int]], Optional[list[str]]]:
    if numeric:
        out = []
        for a, b in pairs:
            out.append((int(a), int(b)))
        return out, None
    names: list[str] = []
    idx: dict[str, int] = {}
    resolved: list[tuple[int, int]] = []
    for a, b in pairs:
        for t in (a, b):
            if t not in idx:
                if len(names) == n:
                    raise GraphError(f"more than {n} distinct vertex names (saw {t!r})")
                idx[t] = len(names)
                names.append(t)
        resolved.append((idx[a], idx[b]))
    while len(names) < n:
        names.append(f"u{len(names)}")
    return resolved, names


def read_graph_text(text: str) -> UndirectedGraph:
    n, pairs, numeric = _parse_vertex_lines("graph", text)
    edges, names = _resolve_tokens(n, pairs, numeric)
    return UndirectedGraph(n, edges, names)


def write_graph_text(g: UndirectedGraph) -> str:
    lines = [f"graph {g.n}"]
    for a, b in g.edges:
        lines.append(f"{g.label(a)} {g.label(b)}")
    return "\n".join(lines) + "\n"


def read_dag_text(text: str) -> Dag:
    n, pairs, numeric = _parse_vertex_lines("dag", text)
    arcs, names = _resolve_tokens(n, pairs, numeric)
    return Dag(n, arcs, names)


def align_dag(d: Dag, g) -> Dag:
    """Renumber a dag onto another graph's vertex ids, matched by label.

    The text formats number vertices by first appearance, so a dag
    read back from a file rarely shares ids with the in-memory graph
    it was written against; labels are the stable identity. The target
    g can be an UndirectedGraph or a Dag and must carry the same
    labels, one each.
    """
    if d.n != g.n:
        raise GraphError(f"cannot align: {d.n} vertices against {g.n}")
    idx = {g.label(v): v for v in range(g.n)}
    if len(idx) != g.n:
        raise GraphError("cannot align: target labels are not unique")
    try:
        perm = [idx[d.label(v)] for v in range(d.n)]
    except KeyError as exc:
        raise GraphError(f"cannot align: no vertex labeled {exc.args[0]!r}") from exc
    names = [g.label(v) for v in range(g.n)]
    return Dag(g.n, [(perm[a], perm[b]) for a, b in d.arcs], names=names)


def write_dag_text(d: Dag) -> str:
    lines = [f"dag {d.n}"]
    for a, b in d.arcs:
        lines.append(f"{d.label(a)} -> {d.label(b)}")
    return "\n".join(lines) + "\n"


def _dot_id(s: str) -> str:
    if s.isidentifier() or s.isdigit():
        return s
    return '"' + s.replace('"', '\\"') + '"'


def graph_to_dot(g: UndirectedGraph) -> str:
    lines = ["graph {"]
    for v in range(g.n):
        if g.degree(v) == 0:
            lines.append(f"  {_dot_id(g.label(v))};")
    for a, b in g.edges:
        lines.append(f"  {_dot_id(g.label(a))} -- {_dot_id(g.label(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dag_to_dot(d: Dag) -> str:
    lines = ["digraph {"]
    for v in range(d.n):
        if not d.parents(v) and not d.children(v):
            lines.append(f"  {_dot_id(d.label(v))};")
    for a, b in d.arcs:
        lines.append(f"  {_dot_id(d.label(a))} -> {_dot_id(d.label(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"

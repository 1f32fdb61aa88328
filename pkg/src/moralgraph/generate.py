"""Seeded generators for graphs and formulas used in tests and the CLI."""

from __future__ import annotations

import random
from itertools import combinations

from .graphs import Dag, UndirectedGraph, moralize
from .reduction import CnfFormula


def random_dag(n: int, p: float, seed: int) -> Dag:
    """Random dag: arcs follow a shuffled topological order."""
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    arcs = []
    for i, j in combinations(range(n), 2):
        if rng.random() < p:
            arcs.append((order[i], order[j]))
    return Dag(n, arcs)


def moralized(n: int, p: float, seed: int) -> UndirectedGraph:
    """Moral graph of a random dag; always a Moral instance."""
    return moralize(random_dag(n, p, seed))


def gnp(n: int, p: float, seed: int) -> UndirectedGraph:
    rng = random.Random(seed)
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    return UndirectedGraph(n, edges)


def gnp_capped(n: int, p: float, max_edges: int, seed: int) -> UndirectedGraph:
    """gnp sample thinned to at most max_edges (uniform subsample)."""
    rng = random.Random(seed)
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    if len(edges) > max_edges:
        edges = rng.sample(edges, max_edges)
    return UndirectedGraph(n, sorted(edges))


def random_chordal(n: int, seed: int, fanout: int = 3) -> UndirectedGraph:
    """Random chordal graph grown one simplicial vertex at a time.

    Each new vertex attaches to a clique among its predecessors, built
    by greedily extending from a random start vertex, so insertion
    order reversed is an elimination order.
    """
    rng = random.Random(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        clique = {u}
        want = rng.randrange(fanout) if fanout > 1 else 0
        candidates = [w for w in range(v) if w != u]
        rng.shuffle(candidates)
        for w in candidates:
            if len(clique) > want:
                break
            if all(w in adj[x] for x in clique):
                clique.add(w)
        for w in clique:
            adj[v].add(w)
            adj[w].add(v)
            edges.append((w, v))
    return UndirectedGraph(n, edges)


def triangle_ring(k: int) -> UndirectedGraph:
    """Cycle of length k with a pendant triangle on every rim edge.

    Not chordal for k >= 4, but each rim edge lies in an exterior
    triangle at its apex vertex, so the clique peel succeeds: deleting
    every rim edge at its apex gives a witness dag.
    """
    if k < 3:
        raise ValueError("ring needs at least 3 rim vertices")
    edges = []
    for i in range(k):
        j = (i + 1) % k
        apex = k + i
        edges.append((min(i, j), max(i, j)))
        edges.append((i, apex))
        edges.append((j, apex))
    return UndirectedGraph(2 * k, edges)


def random_formula(n: int, t: int, seed: int) -> CnfFormula:
    """Random normalized 3-CNF ready for the reduction.

    Every clause uses three distinct variables, no clause repeats, and
    every variable occurs in both polarities (so the formula survives
    preprocessing unchanged). Needs 3t >= 2n to be able to place both
    polarities of every variable.
    """
    rng = random.Random(seed)
    if n < 3:
        raise ValueError("need at least 3 variables")
    if 3 * t < 2 * n:
        raise ValueError("too few clauses to use every variable both ways")
    for attempt in range(10000):
        clauses = []
        seen = set()
        guard = 0
        while len(clauses) < t:
            guard += 1
            if guard > 10000 * (t + 1):
                raise ValueError("clause space too small for requested count")
            vars3 = rng.sample(range(1, n + 1), 3)
            cl = tuple(v if rng.random() < 0.5 else -v for v in vars3)
            key = tuple(sorted(cl))
            if key in seen:
                continue
            seen.add(key)
            clauses.append(cl)
        polarity: dict[int, set[bool]] = {}
        for cl in clauses:
            for lit in cl:
                polarity.setdefault(abs(lit), set()).add(lit > 0)
        if all(len(polarity.get(v, ())) == 2 for v in range(1, n + 1)):
            return CnfFormula(n, tuple(clauses))
    raise ValueError("could not balance polarities; increase t")

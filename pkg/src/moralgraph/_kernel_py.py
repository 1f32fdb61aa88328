"""Pure Python search kernel: exhaustive per-edge disposition enumeration.

The compiled kernel in _kernel_c.pyx mirrors this module operation for
operation; both must visit candidates in the same order and return the
same first witness. Keep the two in sync.

Dispositions per edge (a, b) with a < b: 1 orients a -> b, 2 orients
b -> a, 4 deletes the edge (endpoints then need a common child whose
other parent set stays adjacent). A full assignment is accepted exactly
when the oriented arcs are acyclic, all co-parents are adjacent in the
graph, and every deleted edge's endpoints share a child.
"""

from __future__ import annotations

from typing import Iterator, Optional

FORWARD = 1
BACKWARD = 2
DELETED = 4


def _reaches(src: int, dst: int, ch: list[int]) -> bool:
    """True if src reaches dst along current arcs (mask BFS)."""
    if src == dst:
        return True
    seen = 1 << src
    frontier = 1 << src
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = (f & -f).bit_length() - 1
            f &= f - 1
            nxt |= ch[v]
        nxt &= ~seen
        if (nxt >> dst) & 1:
            return True
        seen |= nxt
        frontier = nxt
    return False


def search_dispositions(
    n: int,
    edges: list[tuple[int, int]],
    adjmask: list[int],
    node_limit: int = 0,
) -> tuple[Optional[tuple[int, ...]], int]:
    """First accepted disposition vector in enumeration order, plus nodes expanded.

    Tries 1, 2, 4 per edge in edge-list order with sound pruning:
    cycle closure, non-adjacent co-parents, and deleted edges whose
    endpoints have no common graph neighbor are cut immediately.
    node_limit 0 means unlimited; a hit returns (None, -nodes).
    """
    m = len(edges)
    parents = [0] * n
    ch = [0] * n
    assign = [0] * m
    nodes = 0
    limited = node_limit > 0

    def accept() -> bool:
        for i in range(m):
            if assign[i] == DELETED:
                a, b = edges[i]
                common = adjmask[a] & adjmask[b]
                ok = False
                c = common
                while c:
                    v = (c & -c).bit_length() - 1
                    c &= c - 1
                    if (parents[v] >> a) & 1 and (parents[v] >> b) & 1:
                        ok = True
                        break
                if not ok:
                    return False
        return True

    def rec(i: int) -> Optional[int]:
        nonlocal nodes
        if i == m:
            return 1 if accept() else None
        a, b = edges[i]
        for val in (FORWARD, BACKWARD, DELETED):
            nodes += 1
            if limited and nodes > node_limit:
                return -1
            if val == DELETED:
                if not (adjmask[a] & adjmask[b]):
                    continue
                assign[i] = val
                r = rec(i + 1)
                if r:
                    return r
                continue
            t, h = (a, b) if val == FORWARD else (b, a)
            # Cycle: the head must not already reach the tail.
            if _reaches(h, t, ch):
                continue
            # Marriage: every existing parent of the head must be a
            # graph neighbor of the new parent.
            if parents[h] & ~adjmask[t]:
                continue
            assign[i] = val
            parents[h] |= 1 << t
            ch[t] |= 1 << h
            r = rec(i + 1)
            parents[h] &= ~(1 << t)
            ch[t] &= ~(1 << h)
            if r:
                return r
        return None

    r = rec(0)
    if r == -1:
        return None, -nodes
    if r == 1:
        return tuple(assign), nodes
    return None, nodes


def iter_accepted_dispositions(
    n: int, edges: list[tuple[int, int]], adjmask: list[int]
) -> Iterator[tuple[int, ...]]:
    """Yield every accepted disposition vector (test oracle; pure Python only)."""
    m = len(edges)
    parents = [0] * n
    ch = [0] * n
    assign = [0] * m

    def accept() -> bool:
        for i in range(m):
            if assign[i] == DELETED:
                a, b = edges[i]
                common = adjmask[a] & adjmask[b]
                ok = False
                c = common
                while c:
                    v = (c & -c).bit_length() - 1
                    c &= c - 1
                    if (parents[v] >> a) & 1 and (parents[v] >> b) & 1:
                        ok = True
                        break
                if not ok:
                    return False
        return True

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            if accept():
                yield tuple(assign)
            return
        a, b = edges[i]
        for val in (FORWARD, BACKWARD, DELETED):
            if val == DELETED:
                if not (adjmask[a] & adjmask[b]):
                    continue
                assign[i] = val
                yield from rec(i + 1)
                continue
            t, h = (a, b) if val == FORWARD else (b, a)
            if _reaches(h, t, ch):
                continue
            if parents[h] & ~adjmask[t]:
                continue
            assign[i] = val
            parents[h] |= 1 << t
            ch[t] |= 1 << h
            yield from rec(i + 1)
            parents[h] &= ~(1 << t)
            ch[t] &= ~(1 << h)

    yield from rec(0)

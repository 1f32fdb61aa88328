# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernel_py.search_dispositions.

Same enumeration order, same pruning, same first witness. The pure
module is the reference; this one exists for speed on the exhaustive
sweeps. Vertex masks are 64-bit, which the disposition cap keeps safe.
"""

from libc.stdint cimport uint64_t, int64_t


cdef inline bint _reaches(int src, int dst, uint64_t *ch) nogil:
    cdef uint64_t seen, frontier, nxt, f
    cdef int v
    if src == dst:
        return True
    seen = (<uint64_t>1) << src
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            v = __builtin_ctzll(f)
            f &= f - 1
            nxt |= ch[v]
        nxt &= ~seen
        if (nxt >> dst) & 1:
            return True
        seen |= nxt
        frontier = nxt
    return False


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


def search_dispositions(int n, list edges, list adjmask, long node_limit=0):
    """See _kernel_py.search_dispositions; identical contract."""
    cdef int m = len(edges)
    if n > 62 or m > 30:
        raise ValueError("kernel limited to 62 vertices and 30 edges")
    cdef uint64_t parents[64]
    cdef uint64_t ch[64]
    cdef uint64_t adj[64]
    cdef int ea[32]
    cdef int eb[32]
    cdef int assign[32]
    cdef int i
    for i in range(n):
        parents[i] = 0
        ch[i] = 0
        adj[i] = <uint64_t>adjmask[i]
    for i in range(m):
        ea[i] = edges[i][0]
        eb[i] = edges[i][1]
        assign[i] = 0
    cdef int64_t nodes = 0
    cdef bint limited = node_limit > 0

    cdef int sp, a, b, t, h, val, vi, v
    cdef uint64_t common, c
    cdef bint ok, cut
    # Explicit stack of (edge index, next value slot); slot 0..2 maps
    # to dispositions 1, 2, 4 in that order.
    cdef int slot[33]
    cdef int r = 0
    sp = 0
    slot[0] = 0
    while sp >= 0:
        i = sp
        if i == m:
            ok = True
            for vi in range(m):
                if assign[vi] == 4:
                    a = ea[vi]
                    b = eb[vi]
                    common = adj[a] & adj[b]
                    cut = False
                    c = common
                    while c:
                        v = __builtin_ctzll(c)
                        c &= c - 1
                        if ((parents[v] >> a) & 1) and ((parents[v] >> b) & 1):
                            cut = True
                            break
                    if not cut:
                        ok = False
                        break
            if ok:
                r = 1
                break
            sp -= 1
            if sp >= 0:
                a = ea[sp]
                b = eb[sp]
                val = 1 << (slot[sp] - 1)
                if val != 4:
                    t = a if val == 1 else b
                    h = b if val == 1 else a
                    parents[h] &= ~((<uint64_t>1) << t)
                    ch[t] &= ~((<uint64_t>1) << h)
            continue
        a = ea[i]
        b = eb[i]
        cut = False
        while slot[i] < 3:
            val = 1 << slot[i]
            slot[i] += 1
            nodes += 1
            if limited and nodes > node_limit:
                r = -1
                break
            if val == 4:
                if not (adj[a] & adj[b]):
                    continue
                assign[i] = val
                sp += 1
                slot[sp] = 0
                cut = True
                break
            t = a if val == 1 else b
            h = b if val == 1 else a
            if _reaches(h, t, ch):
                continue
            if parents[h] & ~adj[t]:
                continue
            assign[i] = val
            parents[h] |= (<uint64_t>1) << t
            ch[t] |= (<uint64_t>1) << h
            sp += 1
            slot[sp] = 0
            cut = True
            break
        if r == -1:
            break
        if cut:
            continue
        # Exhausted this edge: undo the parent frame's arc and pop.
        sp -= 1
        if sp >= 0:
            a = ea[sp]
            b = eb[sp]
            val = 1 << (slot[sp] - 1)
            if val != 4:
                t = a if val == 1 else b
                h = b if val == 1 else a
                parents[h] &= ~((<uint64_t>1) << t)
                ch[t] &= ~((<uint64_t>1) << h)
    if r == -1:
        return None, -nodes
    if r == 1:
        return tuple(assign[vi] for vi in range(m)), nodes
    return None, nodes

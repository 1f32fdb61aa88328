"""Small named graphs exercising specific decision behaviors.

Each builder returns a fresh graph; the two *_witness helpers return
dags that moralize exactly to their graphs and double as frozen
reference answers in the tests.
"""

from __future__ import annotations

from .graphs import Dag, UndirectedGraph, graph_from_names


def _dag(g: UndirectedGraph, arc_names: list[tuple[str, str]]) -> Dag:
    return Dag(g.n, [(g.id_of(a), g.id_of(b)) for a, b in arc_names], names=g.names)


def wheel() -> UndirectedGraph:
    """4-spoke wheel: hub c over the square a-b-e-d. Not moral.

    No vertex has a clique neighborhood, so the graph has no exterior
    clique at all; the no_exterior screen refutes it outright.
    """
    names = ["a", "b", "c", "d", "e"]
    edges = [
        ("a", "b"), ("b", "e"), ("e", "d"), ("d", "a"),
        ("c", "a"), ("c", "b"), ("c", "d"), ("c", "e"),
    ]
    return graph_from_names(edges, names)


def wheel_with_ears() -> UndirectedGraph:
    """Wheel plus two ear vertices over opposite rim edges. Moral.

    f sits over a-b and g over d-e, giving the rim's chordless cycle
    edges inside exterior triangles; the cycle_exterior screen accepts
    this graph, and deleting a-b at f and d-e at g yields a witness.
    """
    names = ["a", "b", "c", "d", "e", "f", "g"]
    edges = [
        ("a", "b"), ("a", "c"), ("a", "d"), ("a", "f"),
        ("b", "c"), ("b", "e"), ("b", "f"),
        ("c", "d"), ("c", "e"),
        ("d", "e"), ("d", "g"), ("e", "g"),
    ]
    return graph_from_names(edges, names)


def wheel_with_ears_witness() -> Dag:
    g = wheel_with_ears()
    return _dag(
        g,
        [
            ("a", "f"), ("b", "f"), ("d", "g"), ("e", "g"),
            ("a", "c"), ("b", "c"), ("c", "d"), ("c", "e"),
            ("a", "d"), ("b", "e"),
        ],
    )


def clique_overlap() -> UndirectedGraph:
    """Strip of overlapping triangles with one apex pair. Moral.

    Maximal cliques are abc, acd, bce, cde, def; only def is exterior
    (f is the lone extreme vertex). The clique peel gets stuck after
    removing def, so this graph is not a web, yet deleting d-e at f
    completes a witness.
    """
    names = ["a", "b", "c", "d", "e", "f"]
    edges = [
        ("a", "b"), ("a", "c"), ("b", "c"),
        ("a", "d"), ("c", "d"), ("b", "e"), ("c", "e"), ("d", "e"),
        ("d", "f"), ("e", "f"),
    ]
    return graph_from_names(edges, names)


def clique_overlap_witness() -> Dag:
    g = clique_overlap()
    return _dag(
        g,
        [
            ("a", "b"), ("a", "c"), ("b", "c"),
            ("c", "d"), ("c", "e"), ("a", "d"), ("b", "e"),
            ("d", "f"), ("e", "f"),
        ],
    )


def twin_squares() -> UndirectedGraph:
    """Two squares hanging off one apex, plus a decoy triangle. Not moral.

    Both chordless squares a-b-c-d and e-f-g-h can only lose an edge
    at the shared apex x, which would give x a non-adjacent parent
    pair, so no witness exists. Every screen stays quiet: each square
    has edges in triangles at x, and c-p-q is an exterior triangle.
    Only the exact search refutes this graph.
    """
    names = ["a", "b", "c", "d", "e", "f", "g", "h", "x", "p", "q"]
    edges = [
        ("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
        ("e", "f"), ("f", "g"), ("g", "h"), ("h", "e"),
        ("x", "a"), ("x", "b"), ("x", "e"), ("x", "f"),
        ("c", "p"), ("c", "q"), ("p", "q"),
    ]
    return graph_from_names(edges, names)


def marked_edge_trap() -> UndirectedGraph:
    """Eliminator stress graph: marked edge order decides the outcome.

    Four extreme vertices e, g, m, o peel first and mark c-f, d-f,
    k-n, l-n. Popping the oldest marked edges first strands the
    central square a-b-c-d and gets Stuck; popping k-n and l-n before
    the others unlocks a full elimination. Moral either way.
    """
    names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o"]
    edges = [
        ("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"),
        ("c", "e"), ("e", "f"), ("c", "f"),
        ("d", "g"), ("g", "f"), ("d", "f"),
        ("f", "i"),
        ("h", "n"), ("h", "i"), ("h", "j"), ("i", "j"),
        ("j", "l"), ("i", "l"), ("i", "k"), ("k", "l"),
        ("k", "m"), ("m", "n"), ("k", "n"),
        ("l", "o"), ("o", "n"), ("l", "n"),
    ]
    return graph_from_names(edges, names)

"""Graph morality toolkit.

Decides whether an undirected graph is the moral graph of some dag,
produces witness dags or refutation certificates, and builds 3-SAT
morality instances with witness synthesis and assignment extraction.
"""

from .graphs import (
    Dag,
    GraphError,
    UndirectedGraph,
    build_dag,
    build_graph,
    chordless_cycles,
    is_acyclic,
    is_chordal,
    is_moral_graph_of,
    maximal_cliques,
    moralize,
)
from .screens import (
    INCONCLUSIVE,
    RuleResult,
    ScreenReport,
    report_to_keyvalue,
    report_to_text,
    screen,
)
from .decide import (
    BACKWARD,
    CONFLICT,
    DELETED,
    FORWARD,
    MORAL,
    NOT_MORAL,
    UNKNOWN,
    BruteForceCapError,
    Decision,
    PartialOrientation,
    brute_force,
    decide,
    propagate,
)
from .eliminate import (
    BUDGET_EXHAUSTED,
    ELIMINATED,
    STUCK,
    EliminationOutcome,
    eliminate,
    witness_from_trace,
)
from .reduction import (
    CnfFormula,
    MoralityInstance,
    PreprocessResult,
    extract_assignment,
    forced_constraints,
    normalize_clauses,
    parse_cnf,
    preprocess,
    reduce,
    witness_dag,
)

__version__ = "0.1.0"

__all__ = [
    "UndirectedGraph",
    "Dag",
    "GraphError",
    "build_graph",
    "build_dag",
    "moralize",
    "is_moral_graph_of",
    "maximal_cliques",
    "is_chordal",
    "chordless_cycles",
    "is_acyclic",
    "ScreenReport",
    "RuleResult",
    "screen",
    "report_to_text",
    "report_to_keyvalue",
    "INCONCLUSIVE",
    "Decision",
    "decide",
    "brute_force",
    "propagate",
    "PartialOrientation",
    "CONFLICT",
    "FORWARD",
    "BACKWARD",
    "DELETED",
    "MORAL",
    "NOT_MORAL",
    "UNKNOWN",
    "BruteForceCapError",
    "EliminationOutcome",
    "eliminate",
    "witness_from_trace",
    "ELIMINATED",
    "STUCK",
    "BUDGET_EXHAUSTED",
    "CnfFormula",
    "MoralityInstance",
    "PreprocessResult",
    "parse_cnf",
    "preprocess",
    "normalize_clauses",
    "reduce",
    "forced_constraints",
    "witness_dag",
    "extract_assignment",
    "__version__",
]

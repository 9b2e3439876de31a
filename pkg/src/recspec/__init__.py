"""Recursion workbench for basic process algebra with deadlock.

Three readings of a recursive specification are implemented side by side:
the operational process graph of a term, its finite unfolding
approximations, and the set of valuations over a finite universe of
process graphs (modulo strong bisimilarity) that satisfy every equation.
"""

from .algebraic import (
    GuardednessReport,
    HoldsResult,
    SolutionSet,
    compatible_valuations,
    congruence_check,
    holds,
    holds_conditional,
    is_compatible,
    is_guarded,
    unique_solution,
)
from .denotational import approximate, denote, unfold
from .errors import (
    BudgetExceededError,
    InternalInconsistencyError,
    LimitExceededError,
    SemanticError,
)
from .graphs import (
    TICK,
    BisimResult,
    ProcessGraph,
    Universe,
    bisimilar,
    build_graph,
    enumerate_universe,
    kleene_star,
    minimize,
    truncate,
)
from .operational import derive_steps, graph_of
from .parser import Document, ParseError, parse_document, parse_spec, parse_term
from .syntax import (
    Act,
    Deadlock,
    Equation,
    Rec,
    RecSpec,
    Seq,
    Sum,
    Term,
    Var,
    format_spec,
    format_term,
    free_vars,
)

__all__ = [
    "Act",
    "BisimResult",
    "BudgetExceededError",
    "Deadlock",
    "Document",
    "Equation",
    "GuardednessReport",
    "HoldsResult",
    "InternalInconsistencyError",
    "LimitExceededError",
    "ParseError",
    "ProcessGraph",
    "Rec",
    "RecSpec",
    "SemanticError",
    "Seq",
    "SolutionSet",
    "Sum",
    "TICK",
    "Term",
    "Universe",
    "Var",
    "approximate",
    "bisimilar",
    "build_graph",
    "compatible_valuations",
    "congruence_check",
    "denote",
    "derive_steps",
    "enumerate_universe",
    "format_spec",
    "format_term",
    "free_vars",
    "graph_of",
    "holds",
    "holds_conditional",
    "is_compatible",
    "is_guarded",
    "kleene_star",
    "minimize",
    "parse_document",
    "parse_spec",
    "parse_term",
    "truncate",
    "unfold",
    "unique_solution",
]

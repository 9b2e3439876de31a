"""Operation handlers shared by the HTTP endpoints and the command line.

Each handler takes already-parsed domain values and returns a response
model; parse and semantic errors propagate to the caller, which maps them to
HTTP status codes or exit codes.
"""

from __future__ import annotations

from typing import Optional

from ..algebraic import (
    compatible_valuations,
    holds,
    holds_conditional,
    is_guarded,
)
from ..denotational import approximate
from ..graphs import (
    ProcessGraph,
    Universe,
    bisimilar,
    canonical_text,
    enumerate_universe,
    to_dot,
    truncate,
)
from ..operational import DEFAULT_LIMIT, Valuation, graph_of
from ..syntax import Equation, RecSpec, Term, flatten
from .models import (
    BisimResponse,
    CheckResponse,
    CompareLevel,
    CompareResponse,
    GraphResponse,
    GuardedResponse,
    SolveResponse,
    TransitionEdge,
    UniverseResponse,
)


def graph_response(g: ProcessGraph) -> GraphResponse:
    return GraphResponse(
        num_states=g.num_states,
        transitions=[
            TransitionEdge(src=s, action=a, dst=t) for s, a, t in g.sorted_transitions()
        ],
        canonical=canonical_text(g),
        dot=to_dot(g),
    )


def lts(term: Term, spec: Optional[RecSpec] = None, rho: Optional[Valuation] = None,
        limit: int = DEFAULT_LIMIT) -> GraphResponse:
    return graph_response(graph_of(term, spec, rho, limit))


def guarded(spec: RecSpec) -> GuardedResponse:
    report = is_guarded(spec)
    return GuardedResponse(
        guarded=report.guarded,
        witness=list(report.witness) if report.witness else None,
        description=report.describe(),
    )


def bisim(left: Term, right: Term, spec: Optional[RecSpec] = None,
          limit: int = DEFAULT_LIMIT) -> BisimResponse:
    verdict = bisimilar(graph_of(left, spec, None, limit), graph_of(right, spec, None, limit))
    return BisimResponse(bisimilar=bool(verdict), formula=verdict.formula)


def make_universe(actions: list[str], max_states: int, budget: int = 65536) -> Universe:
    return enumerate_universe(actions, max_states, budget)


def solve(spec: RecSpec, universe: Universe, budget: int) -> SolveResponse:
    sols = compatible_valuations(spec, universe, budget)
    used = sorted({i for row in sols.rows for i in row})
    return SolveResponse(
        variables=list(sols.variables),
        solutions=[list(row) for row in sols.rows],
        universe_size=len(universe),
        legend=[universe.describe(i) for i in used],
        rendered=sols.render() if sols.rows else "no solutions within universe",
    )


def check(eq: Equation, spec: RecSpec, universe: Universe, conditional: bool,
          budget: int) -> CheckResponse:
    judge = holds_conditional if conditional else holds
    result = judge(eq, spec, universe, budget)
    return CheckResponse(
        holds=result.holds,
        conditional=conditional,
        variables=list(result.variables),
        witness=list(result.witness) if result.witness else None,
        rendered=result.render(),
    )


def approx(term: Term, depth: int, limit: int = DEFAULT_LIMIT) -> GraphResponse:
    head, spec = flatten(term)
    return graph_response(approximate(head, spec, depth))


def compare(term: Term, depth: int, limit: int = DEFAULT_LIMIT) -> CompareResponse:
    head, spec = flatten(term)
    operational = graph_of(term, None, None, limit)
    levels = []
    for n in range(depth + 1):
        approximation = approximate(head, spec, n)
        agree = bool(bisimilar(truncate(approximation, n), truncate(operational, n)))
        levels.append(CompareLevel(depth=n, agree=agree))
    all_agree = all(level.agree for level in levels)
    lines = [
        f"depth {level.depth}: {'agree' if level.agree else 'DISAGREE'}" for level in levels
    ]
    lines.append("operational and approximation semantics agree up to depth "
                 f"{depth}" if all_agree else "DISAGREEMENT found")
    return CompareResponse(levels=levels, agree=all_agree, rendered="\n".join(lines))


def universe_listing(universe: Universe) -> UniverseResponse:
    return UniverseResponse(
        actions=list(universe.alphabet),
        max_states=universe.max_states,
        size=len(universe),
        members=[universe.describe(i) for i in range(len(universe))],
    )

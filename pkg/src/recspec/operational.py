"""Operational semantics: derive transitions between closed configurations.

A configuration is a term whose leaves may additionally be ``GraphState``
constants (a pinned state of a process graph, standing in for a valuation
value) or the terminated marker ``TERMINATED``, which only ever occurs as a
whole configuration.

The rules:

    (act)    a --a--> TERMINATED
    (graph)  GraphState(g,s) --a--> GraphState(g,s') for (s,a,s') in g
    (sum)    moves of either summand
    (seq)    t --a--> TERMINATED  gives  t.u --a--> u
             t --a--> t'          gives  t.u --a--> t'.u
    (rec)    moves of X in V_spec are the moves of its right-hand side

The transition set is the least one closed under the rules: variable step
sets are computed by iterating all right-hand sides simultaneously from the
empty set until stable, so a derivation that merely re-requests a variable
being expanded contributes nothing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Union

from .errors import LimitExceededError, SemanticError
from .graphs import TICK, ProcessGraph, build_graph, minimize
from .syntax import Act, Deadlock, Rec, RecSpec, Seq, Sum, Term, Var, flatten, free_vars


@dataclass(frozen=True)
class GraphState:
    graph: ProcessGraph
    state: int

    def __post_init__(self):
        if not (0 <= self.state < self.graph.num_states):
            raise ValueError(f"state {self.state} not in graph")


class _Terminated:
    __slots__ = ()

    def __repr__(self):
        return "TERMINATED"


TERMINATED = _Terminated()

Config = Union[Term, GraphState, _Terminated]

Valuation = Mapping[str, ProcessGraph]

DEFAULT_LIMIT = 10_000


def config_key(c: Config):
    """Total order on configurations, for deterministic exploration."""
    if c is TERMINATED:
        return ("tick",)
    match c:
        case Deadlock():
            return ("delta",)
        case Act(a):
            return ("act", a)
        case Var(x):
            return ("var", x)
        case GraphState(g, s):
            return ("graph", (g.num_states, g.sorted_transitions()), s)
        case Seq(l, r):
            return ("seq", config_key(l), config_key(r))
        case Sum(l, r):
            return ("sum", config_key(l), config_key(r))
    raise SemanticError(f"not a configuration: {c!r}")


@lru_cache(maxsize=65536)
def normalize(c: Config) -> Config:
    """Collapse step-set-preserving redundancy before configurations are
    compared: sums are flattened, sorted, deduplicated and stripped of δ
    summands; sequences are right-associated and cut at δ."""
    if c is TERMINATED or isinstance(c, (GraphState, Act, Var, Deadlock)):
        return c
    match c:
        case Sum():
            parts = []
            stack = [c]
            while stack:
                node = stack.pop()
                if isinstance(node, Sum):
                    stack.append(node.left)
                    stack.append(node.right)
                else:
                    part = normalize(node)
                    if not isinstance(part, Deadlock):
                        parts.append(part)
            if not parts:
                return Deadlock()
            uniq = {config_key(p): p for p in parts}
            ordered = [uniq[k] for k in sorted(uniq)]
            out = ordered[-1]
            for p in reversed(ordered[:-1]):
                out = Sum(p, out)
            return out
        case Seq():
            factors = []
            stack = [c]
            while stack:  # unroll every nesting into a flat factor list
                node = stack.pop()
                if isinstance(node, Seq):
                    stack.append(node.right)
                    stack.append(node.left)
                else:
                    f = normalize(node)
                    while isinstance(f, Seq):  # a factor may renormalize to a chain
                        factors.append(f.left)
                        f = f.right
                    factors.append(f)
            kept = []
            for f in factors:
                kept.append(f)
                if isinstance(f, Deadlock):
                    break  # x.delta.y never gets past the delta
            if isinstance(kept[0], Deadlock):
                return Deadlock()
            out = kept[-1]
            for f in reversed(kept[:-1]):
                out = Seq(f, out)
            return out
        case Rec():
            raise SemanticError("recursion binders must be flattened into the specification")
    raise SemanticError(f"not a configuration: {c!r}")


def _graph_steps(g: ProcessGraph, s: int) -> frozenset:
    out = set()
    for a, t in g.out_map[s]:
        out.add((a, TERMINATED if t == TICK else GraphState(g, t)))
    return frozenset(out)


def _step(c: Config, var_steps: Mapping[str, frozenset], rho: Valuation) -> frozenset:
    """One structural pass; variable moves are read off ``var_steps``."""
    if c is TERMINATED:
        raise SemanticError("the terminated marker has no transitions")
    match c:
        case Deadlock():
            return frozenset()
        case Act(a):
            return frozenset({(a, TERMINATED)})
        case GraphState(g, s):
            return _graph_steps(g, s)
        case Var(x):
            if x in var_steps:
                return var_steps[x]
            if x in rho:
                return _graph_steps(rho[x], rho[x].initial)
            raise SemanticError(f"unbound variable {x!r}")
        case Sum(l, r):
            return _step(l, var_steps, rho) | _step(r, var_steps, rho)
        case Seq(l, r):
            out = set()
            for a, target in _step(l, var_steps, rho):
                out.add((a, r if target is TERMINATED else normalize(Seq(target, r))))
            return frozenset(out)
        case Rec():
            raise SemanticError("recursion binders must be flattened into the specification")
    raise SemanticError(f"not a configuration: {c!r}")


@lru_cache(maxsize=256)
def _spec_steps(spec: Optional[RecSpec], rho_items: tuple, limit: int) -> dict:
    """Least fixed point of the rule system over all spec variables at once.

    Kleene iteration from the empty step sets; monotone, so it either
    stabilizes or keeps deriving (an infinite least transition set, possible
    under unguarded recursion inside sequencing).  ``limit`` caps the
    cumulative derivation work across rounds, which keeps the divergent case
    cheap: each round re-derives the whole current set, so n productive
    rounds cost about n^2/2 against the cap.
    """
    rho = dict(rho_items)
    if spec is None:
        return {}
    bodies = {x: normalize(spec[x]) for x in spec.variables}
    steps: dict[str, frozenset] = {x: frozenset() for x in bodies}
    work = 0
    while True:
        new = {x: _step(body, steps, rho) for x, body in bodies.items()}
        if new == steps:
            return steps
        steps = new
        work += sum(len(s) for s in steps.values())
        if work > limit:
            raise LimitExceededError(limit, "derived steps")


def _freeze_rho(rho: Optional[Valuation]) -> tuple:
    return tuple(sorted((rho or {}).items(), key=lambda kv: kv[0]))


def derive_steps(c: Config, spec: Optional[RecSpec] = None,
                 rho: Optional[Valuation] = None,
                 limit: int = DEFAULT_LIMIT) -> frozenset:
    """All (action, successor) pairs derivable for ``c``; successors are
    normalized configurations."""
    var_steps = _spec_steps(spec, _freeze_rho(rho), limit)
    return _step(normalize(c), var_steps, rho or {})


def graph_of(t: Term, spec: Optional[RecSpec] = None,
             rho: Optional[Valuation] = None,
             limit: int = DEFAULT_LIMIT) -> ProcessGraph:
    """The reachable transition system of ``t``, minimized.

    ``t`` is flattened first, so recursion binders inside it join ``spec``
    (renamed apart from it).  Free variables must be covered by ``spec`` or
    ``rho``; exploration past ``limit`` configurations is an error.
    """
    rho = dict(rho or {})
    reserved = set(rho)
    if spec is not None:
        reserved |= set(spec.variables)
        for _, rhs in spec.items():
            reserved |= free_vars(rhs)
    head, flat = flatten_into(t, spec, reserved)
    unbound = set()
    scope = set(flat.variables) | set(rho)
    unbound |= free_vars(head) - scope
    for _, rhs in flat.items():
        unbound |= free_vars(rhs) - scope
    if unbound:
        raise SemanticError(f"unbound variable {sorted(unbound)[0]!r}")
    var_steps = _spec_steps(flat, _freeze_rho(rho), limit)

    start = normalize(head)
    index: dict = {}

    def intern(cfg: Config) -> int:
        if cfg is TERMINATED:
            return TICK
        if cfg not in index:
            if len(index) >= limit:
                raise LimitExceededError(limit)
            index[cfg] = len(index)
        return index[cfg]

    transitions = set()
    intern(start)
    frontier = deque([start])
    while frontier:
        cfg = frontier.popleft()
        src = index[cfg]
        for a, target in sorted(_step(cfg, var_steps, rho),
                                key=lambda step: (step[0], config_key(step[1]))):
            known = target is TERMINATED or target in index
            dst = intern(target)
            transitions.add((src, a, dst))
            if not known:
                frontier.append(target)
    return minimize(build_graph(len(index), transitions))


def flatten_into(t: Term, spec: Optional[RecSpec], reserved: set) -> tuple[Term, RecSpec]:
    """Flatten ``t`` and merge the result with ``spec``; binders in ``t`` are
    renamed apart from every reserved name, so no merge collision is possible."""
    head, own = flatten(t, reserved=reserved)
    if spec is None:
        return head, own
    merged = dict(spec.items())
    merged.update(own.items())
    return head, RecSpec(merged)

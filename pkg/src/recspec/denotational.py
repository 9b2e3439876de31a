"""Approximation semantics: iterated unfolding from the bottom element δ.

``unfold`` substitutes a specification's right-hand sides into a term a fixed
number of times and then cuts every remaining bound variable off with δ; for
guarded specifications the resulting graphs agree with the operational
semantics up to the unfolding depth, and the agreement depth grows with the
iteration count (the contraction property of the metric reading).

``denote`` is the plain compositional evaluation of a recursion-free term by
the graph combinators.  It always returns the canonical minimized form, so
results can be compared with ``==``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

from .errors import SemanticError
from .graphs import ProcessGraph, g_action, g_deadlock, g_seq, g_sum, minimize
from .operational import Valuation, graph_of
from .syntax import (
    Act,
    Deadlock,
    RecSpec,
    Seq,
    Sum,
    Term,
    Var,
    is_recursion_free,
    substitute,
)


def unfold(t: Term, spec: RecSpec, n: int) -> Term:
    """Substitute spec right-hand sides into ``t`` ``n`` times, then replace
    remaining bound variables by δ.  Free variables outside the
    specification pass through untouched."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    if not is_recursion_free(t):
        raise SemanticError("unfold takes a recursion-free term; flatten first")
    for name, rhs in spec.items():
        if not is_recursion_free(rhs):
            raise SemanticError(f"specification body for {name!r} is not recursion-free")
    step = dict(spec.items())
    for _ in range(n):
        t = substitute(t, step)
    cutoff = {x: Deadlock() for x in spec.variables}
    return substitute(t, cutoff)


def approximate(t: Term, spec: RecSpec, n: int,
                rho: Optional[Valuation] = None) -> ProcessGraph:
    """Operational graph of the n-th unfolding; the depth-n approximation of
    the fixed point from below."""
    return graph_of(unfold(t, spec, n), None, rho)


# Valuations repeat the same handful of graphs across millions of candidate
# bindings, so the per-graph canonical form is worth caching.
_mmin = lru_cache(maxsize=32768)(minimize)


@lru_cache(maxsize=65536)
def _msum(g: ProcessGraph, h: ProcessGraph) -> ProcessGraph:
    return minimize(g_sum(g, h))


@lru_cache(maxsize=65536)
def _mseq(g: ProcessGraph, h: ProcessGraph) -> ProcessGraph:
    return minimize(g_seq(g, h))


def denote(t: Term, rho: Optional[Valuation] = None) -> ProcessGraph:
    """Combinator fold over a recursion-free term; canonical minimized result."""
    rho = rho or {}
    match t:
        case Deadlock():
            return g_deadlock()
        case Act(a):
            return g_action(a)
        case Var(x):
            try:
                return _mmin(rho[x])
            except KeyError:
                raise SemanticError(f"unbound variable {x!r}") from None
        case Sum(l, r):
            return _msum(denote(l, rho), denote(r, rho))
        case Seq(l, r):
            return _mseq(denote(l, rho), denote(r, rho))
    raise SemanticError("denote takes a recursion-free term; flatten first")

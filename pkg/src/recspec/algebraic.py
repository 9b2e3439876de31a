"""Solution-set semantics of recursion over a finite universe.

A valuation is compatible with a specification S when every bound variable's
value is bisimilar to the value of its right-hand side; equations are judged
by quantifying over exactly the compatible valuations.  Guardedness (no cycle
of head-position dependencies) guarantees a unique solution.

``compatible_valuations`` is exhaustive but does not blindly walk the
|U|^variables product.  Free variables and one feedback variable per
head-position cycle are enumerated; every other variable is then forced by
contraction: since the domain has no empty process, every non-head occurrence
sits under at least one action, so after inlining head occurrences the
depth-d truncation of each right-hand side depends only on depth-(d-1)
truncations of the iterated variables.  Iterating truncation profiles from δ
therefore pins each variable to at most one universe member once the depth
separates all members, and the single candidate per enumeration is checked
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

from .denotational import denote
from .errors import BudgetExceededError, InternalInconsistencyError, SemanticError
from .graphs import ProcessGraph, Universe, g_deadlock, bisimilar, minimize, truncate
from .operational import Valuation, graph_of
from .syntax import (
    Act,
    Deadlock,
    Equation,
    RecSpec,
    Seq,
    Sum,
    Term,
    Var,
    free_vars,
    is_recursion_free,
)

DEFAULT_SOLVE_BUDGET = 1_000_000


def head_vars(t: Term) -> frozenset[str]:
    """Variables occurring in head position: reachable without passing an
    action.  The right argument of ``.`` is never a head (no empty process)."""
    match t:
        case Var(x):
            return frozenset({x})
        case Act() | Deadlock():
            return frozenset()
        case Sum(l, r):
            return head_vars(l) | head_vars(r)
        case Seq(l, _):
            return head_vars(l)
    raise SemanticError("head positions are defined on recursion-free terms; flatten first")


@dataclass(frozen=True)
class GuardednessReport:
    guarded: bool
    witness: Optional[tuple[str, ...]] = None  # cycle X1 ⇒ ... ⇒ X1

    def __bool__(self) -> bool:
        return self.guarded

    def describe(self) -> str:
        if self.guarded:
            return "guarded"
        return "unguarded: cycle " + " ⇒ ".join(self.witness)


def _require_flat(spec: RecSpec) -> None:
    for name, rhs in spec.items():
        if not is_recursion_free(rhs):
            raise SemanticError(f"specification body for {name!r} is not recursion-free")


def _head_edges(spec: RecSpec) -> dict[str, tuple[str, ...]]:
    bound = set(spec.variables)
    return {
        y: tuple(sorted(head_vars(rhs) & bound))
        for y, rhs in spec.items()
    }


def _find_cycle(edges: dict[str, tuple[str, ...]], skip: set[str]) -> Optional[list[str]]:
    """First head-dependency cycle in deterministic DFS order, or None."""
    done: set[str] = set()
    for root in sorted(edges):
        if root in done or root in skip:
            continue
        stack: list[tuple[str, int]] = [(root, 0)]
        path: list[str] = [root]
        on_path = {root}
        while stack:
            node, i = stack[-1]
            nexts = [z for z in edges[node] if z not in skip]
            if i < len(nexts):
                stack[-1] = (node, i + 1)
                z = nexts[i]
                if z in on_path:
                    return path[path.index(z):] + [z]
                if z in done:
                    continue
                stack.append((z, 0))
                path.append(z)
                on_path.add(z)
            else:
                stack.pop()
                path.pop()
                on_path.discard(node)
                done.add(node)
    return None


def is_guarded(spec: RecSpec) -> GuardednessReport:
    """Guarded iff the head-position dependency relation on bound variables
    is acyclic; the witness is the first cycle found."""
    _require_flat(spec)
    cycle = _find_cycle(_head_edges(spec), set())
    if cycle is None:
        return GuardednessReport(True)
    return GuardednessReport(False, tuple(cycle))


def spec_free_vars(spec: RecSpec) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for _, rhs in spec.items():
        out |= free_vars(rhs)
    return out - frozenset(spec.variables)


def is_compatible(rho: Valuation, spec: RecSpec) -> bool:
    """ρ(Y) bisimilar to the graph of S_Y under ρ, for every bound Y."""
    _require_flat(spec)
    missing = (set(spec.variables) | spec_free_vars(spec)) - set(rho)
    if missing:
        raise SemanticError(f"missing binding for {sorted(missing)[0]!r}")
    return all(
        bool(bisimilar(rho[y], graph_of(rhs, None, rho)))
        for y, rhs in spec.items()
    )


@dataclass(frozen=True)
class SolutionSet:
    spec: RecSpec
    universe: Universe
    variables: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]  # member indices, one row per solution

    def __len__(self) -> int:
        return len(self.rows)

    def valuations(self) -> list[dict[str, ProcessGraph]]:
        return [
            {x: self.universe[i] for x, i in zip(self.variables, row)}
            for row in self.rows
        ]

    def rows_over(self, variables: tuple[str, ...], budget: int) -> set[tuple[int, ...]]:
        """Rows extended to a superset of the variables; additions are
        unconstrained by this specification, so they range over everything."""
        extra = [x for x in variables if x not in self.variables]
        if set(self.variables) - set(variables):
            raise ValueError("can only extend to a superset of the variables")
        total = len(self.rows) * len(self.universe) ** len(extra)
        if total > budget:
            raise BudgetExceededError(total, budget)
        spots = {x: k for k, x in enumerate(variables)}
        out: set[tuple[int, ...]] = set()
        for row in self.rows:
            base = [0] * len(variables)
            for x, i in zip(self.variables, row):
                base[spots[x]] = i
            for combo in product(range(len(self.universe)), repeat=len(extra)):
                cand = list(base)
                for x, i in zip(extra, combo):
                    cand[spots[x]] = i
                out.add(tuple(cand))
        return out

    def same_solutions(self, other: "SolutionSet", budget: int = DEFAULT_SOLVE_BUDGET) -> bool:
        if self.universe.members != other.universe.members:
            return False
        union = tuple(sorted(set(self.variables) | set(other.variables)))
        return self.rows_over(union, budget) == other.rows_over(union, budget)

    def render(self) -> str:
        lines = [
            " ".join(f"{x}={self.universe.name(i)}" for x, i in zip(self.variables, row))
            for row in self.rows
        ]
        used = sorted({i for row in self.rows for i in row})
        legend = [self.universe.describe(i) for i in used]
        if legend:
            lines.append("legend:")
            lines.extend("  " + entry for entry in legend)
        return "\n".join(lines)


@lru_cache(maxsize=64)
def _separation(universe: Universe) -> tuple[int, dict[ProcessGraph, int]]:
    """Smallest depth whose truncation profiles tell all members apart."""
    cap = sum(m.num_states for m in universe.members) + 2
    for depth in range(cap + 1):
        profiles = [minimize(truncate(m, depth)) for m in universe.members]
        table = {p: i for i, p in enumerate(profiles)}
        if len(table) == len(universe.members):
            return depth, table
    raise InternalInconsistencyError(
        "universe members not separated by truncation; members must be pairwise non-bisimilar"
    )


def _inline_heads(spec: RecSpec, iterated: list[str]) -> dict[str, Term]:
    """Rewrite each iterated variable's body so no iterated variable occurs
    in head position (possible because their head dependencies are acyclic)."""
    resolved: dict[str, Term] = {}

    def resolve(y: str) -> Term:
        if y not in resolved:
            resolved[y] = headsub(spec[y])
        return resolved[y]

    def headsub(t: Term) -> Term:
        match t:
            case Var(z) if z in iterated_set:
                return resolve(z)
            case Sum(l, r):
                return Sum(headsub(l), headsub(r))
            case Seq(l, r):
                return Seq(headsub(l), r)
            case _:
                return t

    iterated_set = set(iterated)
    for y in iterated:
        resolve(y)
    return resolved


def compatible_valuations(spec: RecSpec, universe: Universe,
                          budget: int = DEFAULT_SOLVE_BUDGET) -> SolutionSet:
    """All valuations of V_S and the free variables of S into the universe
    that solve S, in canonical order (lexicographic member indices over the
    sorted variable list).

    The budget caps the number of enumerated assignments (universe size to
    the power of free plus feedback variables); exceeding it is an error that
    reports the refused count.
    """
    _require_flat(spec)
    bound = list(spec.variables)
    frees = sorted(spec_free_vars(spec))
    domain_vars = tuple(sorted(set(bound) | set(frees)))

    # Feedback set: one variable per head-dependency cycle is enumerated.
    edges = _head_edges(spec)
    basis: set[str] = set()
    while True:
        cycle = _find_cycle(edges, basis)
        if cycle is None:
            break
        basis.add(min(cycle))
    constants = sorted(set(frees) | basis)
    iterated = [y for y in bound if y not in basis]

    count = len(universe) ** len(constants)
    if count > budget:
        raise BudgetExceededError(count, budget)

    resolved = _inline_heads(spec, iterated)
    depth, table = _separation(universe)

    rows: list[tuple[int, ...]] = []
    for combo in product(range(len(universe)), repeat=len(constants)):
        rho: dict[str, ProcessGraph] = {
            x: universe[i] for x, i in zip(constants, combo)
        }
        profile = {y: g_deadlock() for y in iterated}
        for d in range(1, depth + 1):
            profile = {
                y: minimize(truncate(denote(resolved[y], {**rho, **profile}), d))
                for y in iterated
            }
        forced: dict[str, int] = {}
        for y in iterated:
            idx = table.get(profile[y])
            if idx is None:
                break
            forced[y] = idx
        if len(forced) < len(iterated):
            continue
        rho.update({y: universe[i] for y, i in forced.items()})
        if all(denote(rhs, rho) == rho[y] for y, rhs in spec.items()):
            rows.append(tuple(universe.classify(rho[x]) for x in domain_vars))
    rows.sort()

    result = SolutionSet(spec, universe, domain_vars, tuple(rows))
    for valuation in result.valuations():
        if not is_compatible(valuation, spec):
            raise InternalInconsistencyError(
                "solver produced a valuation the direct compatibility check rejects"
            )
    return result


def unique_solution(spec: RecSpec, universe: Universe,
                    budget: int = DEFAULT_SOLVE_BUDGET) -> Optional[dict[str, ProcessGraph]]:
    """The one solution of a guarded closed specification, if it fits.

    None means the solution exists but lies outside the universe (its
    minimized graphs need more states).  Two or more solutions contradict
    guardedness and abort loudly.
    """
    report = is_guarded(spec)
    if not report:
        raise SemanticError("unique_solution requires a guarded specification: "
                            + report.describe())
    if spec_free_vars(spec):
        raise SemanticError("unique_solution requires a closed specification; "
                            "free variables make solutions relative to a binding")
    sols = compatible_valuations(spec, universe, budget)
    if len(sols) == 0:
        return None
    if len(sols) > 1:
        raise InternalInconsistencyError(
            f"guarded specification with {len(sols)} solutions in the universe"
        )
    return sols.valuations()[0]


@dataclass(frozen=True)
class HoldsResult:
    holds: bool
    variables: tuple[str, ...]
    witness: Optional[tuple[int, ...]]  # member indices over `variables`
    universe: Universe

    def __bool__(self) -> bool:
        return self.holds

    def witness_valuation(self) -> Optional[dict[str, ProcessGraph]]:
        if self.witness is None:
            return None
        return {x: self.universe[i] for x, i in zip(self.variables, self.witness)}

    def render(self) -> str:
        if self.holds:
            return "holds"
        pairs = " ".join(
            f"{x}={self.universe.name(i)}" for x, i in zip(self.variables, self.witness)
        )
        lines = [f"FAILS, witness {pairs}"]
        for i in sorted(set(self.witness)):
            lines.append("  " + self.universe.describe(i))
        return "\n".join(lines)


def _eq_domain(eq: Equation, spec: RecSpec) -> tuple[str, ...]:
    if not (is_recursion_free(eq.lhs) and is_recursion_free(eq.rhs)):
        raise SemanticError("equation sides must be recursion-free; flatten first")
    return tuple(sorted(
        set(spec.variables) | spec_free_vars(spec)
        | free_vars(eq.lhs) | free_vars(eq.rhs)
    ))


def holds(eq: Equation, spec: RecSpec, universe: Universe,
          budget: int = DEFAULT_SOLVE_BUDGET) -> HoldsResult:
    """True iff both sides denote bisimilar graphs under every compatible
    valuation, extra equation variables ranging over the whole universe.
    The witness of a failure is the first in canonical order."""
    domain = _eq_domain(eq, spec)
    sols = compatible_valuations(spec, universe, budget)
    extra = tuple(x for x in domain if x not in sols.variables)

    count = len(sols) * len(universe) ** len(extra)
    if count > budget:
        raise BudgetExceededError(count, budget)

    candidates: list[tuple[int, ...]] = []
    spots = {x: k for k, x in enumerate(domain)}
    for row in sols.rows:
        base = [0] * len(domain)
        for x, i in zip(sols.variables, row):
            base[spots[x]] = i
        for combo in product(range(len(universe)), repeat=len(extra)):
            cand = list(base)
            for x, i in zip(extra, combo):
                cand[spots[x]] = i
            candidates.append(tuple(cand))
    candidates.sort()

    for cand in candidates:
        rho = {x: universe[i] for x, i in zip(domain, cand)}
        if denote(eq.lhs, rho) != denote(eq.rhs, rho):
            return HoldsResult(False, domain, cand, universe)
    return HoldsResult(True, domain, None, universe)


def holds_conditional(eq: Equation, spec: RecSpec, universe: Universe,
                      budget: int = DEFAULT_SOLVE_BUDGET) -> HoldsResult:
    """The conditional-equation reading, evaluated directly: over ALL
    valuations, the conjunction of the defining equations implies the
    equation.  Must agree with ``holds``; kept separate as an oracle."""
    domain = _eq_domain(eq, spec)
    count = len(universe) ** len(domain)
    if count > budget:
        raise BudgetExceededError(count, budget)
    for combo in product(range(len(universe)), repeat=len(domain)):
        rho = {x: universe[i] for x, i in zip(domain, combo)}
        antecedent = all(denote(rhs, rho) == rho[y] for y, rhs in spec.items())
        if antecedent and denote(eq.lhs, rho) != denote(eq.rhs, rho):
            return HoldsResult(False, domain, combo, universe)
    return HoldsResult(True, domain, None, universe)


@dataclass(frozen=True)
class CongruenceResult:
    status: str  # premise-failed | conclusion-verified | conclusion-violated
    variables: tuple[str, ...] = ()
    premise_witness: Optional[tuple[int, ...]] = None
    detail: str = ""

    def render(self) -> str:
        out = self.status
        if self.detail:
            out += f" ({self.detail})"
        return out


def congruence_check(spec_a: RecSpec, spec_b: RecSpec, t: Term, universe: Universe,
                     budget: int = DEFAULT_SOLVE_BUDGET) -> CongruenceResult:
    """Check the recursion congruence property relative to the universe:
    if every right-hand side pair agrees under all valuations into U, then
    recursion through either specification is indistinguishable — by graph
    comparison for closed guarded specifications, by solution-set equality
    otherwise."""
    _require_flat(spec_a)
    _require_flat(spec_b)
    if spec_a.variables != spec_b.variables:
        raise SemanticError("specifications must bind the same variables")
    if not is_recursion_free(t):
        raise SemanticError("the context term must be recursion-free")
    domain = tuple(sorted(
        set(spec_a.variables) | spec_free_vars(spec_a) | spec_free_vars(spec_b)
    ))
    count = len(universe) ** len(domain)
    if count > budget:
        raise BudgetExceededError(count, budget)
    for combo in product(range(len(universe)), repeat=len(domain)):
        rho = {x: universe[i] for x, i in zip(domain, combo)}
        for y in spec_a.variables:
            if denote(spec_a[y], rho) != denote(spec_b[y], rho):
                return CongruenceResult(
                    "premise-failed", domain, combo,
                    f"sides for {y} differ under "
                    + " ".join(f"{x}={universe.name(i)}" for x, i in zip(domain, combo)),
                )

    closed = not (spec_free_vars(spec_a) or spec_free_vars(spec_b))
    if closed and is_guarded(spec_a) and is_guarded(spec_b):
        same = bool(bisimilar(graph_of(t, spec_a), graph_of(t, spec_b)))
        detail = "graphs bisimilar" if same else "graphs differ"
    else:
        sols_a = compatible_valuations(spec_a, universe, budget)
        sols_b = compatible_valuations(spec_b, universe, budget)
        same = sols_a.same_solutions(sols_b, budget)
        detail = "solution sets equal" if same else "solution sets differ"
    if same:
        return CongruenceResult("conclusion-verified", domain, None, detail)
    return CongruenceResult("conclusion-violated", domain, None, detail)

"""Abstract syntax for BPA-delta terms with recursion binders.

Terms are built from action constants, the inaction constant ``delta``,
alternative composition ``+``, sequential composition ``.``, variables, and
recursion binders ``<X | S>`` where ``S`` maps variables to terms.  All values
are immutable and hashable, so they can be used as dictionary keys and shared
freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Act:
    name: str


@dataclass(frozen=True)
class Deadlock:
    pass


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Seq:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, init=False)
class RecSpec:
    """A finite mapping from variables to terms.

    Bindings are stored sorted by variable name, so iteration order (and hence
    everything enumerated from a specification) is reproducible.
    """

    bindings: tuple[tuple[str, "Term"], ...]

    def __init__(self, bindings: Union[Mapping[str, "Term"], Iterable[tuple[str, "Term"]]]):
        pairs = list(bindings.items()) if isinstance(bindings, Mapping) else list(bindings)
        if not pairs:
            raise ValueError("recursive specification must bind at least one variable")
        names = [name for name, _ in pairs]
        if len(set(names)) != len(names):
            dup = sorted(n for n in set(names) if names.count(n) > 1)
            raise ValueError(f"duplicate binding for {', '.join(dup)}")
        object.__setattr__(self, "bindings", tuple(sorted(pairs, key=lambda kv: kv[0])))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.bindings)

    def items(self) -> tuple[tuple[str, "Term"], ...]:
        return self.bindings

    def __contains__(self, name: str) -> bool:
        return any(name == n for n, _ in self.bindings)

    def __getitem__(self, name: str) -> "Term":
        for n, t in self.bindings:
            if n == name:
                return t
        raise KeyError(name)

    def __iter__(self) -> Iterator[str]:
        return iter(self.variables)

    def __len__(self) -> int:
        return len(self.bindings)


@dataclass(frozen=True)
class Rec:
    var: str
    spec: RecSpec

    def __post_init__(self):
        if self.var not in self.spec:
            raise ValueError(f"recursion binder {self.var!r} is not defined by its specification")


Term = Union[Var, Act, Deadlock, Sum, Seq, Rec]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term


def free_vars(t: Term) -> frozenset[str]:
    """Variables with at least one free occurrence in ``t``.

    An occurrence of ``y`` inside ``<X | S>`` is bound whenever ``y`` is one of
    the variables ``S`` defines; this covers occurrences in every right-hand
    side, not just the one named by the binder.
    """
    match t:
        case Var(x):
            return frozenset({x})
        case Act() | Deadlock():
            return frozenset()
        case Sum(l, r) | Seq(l, r):
            return free_vars(l) | free_vars(r)
        case Rec(_, spec):
            inner: frozenset[str] = frozenset()
            for _, rhs in spec.items():
                inner |= free_vars(rhs)
            return inner - frozenset(spec.variables)
    raise TypeError(f"not a term: {t!r}")


def action_names(t: Term) -> frozenset[str]:
    """All action constants occurring in ``t``."""
    match t:
        case Act(a):
            return frozenset({a})
        case Var() | Deadlock():
            return frozenset()
        case Sum(l, r) | Seq(l, r):
            return action_names(l) | action_names(r)
        case Rec(_, spec):
            out: frozenset[str] = frozenset()
            for _, rhs in spec.items():
                out |= action_names(rhs)
            return out
    raise TypeError(f"not a term: {t!r}")


def all_var_names(t: Term) -> frozenset[str]:
    """Every variable name occurring in ``t``, free or bound."""
    match t:
        case Var(x):
            return frozenset({x})
        case Act() | Deadlock():
            return frozenset()
        case Sum(l, r) | Seq(l, r):
            return all_var_names(l) | all_var_names(r)
        case Rec(_, spec):
            out = frozenset(spec.variables)
            for _, rhs in spec.items():
                out |= all_var_names(rhs)
            return out
    raise TypeError(f"not a term: {t!r}")


def is_recursion_free(t: Term) -> bool:
    match t:
        case Rec():
            return False
        case Sum(l, r) | Seq(l, r):
            return is_recursion_free(l) and is_recursion_free(r)
        case _:
            return True


def fresh_name(base: str, used: Iterable[str]) -> str:
    """Smallest primed variant of ``base`` not in ``used`` (base itself first)."""
    taken = set(used)
    candidate = base
    while candidate in taken:
        candidate += "'"
    return candidate


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of free occurrences.

    Bound variables of a ``<X | S>`` subterm are renamed to primed variants
    whenever a variable free in the range of ``mapping`` would otherwise be
    captured.  Renaming is deterministic: clashing variables are processed in
    sorted order and each takes the smallest unused primed variant.
    """
    mapping = {x: u for x, u in mapping.items() if u != Var(x)}
    if not mapping:
        return t
    match t:
        case Var(x):
            return mapping.get(x, t)
        case Act() | Deadlock():
            return t
        case Sum(l, r):
            return Sum(substitute(l, mapping), substitute(r, mapping))
        case Seq(l, r):
            return Seq(substitute(l, mapping), substitute(r, mapping))
        case Rec(binder, spec):
            bound = set(spec.variables)
            relevant = frozenset()
            for _, rhs in spec.items():
                relevant |= free_vars(rhs)
            live = {x: u for x, u in mapping.items() if x not in bound and x in relevant}
            if not live:
                return t
            incoming: set[str] = set()
            for u in live.values():
                incoming |= free_vars(u)
            clash = sorted(incoming & bound)
            renaming: dict[str, Term] = {}
            if clash:
                used = bound | incoming | set(live)
                for _, rhs in spec.items():
                    used |= free_vars(rhs)
                new_names = {}
                for x in clash:
                    fresh = fresh_name(x, used)
                    used.add(fresh)
                    new_names[x] = fresh
                renaming = {x: Var(n) for x, n in new_names.items()}
                rename = lambda name: new_names.get(name, name)
            else:
                rename = lambda name: name
            new_bindings = []
            for name, rhs in spec.items():
                body = substitute(rhs, renaming) if renaming else rhs
                new_bindings.append((rename(name), substitute(body, live)))
            return Rec(rename(binder), RecSpec(new_bindings))
    raise TypeError(f"not a term: {t!r}")


DUMMY_VAR_BASE = "_fresh"


def flatten(t: Term, reserved: Iterable[str] = ()) -> tuple[Term, RecSpec]:
    """Convert ``t`` to the form ``<head | spec>`` with both recursion-free.

    Every binder's variables are renamed apart (smallest primed variants, in
    encounter order) so the resulting specification binds pairwise-distinct
    variables; names in ``reserved`` are never chosen.  A recursion-free input
    comes back unchanged, paired with the one-entry dummy specification
    ``{_fresh = delta}`` so callers always receive the same shape.
    """
    used = set(reserved) | set(free_vars(t)) | set(action_names(t))
    bindings: dict[str, Term] = {}

    def walk(term: Term, renaming: dict[str, str]) -> Term:
        match term:
            case Var(x):
                return Var(renaming.get(x, x))
            case Act() | Deadlock():
                return term
            case Sum(l, r):
                return Sum(walk(l, renaming), walk(r, renaming))
            case Seq(l, r):
                return Seq(walk(l, renaming), walk(r, renaming))
            case Rec(binder, spec):
                local = dict(renaming)
                for name in spec.variables:
                    fresh = fresh_name(name, used)
                    used.add(fresh)
                    local[name] = fresh
                for name, rhs in spec.items():
                    bindings[local[name]] = walk(rhs, local)
                return Var(local[binder])
        raise TypeError(f"not a term: {term!r}")

    head = walk(t, {})
    if not bindings:
        dummy = fresh_name(DUMMY_VAR_BASE, used)
        bindings[dummy] = Deadlock()
    return head, RecSpec(bindings)


_PREC_SUM = 1
_PREC_SEQ = 2
_PREC_ATOM = 3


def format_term(t: Term) -> str:
    """Render ``t`` in the document grammar; ``parse`` of the result gives ``t`` back."""

    def go(term: Term, context: int) -> str:
        match term:
            case Var(x):
                return x
            case Act(a):
                return a
            case Deadlock():
                return "delta"
            case Sum(l, r):
                text = f"{go(l, _PREC_SUM)} + {go(r, _PREC_SUM + 1)}"
                return f"({text})" if context > _PREC_SUM else text
            case Seq(l, r):
                text = f"{go(l, _PREC_SEQ)}.{go(r, _PREC_SEQ + 1)}"
                return f"({text})" if context > _PREC_SEQ else text
            case Rec(binder, spec):
                body = ", ".join(f"{name} = {go(rhs, _PREC_SUM)}" for name, rhs in spec.items())
                return f"<{binder} | {body}>"
        raise TypeError(f"not a term: {term!r}")

    return go(t, _PREC_SUM)


def format_spec(spec: RecSpec) -> str:
    return "{" + ", ".join(f"{name} = {format_term(rhs)}" for name, rhs in spec.items()) + "}"

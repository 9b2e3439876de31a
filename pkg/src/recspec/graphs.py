"""Finite process graphs modulo strong bisimilarity.

A process graph is a rooted labelled transition system with one distinguished
termination state, written √ and represented by the sentinel ``TICK``.  The
ordinary states are ``0 .. num_states-1`` with ``0`` initial; √ is global and
carries no outgoing transitions.  Every ordinary state is reachable from the
initial state, and the initial state is never √ (there is no empty process).

``minimize`` returns a canonical representative: two graphs are strongly
bisimilar if and only if their minimized forms are equal as values.  This
rests on the partition refinement below assigning block ranks from sorted
signatures only, never from incidental state numbering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceededError

TICK = -1

Transition = tuple[int, str, int]


@dataclass(frozen=True)
class ProcessGraph:
    num_states: int
    transitions: frozenset[Transition]

    def __post_init__(self):
        if self.num_states < 1:
            raise ValueError("a process graph has at least its initial state")
        if not isinstance(self.transitions, frozenset):
            object.__setattr__(self, "transitions", frozenset(self.transitions))
        for s, a, t in self.transitions:
            if not (0 <= s < self.num_states):
                raise ValueError(f"transition source {s} out of range")
            if t != TICK and not (0 <= t < self.num_states):
                raise ValueError(f"transition target {t} out of range")
            if not a:
                raise ValueError("empty action label")
        succ: dict[int, list[int]] = {}
        for s, _, t in self.transitions:
            if t != TICK:
                succ.setdefault(s, []).append(t)
        reached = {0}
        frontier = [0]
        while frontier:
            s = frontier.pop()
            for t in succ.get(s, ()):
                if t not in reached:
                    reached.add(t)
                    frontier.append(t)
        if len(reached) != self.num_states:
            missing = sorted(set(range(self.num_states)) - reached)
            raise ValueError(f"states not reachable from initial: {missing}")

    @property
    def initial(self) -> int:
        return 0

    @cached_property
    def out_map(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """Per-state outgoing (action, target) pairs, sorted."""
        outs: list[list[tuple[str, int]]] = [[] for _ in range(self.num_states)]
        for s, a, t in self.transitions:
            outs[s].append((a, t))
        return tuple(tuple(sorted(o)) for o in outs)

    @cached_property
    def alphabet(self) -> frozenset[str]:
        return frozenset(a for _, a, _ in self.transitions)

    @property
    def has_tick(self) -> bool:
        return any(t == TICK for _, _, t in self.transitions)

    def sorted_transitions(self) -> tuple[Transition, ...]:
        return tuple(sorted(self.transitions))


def build_graph(num_states: int, transitions: Iterable[Transition], initial: int = 0) -> ProcessGraph:
    """Restrict to the part reachable from ``initial`` and renumber from 0.

    States are renumbered in breadth-first encounter order with outgoing
    edges visited sorted by (action, target), so the result is a
    deterministic function of the input.
    """
    outs: dict[int, list[tuple[str, int]]] = {}
    for s, a, t in transitions:
        outs.setdefault(s, []).append((a, t))
    renumber = {initial: 0}
    queue = deque([initial])
    while queue:
        s = queue.popleft()
        for a, t in sorted(outs.get(s, ())):
            if t != TICK and t not in renumber:
                renumber[t] = len(renumber)
                queue.append(t)
    kept = frozenset(
        (renumber[s], a, TICK if t == TICK else renumber[t])
        for s, a, t in transitions
        if s in renumber
    )
    return ProcessGraph(len(renumber), kept)


# ---------------------------------------------------------------------------
# Operator interpretations


def g_deadlock() -> ProcessGraph:
    return ProcessGraph(1, frozenset())


def g_action(a: str) -> ProcessGraph:
    return ProcessGraph(1, frozenset({(0, a, TICK)}))


def g_sum(g: ProcessGraph, h: ProcessGraph) -> ProcessGraph:
    """Root unfolding: a new initial state takes over both roots' transitions."""
    gs = 1  # g's states shift by 1, h's by 1 + g.num_states
    hs = 1 + g.num_states
    trans: set[Transition] = set()
    for s, a, t in g.transitions:
        trans.add((s + gs, a, t if t == TICK else t + gs))
        if s == 0:
            trans.add((0, a, t if t == TICK else t + gs))
    for s, a, t in h.transitions:
        trans.add((s + hs, a, t if t == TICK else t + hs))
        if s == 0:
            trans.add((0, a, t if t == TICK else t + hs))
    return build_graph(1 + g.num_states + h.num_states, trans)


def g_seq(g: ProcessGraph, h: ProcessGraph) -> ProcessGraph:
    """Redirect g's transitions into √ to h's initial state."""
    hs = g.num_states
    trans: set[Transition] = set()
    for s, a, t in g.transitions:
        trans.add((s, a, hs if t == TICK else t))
    for s, a, t in h.transitions:
        trans.add((s + hs, a, t if t == TICK else t + hs))
    return build_graph(g.num_states + h.num_states, trans)


# ---------------------------------------------------------------------------
# Partition refinement

def _refine(num: int, outs: Sequence[Sequence[tuple[str, int]]], init: Sequence[int],
            history: Optional[list[list[int]]] = None) -> list[int]:
    """Coarsest refinement of ``init`` stable under the transition signatures.

    ``outs[i]`` lists (action, state index) moves of state ``i``.  Block ranks
    are assigned by sorting (previous rank, signature) keys, so they depend
    only on the behaviour of states, not on their numbering; bisimilar states
    of any two graphs refined separately end up with equal ranks at every
    round.
    """
    ranks = list(init)
    if history is not None:
        history.append(list(ranks))
    while True:
        keys = []
        for i in range(num):
            sig = tuple(sorted({(a, ranks[j]) for a, j in outs[i]}))
            keys.append((ranks[i], sig))
        order = {key: r for r, key in enumerate(sorted(set(keys)))}
        new = [order[k] for k in keys]
        if new == ranks:
            return ranks
        ranks = new
        if history is not None:
            history.append(list(ranks))


def _joint(g: ProcessGraph, h: ProcessGraph):
    """Index the disjoint union of g and h with one shared √ node at the end."""
    n, m = g.num_states, h.num_states
    tick = n + m
    outs: list[list[tuple[str, int]]] = [[] for _ in range(tick + 1)]
    for s, a, t in g.transitions:
        outs[s].append((a, tick if t == TICK else t))
    for s, a, t in h.transitions:
        outs[n + s].append((a, tick if t == TICK else n + t))
    init = [0] * (n + m) + [1]
    return outs, init, tick


class BisimResult:
    """Truthy verdict; on inequivalence ``formula`` distinguishes the roots.

    The formula is in Hennessy-Milner style: ``tick`` holds exactly at √,
    ``<a>p`` demands an a-move into a state satisfying ``p``, plus ``and``,
    ``not`` and ``true``.  It holds at g's root and fails at h's root.
    """

    def __init__(self, equivalent: bool, g: ProcessGraph, h: ProcessGraph):
        self.equivalent = equivalent
        self._g = g
        self._h = h
        self._formula: Optional[str] = None

    def __bool__(self) -> bool:
        return self.equivalent

    def __repr__(self) -> str:
        return f"BisimResult({self.equivalent})"

    @property
    def formula(self) -> Optional[str]:
        if self.equivalent:
            return None
        if self._formula is None:
            self._formula = _distinguishing_formula(self._g, self._h)
        return self._formula


def bisimilar(g: ProcessGraph, h: ProcessGraph) -> BisimResult:
    """Strong bisimilarity of the initial states, √ identified across both."""
    outs, init, tick = _joint(g, h)
    ranks = _refine(tick + 1, outs, init)
    return BisimResult(ranks[g.initial] == ranks[g.num_states + h.initial], g, h)


def _distinguishing_formula(g: ProcessGraph, h: ProcessGraph) -> str:
    outs, init, tick = _joint(g, h)
    history: list[list[int]] = []
    _refine(tick + 1, outs, init, history)

    def first_diff(s: int, t: int) -> int:
        for r, ranks in enumerate(history):
            if ranks[s] != ranks[t]:
                return r
        raise AssertionError("states are equivalent; no distinguishing round")

    def conj(parts: list[str]) -> str:
        parts = sorted(set(parts))
        return parts[0] if len(parts) == 1 else "(" + " and ".join(parts) + ")"

    def build(s: int, t: int, r: int) -> str:
        # holds at s, fails at t; ranks differ first at round r
        if r == 0:
            return "tick" if s == tick else "not tick"
        prev = history[r - 1]
        sig_s = {(a, prev[j]) for a, j in outs[s]}
        sig_t = {(a, prev[j]) for a, j in outs[t]}
        gap = sorted(sig_s - sig_t)
        if not gap:
            return f"not {build(t, s, r)}"
        a, blk = gap[0]
        s2 = min(j for b, j in outs[s] if b == a and prev[j] == blk)
        parts = []
        for b, t2 in sorted(set(outs[t])):
            if b == a:
                parts.append(build(s2, t2, first_diff(s2, t2)))
        return f"<{a}>true" if not parts else f"<{a}>{conj(parts)}"

    s0, t0 = g.initial, g.num_states + h.initial
    return build(s0, t0, first_diff(s0, t0))


def minimize(g: ProcessGraph) -> ProcessGraph:
    """Quotient by the coarsest strong bisimulation, renumbered canonically.

    Canonical means: bisimilar inputs give equal outputs.  Block ranks come
    from signature sorting and the quotient is renumbered breadth-first with
    edges ordered by (action, target rank); neither step sees the input
    numbering, so any two bisimilar graphs collapse to the same value.
    """
    n = g.num_states
    tick = n
    outs: list[list[tuple[str, int]]] = [[] for _ in range(n + 1)]
    for s, a, t in g.transitions:
        outs[s].append((a, tick if t == TICK else t))
    ranks = _refine(n + 1, outs, [0] * n + [1])
    tick_rank = ranks[tick]
    qout: dict[int, set[tuple[str, int]]] = {}
    for s, a, t in g.transitions:
        qout.setdefault(ranks[s], set()).add((a, TICK if t == TICK else ranks[t]))
    renumber = {ranks[g.initial]: 0}
    queue = deque([ranks[g.initial]])
    while queue:
        b = queue.popleft()
        for a, tb in sorted(qout.get(b, ())):
            if tb != TICK and tb not in renumber:
                renumber[tb] = len(renumber)
                queue.append(tb)
    trans = frozenset(
        (renumber[b], a, TICK if tb == TICK else renumber[tb])
        for b, moves in qout.items()
        for a, tb in moves
    )
    assert tick_rank not in renumber
    return ProcessGraph(len(renumber), trans)


def truncate(g: ProcessGraph, k: int) -> ProcessGraph:
    """Tree unfolding cut at depth ``k``; behaviour past the cut becomes δ."""
    if k < 0:
        raise ValueError("truncation depth must be >= 0")
    index: dict[tuple[int, int], int] = {(g.initial, k): 0}
    queue = deque([(g.initial, k)])
    trans: set[Transition] = set()
    while queue:
        node = queue.popleft()
        s, d = node
        if d == 0:
            continue  # out of budget: a deadlock leaf
        for a, t in g.out_map[s]:
            if t == TICK:
                trans.add((index[node], a, TICK))
                continue
            child = (t, d - 1)
            if child not in index:
                index[child] = len(index)
                queue.append(child)
            trans.add((index[node], a, index[child]))
    return minimize(ProcessGraph(len(index), frozenset(trans)))


def kleene_star(a: str, g: ProcessGraph) -> ProcessGraph:
    """Smallest graph satisfying star ↔ a·star + g.

    Fresh initial state i with i –a→ i, a copy of each root transition of g
    re-sourced at i, and the rest of g; g's own root drops out when nothing
    loops back to it.
    """
    trans: set[Transition] = {(0, a, 0)}
    for s, b, t in g.transitions:
        trans.add((s + 1, b, t if t == TICK else t + 1))
        if s == 0:
            trans.add((0, b, t if t == TICK else t + 1))
    return build_graph(1 + g.num_states, trans)


# ---------------------------------------------------------------------------
# Finite universes

DEFAULT_BUDGET = 1 << 16


class Universe:
    """All process graphs with at most ``max_states`` non-√ states over a
    finite alphabet, one minimized representative per bisimilarity class, in
    a reproducible order: by state count, then by sorted transition list."""

    def __init__(self, alphabet: Sequence[str], max_states: int, members: Sequence[ProcessGraph]):
        self.alphabet = tuple(sorted(alphabet))
        self.max_states = max_states
        self.members = tuple(members)
        self._index = {m: i for i, m in enumerate(self.members)}

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> ProcessGraph:
        return self.members[i]

    def classify(self, g: ProcessGraph) -> Optional[int]:
        """Index of the member bisimilar to ``g``, or None if out of range.

        Exact lookup of minimize(g) suffices because minimize is canonical.
        """
        return self._index.get(minimize(g))

    def name(self, i: int) -> str:
        return f"g{i}"

    def describe(self, i: int) -> str:
        member = self.members[i]
        if not member.transitions:
            return f"{self.name(i)}: 1 state, no transitions"
        lines = ", ".join(
            f"{s} {a} {'TICK' if t == TICK else t}" for s, a, t in member.sorted_transitions()
        )
        return f"{self.name(i)}: {lines}"

    def legend(self) -> list[str]:
        return [self.describe(i) for i in range(len(self.members))]


def enumerate_universe(alphabet: Iterable[str], max_states: int,
                       budget: int = DEFAULT_BUDGET) -> Universe:
    """Enumerate all transition relations on ``max_states`` states, prune,
    minimize, and deduplicate.  Graphs with fewer states arise from relations
    that leave some states unreachable, so one pass over the largest size
    covers every smaller one."""
    letters = tuple(sorted(set(alphabet)))
    if not letters:
        raise ValueError("alphabet must be nonempty")
    if max_states < 1:
        raise ValueError("max_states must be >= 1")
    edges = [
        (s, a, t)
        for s in range(max_states)
        for a in letters
        for t in [TICK, *range(max_states)]
    ]
    raw_count = 1 << len(edges)
    if raw_count > budget:
        raise BudgetExceededError(raw_count, budget)
    seen_raw: set[ProcessGraph] = set()
    found: dict[ProcessGraph, None] = {}
    for mask in range(raw_count):
        chosen = [e for bit, e in enumerate(edges) if mask >> bit & 1]
        pruned = build_graph(max_states, chosen)
        if pruned in seen_raw:
            continue
        seen_raw.add(pruned)
        found.setdefault(minimize(pruned), None)
    members = sorted(found, key=lambda m: (m.num_states, m.sorted_transitions()))
    return Universe(letters, max_states, members)


# ---------------------------------------------------------------------------
# Text formats


def canonical_text(g: ProcessGraph) -> str:
    """One line per transition, "src action dst", sorted; state 0 is initial
    and √ prints as TICK.  The empty string denotes the deadlock graph."""
    return "\n".join(
        f"{s} {a} {'TICK' if t == TICK else t}" for s, a, t in g.sorted_transitions()
    )


def parse_graph_text(text: str) -> ProcessGraph:
    trans: set[Transition] = set()
    top = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'src action dst', got {line!r}")
        src, action, dst = parts
        try:
            s = int(src)
            t = TICK if dst == "TICK" else int(dst)
        except ValueError:
            raise ValueError(f"line {lineno}: bad state in {line!r}") from None
        if s < 0 or (t < 0 and t != TICK):
            raise ValueError(f"line {lineno}: negative state in {line!r}")
        trans.add((s, action, t))
        top = max(top, s, t)
    return ProcessGraph(top + 1, frozenset(trans))


def to_dot(g: ProcessGraph, name: str = "g") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for s in range(g.num_states):
        shape = "doublecircle" if s == g.initial else "circle"
        lines.append(f'  s{s} [shape={shape} label="{s}"];')
    if g.has_tick:
        lines.append('  tick [shape=circle label="√"];')
    for s, a, t in g.sorted_transitions():
        target = "tick" if t == TICK else f"s{t}"
        lines.append(f'  s{s} -> {target} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines)

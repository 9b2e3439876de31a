import itertools

import pytest

from naive import naive_bisimilar
from recspec.errors import BudgetExceededError
from recspec.graphs import (
    TICK,
    build_graph,
    canonical_text,
    enumerate_universe,
    g_action,
    g_deadlock,
    minimize,
)


def test_one_state_one_action_universe(u_a1):
    # delta, a, a-iteration with exit, pure a-cycle; nothing else fits in
    # one state modulo bisimilarity.
    assert len(u_a1) == 4
    texts = [canonical_text(g) for g in u_a1]
    assert texts == ["", "0 a TICK", "0 a TICK\n0 a 0", "0 a 0"]


def test_universe_sizes(u_ab1, u_a2, u_ab2):
    assert len(u_ab1) == 16
    assert len(u_a2) == 24
    assert len(u_ab2) == 2752


def test_members_are_canonical_and_distinct(u_a2):
    seen = set()
    for g in u_a2:
        assert minimize(g) == g
        assert g not in seen
        seen.add(g)
    for g, h in itertools.combinations(u_a2.members, 2):
        assert not naive_bisimilar(g, h)


def test_every_small_graph_is_classified(u_a1):
    # All graphs on one proper state over {a}, built directly.
    pool = [(0, "a", 0), (0, "a", TICK)]
    for k in range(3):
        for combo in itertools.combinations(pool, k):
            g = build_graph(1, combo)
            assert u_a1.classify(g) is not None
    assert u_a1.classify(g_deadlock()) == 0
    assert u_a1.classify(g_action("a")) == 1
    assert u_a1.classify(g_action("b")) is None
    assert u_a1.classify(build_graph(2, [(0, "a", 1), (1, "a", 0)])) == 3


def test_alphabet_is_sorted_and_deduplicated():
    u = enumerate_universe(["b", "a", "b"], 1)
    assert u.alphabet == ("a", "b")
    assert len(u) == 16


def test_names_and_legend(u_a1):
    assert u_a1.name(3) == "g3"
    assert u_a1.describe(0) == "g0: 1 state, no transitions"
    assert u_a1.describe(3) == "g3: 0 a 0"
    assert len(u_a1.legend()) == 4


def test_budget_guard():
    with pytest.raises(BudgetExceededError) as e:
        enumerate_universe(["a"], 3, budget=100)
    assert e.value.raw_count == 2 ** 12
    assert e.value.budget == 100


def test_members_sorted_by_size_then_transitions(u_a2):
    sizes = [g.num_states for g in u_a2]
    assert sizes == sorted(sizes)

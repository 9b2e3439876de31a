import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recspec.denotational import approximate, denote, unfold
from recspec.errors import SemanticError
from recspec.graphs import (
    bisimilar,
    build_graph,
    canonical_text,
    g_action,
    minimize,
    truncate,
)
from recspec.operational import graph_of
from recspec.parser import parse_spec, parse_term
from recspec.syntax import Act, Deadlock, Seq, Sum, Var, substitute

A_LOOP = build_graph(1, [(0, "a", 0)])


def test_unfold_zero_cuts_to_deadlock():
    spec = parse_spec("{X = a . X}")
    assert unfold(Var("X"), spec, 0) == Deadlock()


def test_unfold_grows_prefixes():
    spec = parse_spec("{X = a . X}")
    assert unfold(Var("X"), spec, 1) == Seq(Act("a"), Deadlock())
    assert unfold(Var("X"), spec, 2) == Seq(Act("a"), Seq(Act("a"), Deadlock()))


def test_unfold_leaves_outside_variables_alone():
    spec = parse_spec("{X = a . X + Y}")
    t = unfold(Var("X"), spec, 1)
    assert t == Sum(Seq(Act("a"), Deadlock()), Var("Y"))


def test_unfold_rejects_binders():
    spec = parse_spec("{X = a . X}")
    with pytest.raises(SemanticError):
        unfold(parse_term("<X | X = a . X>"), spec, 1)
    with pytest.raises(ValueError):
        unfold(Var("X"), spec, -1)


def test_approximate_stalls_on_unguarded_identity():
    # X = X unfolds to itself, so every approximation is the bottom element.
    spec = parse_spec("{X = X}")
    for n in range(4):
        assert canonical_text(approximate(Var("X"), spec, n)) == ""


def test_approximate_converges_for_finite_behaviour():
    spec = parse_spec("{X = a . b}")
    assert bisimilar(approximate(Var("X"), spec, 1), graph_of(Var("X"), spec))


def test_approximate_agrees_with_operational_up_to_depth():
    spec = parse_spec("{X = a . Y, Y = b . X + a}")
    full = graph_of(Var("X"), spec)
    for n in range(6):
        lhs = truncate(approximate(Var("X"), spec, n), n)
        assert lhs == truncate(full, n)


def test_denote_basics(u_a1):
    assert denote(Deadlock()) == u_a1[0]
    assert denote(Act("a")) == u_a1[1]
    assert denote(parse_term("a + delta")) == u_a1[1]
    assert denote(Var("X"), {"X": A_LOOP}) == u_a1[3]


def test_denote_requires_bindings_and_flat_terms():
    with pytest.raises(SemanticError):
        denote(Var("X"))
    with pytest.raises(SemanticError):
        denote(parse_term("<X | X = a . X>"))


def test_denote_matches_operational_on_examples():
    for text in ["a", "delta", "a . b", "a + b", "(a + b) . a", "a . (b + a . b)"]:
        t = parse_term(text)
        assert denote(t) == graph_of(t)


closed_terms = st.recursive(
    st.sampled_from([Act("a"), Act("b"), Deadlock()]),
    lambda leaf: st.builds(Sum, leaf, leaf) | st.builds(Seq, leaf, leaf),
    max_leaves=12,
)


@settings(max_examples=150)
@given(closed_terms)
def test_denote_is_the_operational_graph(t):
    # Compositional evaluation and small-step exploration must agree.
    assert denote(t) == graph_of(t)


@given(closed_terms)
def test_denote_is_canonical(t):
    assert minimize(denote(t)) == denote(t)


@settings(max_examples=100)
@given(closed_terms, st.sampled_from(["X", "Y"]))
def test_denote_substitution_lemma(t, x):
    # denote(t[x := a.delta]) = denote(t) under X bound to that graph.
    value = parse_term("a . delta")
    lhs = denote(substitute(Sum(t, Var(x)), {x: value}))
    rhs = denote(Sum(t, Var(x)), {x: graph_of(value)})
    assert lhs == rhs


def test_approximation_chain_is_monotone_in_information(u_a1):
    # Every level-n approximation truncated at n is already the fixed point
    # truncated at n; this is the ladder the examples climb.
    spec = parse_spec("{X = a . X + b}")
    full = graph_of(Var("X"), spec)
    for n in range(5):
        assert truncate(approximate(Var("X"), spec, n), n) == truncate(full, n)
        assert bisimilar(approximate(Var("X"), spec, n + 1),
                         graph_of(unfold(Var("X"), spec, n + 1)))

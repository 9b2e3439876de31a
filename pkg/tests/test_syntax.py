import pytest
from hypothesis import given
from hypothesis import strategies as st

from recspec.syntax import (
    Act,
    Deadlock,
    Rec,
    RecSpec,
    Seq,
    Sum,
    Var,
    action_names,
    flatten,
    format_term,
    free_vars,
    fresh_name,
    is_recursion_free,
    substitute,
)

A, B = Act("a"), Act("b")
X, Y, Z = Var("X"), Var("Y"), Var("Z")


def rec(x, **bindings):
    return Rec(x, RecSpec(bindings))


def test_recspec_is_sorted_and_mapping_like():
    s = RecSpec({"Y": A, "X": B})
    assert s.variables == ("X", "Y")
    assert s["Y"] == A
    assert "X" in s and "Q" not in s
    assert len(s) == 2
    assert RecSpec([("X", B), ("Y", A)]) == s


def test_rec_binder_must_be_bound():
    with pytest.raises(ValueError):
        Rec("X", RecSpec({"Y": A}))


def test_free_vars():
    assert free_vars(Sum(X, Seq(A, Y))) == {"X", "Y"}
    assert free_vars(rec("X", X=Seq(A, X))) == frozenset()
    # The body may mention variables the spec does not bind.
    assert free_vars(rec("X", X=Seq(A, Y))) == {"Y"}
    assert free_vars(Deadlock()) == frozenset()


def test_action_names_and_recursion_free():
    t = Sum(Seq(A, B), rec("X", X=Seq(B, X)))
    assert action_names(t) == {"a", "b"}
    assert not is_recursion_free(t)
    assert is_recursion_free(Sum(A, Seq(B, X)))


def test_fresh_name_takes_first_unused_prime():
    assert fresh_name("X", {"X"}) == "X'"
    assert fresh_name("X", {"X", "X'"}) == "X''"
    assert fresh_name("X", {"Y"}) == "X"


def test_substitute_plain():
    assert substitute(Sum(X, Y), {"X": A}) == Sum(A, Y)
    assert substitute(Seq(X, X), {"X": B}) == Seq(B, B)


def test_substitute_skips_bound_occurrences():
    t = Sum(X, rec("X", X=Seq(A, X)))
    got = substitute(t, {"X": B})
    assert got == Sum(B, rec("X", X=Seq(A, X)))


def test_substitute_avoids_capture():
    # Pushing X under a binder for X must rename the binder first.
    t = rec("X", X=Sum(Seq(A, X), Y))
    got = substitute(t, {"Y": X})
    assert got == Rec("X'", RecSpec({"X'": Sum(Seq(A, Var("X'")), X)}))
    # Free X stays free.
    assert free_vars(got) == {"X"}


def test_substitute_swap_through_binder():
    t = rec("X", X=Sum(X, Y))
    swapped = substitute(substitute(t, {"Y": Z}), {"Z": X})
    assert free_vars(swapped) == {"X"}


def test_flatten_no_recursion_uses_dummy_binding():
    head, spec = flatten(Sum(A, B))
    assert head == Sum(A, B)
    assert len(spec) == 1
    assert list(spec.items())[0][1] == Deadlock()


def test_flatten_renames_nested_binders_apart():
    inner = rec("X", X=Seq(B, X))
    t = rec("X", X=Sum(Seq(A, X), inner))
    head, spec = flatten(t)
    assert isinstance(head, Var)
    assert len(spec) == 2
    names = set(spec.variables)
    assert len(names) == 2
    for _, rhs in spec.items():
        assert is_recursion_free(rhs)
        assert free_vars(rhs) <= names


def test_flatten_respects_reserved_names():
    t = rec("X", X=Seq(A, X))
    _, spec = flatten(t, reserved={"X"})
    assert "X" not in spec.variables


def test_format_term_precedence():
    assert format_term(Sum(Seq(A, B), X)) == "a.b + X"
    assert format_term(Seq(Sum(A, B), X)) == "(a + b).X"
    assert format_term(Seq(A, Seq(B, A))) == "a.(b.a)"
    assert format_term(Sum(A, Sum(B, X))) == "a + (b + X)"
    assert format_term(rec("X", X=Sum(Seq(A, X), Deadlock()))) == \
        "<X | X = a.X + delta>"


terms = st.recursive(
    st.sampled_from([A, B, Deadlock(), X, Y, Z]),
    lambda leaf: st.builds(Sum, leaf, leaf) | st.builds(Seq, leaf, leaf),
    max_leaves=10,
)


@given(terms)
def test_substitute_identity_is_noop(t):
    assert substitute(t, {}) == t
    assert substitute(t, {"X": X}) == t


@given(terms)
def test_substitute_closes_named_variable(t):
    got = substitute(t, {"X": A, "Y": A, "Z": A})
    assert free_vars(got) == frozenset()

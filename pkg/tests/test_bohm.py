from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from homatch.bohm import (
    BohmTree,
    InvalidOccurrence,
    depth,
    from_bohm,
    graft,
    leaf,
    occurrences,
    relevant_in,
    subtree_at,
    to_bohm,
    tree_depth,
    trivial_ground_term,
)
from homatch.core import (
    Atom,
    Lam,
    NotNormal,
    Signature,
    Var,
    alpha_equal,
    app,
    arrow,
    const,
    infer_type,
    is_ground,
    lams,
    local,
    nf,
)
from homatch.enumeration import EnumContext, enum_terms

T = Atom("T")
a = const("a", T)
b = const("b", T)
f = const("f", arrow(T, T))
SIG = Signature(frozenset({T}), (a, b, f), (), ())


def test_depth_examples():
    assert depth(Var(a)) == 0
    assert depth(app(Var(f), Var(a))) == 1
    o, s = local("o", T), local("s", arrow(T, T))
    church2 = lams((o, s), app(Var(s), app(Var(s), Var(o))))
    assert depth(church2) == 2
    assert tree_depth(leaf(a)) == 0


def test_to_bohm_requires_eta_long():
    with pytest.raises(NotNormal):
        to_bohm(Var(f))


def test_round_trip_small():
    t = nf(app(Var(f), app(Var(f), Var(b))))
    assert alpha_equal(from_bohm(to_bohm(t)), t)


@settings(deadline=None, max_examples=60)
@given(
    st.sampled_from(
        list(enum_terms(EnumContext(SIG, (), arrow(T, T), 2)))
        + list(enum_terms(EnumContext(SIG, (), T, 2)))
    )
)
def test_round_trip(t):
    bt = to_bohm(t)
    assert alpha_equal(nf(from_bohm(bt)), t)
    assert tree_depth(bt) == depth(t)


def test_occurrences_prefix_closed():
    t = nf(app(Var(f), app(Var(f), Var(a))))
    bt = to_bohm(t)
    occs = {occ for occ, _ in occurrences(bt)}
    assert occs == {(), (1,), (1, 1)}
    for occ in occs:
        assert occ[:-1] in occs or occ == ()


def test_subtree_and_graft():
    t = nf(app(Var(f), Var(a)))
    bt = to_bohm(t)
    assert subtree_at(bt, (1,)).head == a
    out = graft(bt, (1,), leaf(b))
    assert alpha_equal(from_bohm(out), app(Var(f), Var(b)))
    with pytest.raises(InvalidOccurrence):
        subtree_at(bt, (2,))


def test_relevance():
    y, z = local("y", T), local("z", T)
    fst = lams((y, z), Var(y))
    snd = lams((y, z), Var(z))
    assert relevant_in(fst, 1) and not relevant_in(fst, 2)
    assert relevant_in(snd, 2) and not relevant_in(snd, 1)


def test_trivial_ground_term():
    for ty in (T, arrow(T, T), arrow(arrow(T, T), T, T)):
        t = trivial_ground_term(ty, SIG)
        assert infer_type(t) == ty
        assert is_ground(t)
        assert depth(t) == 0
    # Least atomic constant by name is chosen.
    assert nf(trivial_ground_term(T, SIG)) == nf(Var(a))

from __future__ import annotations

import pytest

from homatch.core import (
    Atom,
    Signature,
    Var,
    arrow,
    canonical,
    const,
    infer_type,
    is_ground,
    ivar,
    nf,
)
from homatch.bohm import depth
from homatch.enumeration import EnumContext, count_terms, enum_substitutions, enum_terms

from naive_enum import naive_class_set

T = Atom("T")
a = const("a", T)
b = const("b", T)
f = const("f", arrow(T, T))
SIG = Signature(frozenset({T}), (a, b, f), (), ())


# Closed-form stream lengths over {a, b : T; f : T -> T}, frozen:
#   type T at budget d       -> 2d + 2
#   type T -> T at budget d  -> 3(d + 1)
@pytest.mark.parametrize(
    "ty,budget,expected",
    [
        (T, 0, 2),
        (T, 1, 4),
        (T, 3, 8),
        (arrow(T, T), 0, 3),
        (arrow(T, T), 2, 9),
        (arrow(T, arrow(T, T), T), 2, 21),
        (arrow(arrow(T, T, T), T), 0, 2),
    ],
)
def test_count_terms_frozen(ty, budget, expected):
    ctx = EnumContext(SIG, (), ty, budget)
    assert count_terms(ctx) == expected
    assert len(list(enum_terms(ctx))) == expected


@pytest.mark.parametrize("ty", [T, arrow(T, T), arrow(T, arrow(T, T), T)])
@pytest.mark.parametrize("budget", [0, 1, 2])
def test_matches_naive_oracle(ty, budget):
    ctx = EnumContext(SIG, (), ty, budget)
    got = list(enum_terms(ctx))
    classes = {canonical(t) for t in got}
    assert len(classes) == len(got), "duplicates up to alpha"
    assert classes == naive_class_set(SIG, ty, budget)
    assert count_terms(ctx) == len(classes)


def test_stream_properties():
    ctx = EnumContext(SIG, (), arrow(T, arrow(T, T), T), 2)
    depths = []
    for t in enum_terms(ctx):
        assert infer_type(t) == ctx.target
        assert is_ground(t)
        d = depth(t)
        assert d <= 2
        depths.append(d)
    assert depths == sorted(depths), "ascending depth"


def test_canonical_first_elements():
    # Locals in binding order come before constants by name.
    ctx = EnumContext(SIG, (), arrow(T, arrow(T, T), T), 1)
    first = next(iter(enum_terms(ctx)))
    assert first.body.body == Var(first.binder)


def test_enum_substitutions_product():
    x = ivar("x", T)
    y = ivar("y", arrow(T, T))
    subs = list(enum_substitutions((x, y), lambda s: 1, SIG))
    assert len(subs) == 4 * 6
    assert len({tuple(s.pairs) for s in subs}) == len(subs)
    empty = list(enum_substitutions((), lambda s: 1, SIG))
    assert len(empty) == 1 and len(empty[0]) == 0


def test_negative_budget_rejected():
    with pytest.raises(ValueError):
        EnumContext(SIG, (), T, -1)

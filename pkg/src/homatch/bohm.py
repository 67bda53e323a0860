"""Bohm trees of normal eta-long terms.

A node carries the list of variables bound at the top of the corresponding
term and its head symbol; the children are the trees of the head's arguments.
Occurrences are 1-based integer paths; depth counts edges, so a single node
has depth 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import (
    App,
    Atom,
    NotNormal,
    Signature,
    Symbol,
    Term,
    Type,
    Var,
    app,
    arg_types,
    arity,
    infer_type,
    lams,
    local,
    nf,
    spine,
    strip_lams,
    target,
)


class InvalidOccurrence(Exception):
    """An occurrence outside the tree domain."""


Occurrence = tuple[int, ...]


@dataclass(frozen=True)
class BohmTree:
    binders: tuple[Symbol, ...]
    head: Symbol
    children: tuple["BohmTree", ...]


def leaf(head: Symbol, binders: tuple[Symbol, ...] = ()) -> BohmTree:
    return BohmTree(binders, head, ())


def to_bohm(t: Term) -> BohmTree:
    """Tree of a beta-normal eta-long term; raises NotNormal otherwise."""
    binders, body = strip_lams(t)
    head, args = spine(body)
    if not isinstance(head, Var):
        raise NotNormal("term is not in beta-normal form")
    if len(args) != arity(head.sym.ty):
        raise NotNormal("term is not eta-long: head is not saturated")
    return BohmTree(binders, head.sym, tuple(to_bohm(a) for a in args))


def from_bohm(bt: BohmTree) -> Term:
    t = lams(bt.binders, app(Var(bt.head), *(from_bohm(c) for c in bt.children)))
    infer_type(t)  # raises IllTyped on malformed trees
    return t


def bohm_type(bt: BohmTree) -> Type:
    return infer_type(from_bohm(bt))


def tree_depth(bt: BohmTree) -> int:
    if not bt.children:
        return 0
    return 1 + max(tree_depth(c) for c in bt.children)


def depth(t: Term) -> int:
    """Depth of the Bohm tree of the normal eta-long form of t."""
    return tree_depth(to_bohm(nf(t)))


def occurrences(bt: BohmTree) -> Iterator[tuple[Occurrence, BohmTree]]:
    """All (occurrence, subtree) pairs, root first, in preorder."""
    yield (), bt
    for i, c in enumerate(bt.children, start=1):
        for occ, sub in occurrences(c):
            yield (i, *occ), sub


def subtree_at(bt: BohmTree, occ: Occurrence) -> BohmTree:
    for i in occ:
        if i < 1 or i > len(bt.children):
            raise InvalidOccurrence(f"occurrence {occ} outside tree domain")
        bt = bt.children[i - 1]
    return bt


def graft(bt: BohmTree, occ: Occurrence, replacement: BohmTree) -> BohmTree:
    if not occ:
        if bohm_type(replacement) != bohm_type(bt):
            raise NotNormal("graft changes the type of the tree")
        return replacement
    i = occ[0]
    if i < 1 or i > len(bt.children):
        raise InvalidOccurrence(f"occurrence {occ} outside tree domain")
    children = list(bt.children)
    children[i - 1] = graft(children[i - 1], occ[1:], replacement)
    return BohmTree(bt.binders, bt.head, tuple(children))


def relevant_in(c: Term, i: int) -> bool:
    """Whether the i-th (1-based) top binder of normal term c occurs in its body."""
    binders, body = strip_lams(nf(c))
    if not 1 <= i <= len(binders):
        raise IndexError(f"argument index {i} out of range for {len(binders)} binders")
    return _occurs_sym(body, binders[i - 1])


def _occurs_sym(t: Term, s: Symbol) -> bool:
    if isinstance(t, Var):
        return t.sym == s
    if isinstance(t, App):
        return _occurs_sym(t.fn, s) or _occurs_sym(t.arg, s)
    if t.binder == s:
        return False
    return _occurs_sym(t.body, s)


def trivial_ground_term(ty: Type, sig: Signature) -> Term:
    """A ground eta-long term of depth 0: binders over the least constant."""
    consts = [c for c in sig.constants_for(target(ty)) if isinstance(c.ty, Atom)]
    if not consts:
        raise ValueError(f"no constant of type {target(ty)}; complete the signature first")
    c = consts[0]
    binders = tuple(local(f"_z{i + 1}", w) for i, w in enumerate(arg_types(ty)))
    return nf(lams(binders, Var(c)))

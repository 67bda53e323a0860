"""Independent brute-force generator of eta-long normal ground terms.

Deliberately structured differently from the package enumerator (plain
recursion over Term constructors, no Bohm trees, no ordering) so the two
can cross-check each other.
"""

from __future__ import annotations

from itertools import count, product

from homatch.core import (
    Signature,
    Symbol,
    Term,
    Type,
    Var,
    app,
    arg_types,
    canonical,
    lams,
    local,
    target,
)

_ctr = count(1)


def naive_terms(sig: Signature, scope: tuple[Symbol, ...], ty: Type, budget: int) -> list[Term]:
    binders = tuple(local(f"_n{next(_ctr)}", w) for w in arg_types(ty))
    inner = scope + binders
    goal = target(ty)
    heads = [s for s in inner if target(s.ty) == goal]
    heads += [c for c in sig.constants if target(c.ty) == goal]
    out: list[Term] = []
    for head in heads:
        tys = arg_types(head.ty)
        if not tys:
            out.append(lams(binders, Var(head)))
        elif budget > 0:
            pools = [naive_terms(sig, inner, w, budget - 1) for w in tys]
            for combo in product(*pools):
                out.append(lams(binders, app(Var(head), *combo)))
    return out


def naive_class_set(sig: Signature, ty: Type, budget: int) -> set[Term]:
    """Alpha-equivalence classes, represented by canonical forms."""
    return {canonical(t) for t in naive_terms(sig, (), ty, budget)}

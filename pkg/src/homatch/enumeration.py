"""Exhaustive enumeration of ground eta-long normal terms by Bohm-tree depth.

Terms are produced in a fixed canonical order: ascending depth, then head
(in-scope locals in binding order before constants by name), then children
recursively left to right.  `count_terms` recomputes the stream length by an
independent recurrence over (type, scope, budget) for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count, product
from typing import Callable, Iterator

from .bohm import BohmTree, from_bohm
from .core import (
    Signature,
    Substitution,
    Symbol,
    Term,
    Type,
    arg_types,
    canonical,
    local,
    target,
)

# A sort key is (depth, head rank, child keys); comparing tuples of these
# realizes the canonical order.
_Key = tuple


@dataclass(frozen=True)
class EnumContext:
    signature: Signature
    available_locals: tuple[Symbol, ...]
    target: Type
    depth_budget: int

    def __post_init__(self) -> None:
        if self.depth_budget < 0:
            raise ValueError("depth budget must be non-negative")


def _generate(
    sig: Signature,
    scope: tuple[Symbol, ...],
    ty: Type,
    budget: int,
    fresh: Callable[[Type], Symbol],
) -> list[tuple[_Key, BohmTree]]:
    binders = tuple(fresh(w) for w in arg_types(ty))
    inner = scope + binders
    goal = target(ty)
    heads = [s for s in inner if target(s.ty) == goal]
    heads += list(sig.constants_for(goal))
    out: list[tuple[_Key, BohmTree]] = []
    for rank, head in enumerate(heads):
        child_tys = arg_types(head.ty)
        if not child_tys:
            out.append(((0, rank, ()), BohmTree(binders, head, ())))
        elif budget >= 1:
            alternatives = [_generate(sig, inner, w, budget - 1, fresh) for w in child_tys]
            for combo in product(*alternatives):
                d = 1 + max(k[0] for k, _ in combo)
                key = (d, rank, tuple(k for k, _ in combo))
                out.append((key, BohmTree(binders, head, tuple(bt for _, bt in combo))))
    return out


def enum_terms(ctx: EnumContext) -> Iterator[Term]:
    """All ground-over-instantiables eta-long normal terms of the target type
    built from signature constants and in-scope locals, depth <= budget, each
    exactly once up to alpha-equivalence, in canonical order."""
    ctr = count(1)

    def fresh(ty: Type) -> Symbol:
        return local(f"_y{next(ctr)}", ty)

    trees = _generate(ctx.signature, ctx.available_locals, ctx.target, ctx.depth_budget, fresh)
    trees.sort(key=lambda p: p[0])
    for _, bt in trees:
        yield canonical(from_bohm(bt))


def count_terms(ctx: EnumContext) -> int:
    """Stream length of enum_terms, via a recurrence over (type, scope, budget)."""
    memo: dict[tuple, int] = {}
    consts = ctx.signature.constants

    def cnt(ty: Type, scope_tys: tuple[Type, ...], budget: int) -> int:
        key = (ty, scope_tys, budget)
        if key in memo:
            return memo[key]
        inner = scope_tys + arg_types(ty)
        goal = target(ty)
        total = 0
        head_tys = [w for w in inner if target(w) == goal]
        head_tys += [c.ty for c in consts if target(c.ty) == goal]
        for hty in head_tys:
            child_tys = arg_types(hty)
            if not child_tys:
                total += 1
            elif budget >= 1:
                prod = 1
                for w in child_tys:
                    prod *= cnt(w, inner, budget - 1)
                    if prod == 0:
                        break
                total += prod
        memo[key] = total
        return total

    return cnt(ctx.target, tuple(s.ty for s in ctx.available_locals), ctx.depth_budget)


def enum_substitutions(
    variables: tuple[Symbol, ...] | list[Symbol],
    bound_fn: Callable[[Symbol], int],
    sig: Signature,
) -> Iterator[Substitution]:
    """Cartesian product of per-variable candidate streams, lexicographic in
    the per-variable canonical orders.  Empty variable list yields the empty
    substitution once."""
    variables = tuple(variables)
    pools = [
        list(enum_terms(EnumContext(sig, (), x.ty, bound_fn(x)))) for x in variables
    ]
    for combo in product(*pools):
        yield Substitution.of(dict(zip(variables, combo)))

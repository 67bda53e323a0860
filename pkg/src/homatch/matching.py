"""Third-order matching: problems, the depth bound, and the decision engines.

`solve_brute` enumerates every ground substitution within the proved
per-variable depth bound (n+1)(h+1)-1 and tests each.  `solve_huet_pruned`
runs an imitation/projection search over partial bindings, pruning any branch
whose accumulated rigid image depth already exceeds a variable's bound.
`enumerate_complete_set` runs the same search pruned instead at nodes whose
residual problem is unsolvable, yielding a complete set of solutions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import count
from typing import Iterator

from .bohm import BohmTree, depth, to_bohm, trivial_ground_term
from .core import (
    IllTyped,
    Kind,
    Signature,
    Substitution,
    Symbol,
    Term,
    Type,
    Var,
    app,
    arg_types,
    arrow,
    arity,
    alpha_equal,
    compose,
    free_instantiables,
    infer_type,
    is_ground,
    ivar,
    lams,
    nf,
    order,
    spine,
    strip_lams,
    substitute,
    target,
)


class ValidationError(Exception):
    """Base class for problem validation failures."""


class NotThirdOrder(ValidationError):
    def __init__(self, var: Symbol):
        self.var = var
        super().__init__(f"variable {var.name} has order {order(var.ty)} > 3")


class RhsNotGround(ValidationError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"right-hand side of equation {index + 1} is not ground")


class TypeMismatch(ValidationError):
    def __init__(self, index: int, lhs_ty, rhs_ty):
        self.index = index
        super().__init__(
            f"equation {index + 1}: left side has type {lhs_ty}, right side {rhs_ty}"
        )


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class MatchingProblem:
    signature: Signature
    equations: tuple[Equation, ...]
    validated: bool = False


@dataclass(frozen=True)
class InterpolationEquation:
    """An equation (x c1 ... cn) = b with x instantiable and all ci, b ground."""

    x: Symbol
    args: tuple[Term, ...]
    rhs: Term

    def lhs_term(self) -> Term:
        return app(Var(self.x), *self.args)


@dataclass
class SearchStats:
    candidates_tested: int = 0
    nodes_expanded: int = 0
    max_depth_used: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class SolveResult:
    solved: bool
    substitution: Substitution | None
    bounds: dict[Symbol, int]
    stats: SearchStats


def validate(p: MatchingProblem) -> MatchingProblem:
    """Type-check, normalize and eta-expand; enforce groundness and order."""
    sig = p.signature.complete()
    eqs = []
    for i, eq in enumerate(p.equations):
        lt, rt = infer_type(eq.lhs), infer_type(eq.rhs)
        if lt != rt:
            raise TypeMismatch(i, lt, rt)
        if not is_ground(eq.rhs):
            raise RhsNotGround(i)
        for x in sorted(free_instantiables(eq.lhs), key=lambda s: s.name):
            if order(x.ty) > 3:
                raise NotThirdOrder(x)
        eqs.append(Equation(nf(eq.lhs), nf(eq.rhs)))
    return MatchingProblem(sig, tuple(eqs), validated=True)


def problem_vars(p: MatchingProblem) -> tuple[Symbol, ...]:
    seen: set[Symbol] = set()
    for eq in p.equations:
        seen |= free_instantiables(eq.lhs)
    return tuple(sorted(seen, key=lambda s: s.name))


def depth_bound(n: int, h: int) -> int:
    return (n + 1) * (h + 1) - 1


def problem_h(p: MatchingProblem) -> int:
    return max((depth(eq.rhs) for eq in p.equations), default=0)


def verify_solution(p: MatchingProblem, sigma: Substitution) -> bool:
    return all(alpha_equal(nf(sigma.apply(eq.lhs)), nf(eq.rhs)) for eq in p.equations)


def _bounds(p: MatchingProblem, max_depth_override: int | None) -> dict[Symbol, int]:
    h = problem_h(p)
    return {
        x: (max_depth_override if max_depth_override is not None else depth_bound(arity(x.ty), h))
        for x in problem_vars(p)
    }


# ---------------------------------------------------------------------------
# Brute-force enumeration engine


def solve_brute(p: MatchingProblem, max_depth_override: int | None = None) -> SolveResult:
    from .enumeration import enum_substitutions

    if not p.validated:
        p = validate(p)
    start = time.perf_counter()
    bounds = _bounds(p, max_depth_override)
    stats = SearchStats(max_depth_used=max(bounds.values(), default=0))
    for sigma in enum_substitutions(problem_vars(p), bounds.__getitem__, p.signature):
        stats.candidates_tested += 1
        if verify_solution(p, sigma):
            stats.elapsed = time.perf_counter() - start
            return SolveResult(True, sigma, bounds, stats)
    stats.elapsed = time.perf_counter() - start
    return SolveResult(False, None, bounds, stats)


# ---------------------------------------------------------------------------
# Equation simplification (shared by both search engines)


_CLASH = object()


def _strip_shared(lhs: Term, rhs: Term) -> tuple[Term, Term]:
    """Strip the common abstraction, turning rhs binders into shared locals."""
    lb, lbody = strip_lams(lhs)
    rb, rbody = strip_lams(rhs)
    # Both sides are eta-long terms of the same type, so binder telescopes
    # have equal length and types.
    for bl, br in zip(lb, rb):
        lbody = substitute(lbody, bl, Var(br))
    return lbody, rbody


def _simplify(pairs: list[tuple[Term, Term]]):
    """Decompose rigid-rigid pairs; return flex pairs or _CLASH.

    Each returned flex pair is (x, args, rhs) with both sides atomic.
    """
    work = list(pairs)
    flex: list[tuple[Symbol, tuple[Term, ...], Term]] = []
    while work:
        lhs, rhs = work.pop(0)
        lbody, rbody = _strip_shared(lhs, rhs)
        lhead, largs = spine(lbody)
        rhead, rargs = spine(rbody)
        assert isinstance(lhead, Var) and isinstance(rhead, Var)
        if lhead.sym.kind is Kind.INSTANTIABLE:
            flex.append((lhead.sym, largs, rbody))
            continue
        if lhead.sym != rhead.sym or len(largs) != len(rargs):
            return _CLASH
        work.extend(zip(largs, rargs))
    return flex


def decompose(p: MatchingProblem) -> list[Equation] | None:
    """Strip common abstractions and decompose rigid-rigid equations.

    Returns the residual flex equations, or None on a rigid head clash
    (meaning the problem is unsolvable).
    """
    if not p.validated:
        p = validate(p)
    out = _simplify([(eq.lhs, eq.rhs) for eq in p.equations])
    if out is _CLASH:
        return None
    return [Equation(nf(app(Var(x), *args)), nf(rhs)) for x, args, rhs in out]


# ---------------------------------------------------------------------------
# Huet-style search


def flex_rigid_bindings(
    x: Symbol, rhs_head: Symbol, sig: Signature, fresh: count | None = None
) -> list[Substitution]:
    """Elementary bindings for a flex-rigid pair: one imitation of a constant
    head and one projection per binder of x targeting the right atom, each
    introducing fresh instantiable variables for the new argument slots."""
    if fresh is None:
        fresh = count(1)
    tys = arg_types(x.ty)
    goal = target(x.ty)
    binders = tuple(
        Symbol(f"_y{i + 1}", Kind.LOCAL, w) for i, w in enumerate(tys)
    )
    heads: list[Symbol] = []
    if rhs_head.kind is Kind.CONSTANT and target(rhs_head.ty) == goal:
        heads.append(rhs_head)
    for i, w in enumerate(tys):
        if target(w) == goal:
            heads.append(binders[i])
    out = []
    for head in heads:
        args = []
        for w in arg_types(head.ty):
            hvar = ivar(f"_h{next(fresh)}", app_type(tys, w))
            args.append(app(Var(hvar), *(Var(b) for b in binders)))
        binding = nf(lams(binders, app(Var(head), *args)))
        out.append(Substitution.of({x: binding}))
    return out


def app_type(arg_tys: tuple[Type, ...], result: Type) -> Type:
    return arrow(*arg_tys, result) if arg_tys else result


def _flex_cut_depth(t: Term) -> int:
    """Depth of the image with instantiable-headed nodes truncated to leaves.

    This never exceeds the depth of any term obtainable by instantiating the
    remaining variables, and never decreases along a search branch, so it is
    a safe pruning measure.
    """

    def go(bt: BohmTree) -> int:
        if bt.head.kind is Kind.INSTANTIABLE or not bt.children:
            return 0
        return 1 + max(go(c) for c in bt.children)

    return go(to_bohm(nf(t)))


def _huet_stream(
    p: MatchingProblem,
    bounds: dict[Symbol, int] | None,
    prune_unsolvable: bool,
    stats: SearchStats,
) -> Iterator[Substitution]:
    """DFS over Huet's search tree, yielding a substitution at each success
    node (images may retain unconstrained fresh variables)."""
    sig = p.signature
    orig = problem_vars(p)
    fresh = count(1)
    images = {x: nf(Var(x)) for x in orig}
    pairs = [(eq.lhs, eq.rhs) for eq in p.equations]

    def rec(pairs, images) -> Iterator[Substitution]:
        stats.nodes_expanded += 1
        flex = _simplify(pairs)
        if flex is _CLASH:
            return
        if not flex:
            yield Substitution.of({x: _as_image(images[x]) for x in orig})
            return
        x, args, rhs = flex[0]
        rhead, _ = spine(strip_lams(rhs)[1])
        assert isinstance(rhead, Var)
        flex_pairs = [(app(Var(y), *a), r) for y, a, r in flex]
        for theta in flex_rigid_bindings(x, rhead.sym, sig, fresh):
            new_pairs = [(nf(theta.apply(l)), r) for l, r in flex_pairs]
            new_images = {v: nf(theta.apply(img)) for v, img in images.items()}
            if bounds is not None and any(
                _flex_cut_depth(new_images[v]) > bounds[v] for v in orig
            ):
                continue
            if prune_unsolvable:
                residual = MatchingProblem(
                    sig, tuple(Equation(l, r) for l, r in new_pairs)
                )
                if not solve_brute(residual).solved:
                    continue
            yield from rec(new_pairs, new_images)

    yield from rec(pairs, images)


def _as_image(t: Term) -> Term:
    # Images of the identity substitution start as eta-expansions of the
    # variable itself; later compositions keep them normal.
    return nf(t)


def solve_huet_pruned(
    p: MatchingProblem, max_depth_override: int | None = None
) -> SolveResult:
    if not p.validated:
        p = validate(p)
    start = time.perf_counter()
    bounds = _bounds(p, max_depth_override)
    stats = SearchStats(max_depth_used=max(bounds.values(), default=0))
    for sigma in _huet_stream(p, bounds, prune_unsolvable=False, stats=stats):
        witness = ground_extend(sigma, p)
        stats.candidates_tested += 1
        if verify_solution(p, witness):
            stats.elapsed = time.perf_counter() - start
            return SolveResult(True, witness, bounds, stats)
    stats.elapsed = time.perf_counter() - start
    return SolveResult(False, None, bounds, stats)


def enumerate_complete_set(p: MatchingProblem) -> Iterator[Substitution]:
    """Complete set of solutions via Huet's tree pruned at unsolvable nodes.

    The stream is finite when the pruned tree is; every yielded substitution
    passes verify_solution.
    """
    if not p.validated:
        p = validate(p)
    stats = SearchStats()
    yield from _huet_stream(p, bounds=None, prune_unsolvable=True, stats=stats)


def ground_extend(sigma: Substitution, p: MatchingProblem) -> Substitution:
    """Instantiate every residual variable in sigma's images with a trivial
    depth-0 ground term, yielding a ground solution whenever sigma solves p."""
    sig = p.signature.complete()
    residual: set[Symbol] = set()
    for _, t in sigma.pairs:
        residual |= free_instantiables(t)
    if not residual:
        return sigma
    tau = Substitution.of({y: trivial_ground_term(y.ty, sig) for y in residual})
    return compose(tau, sigma)

"""Seeded random problem corpus with planted ground solutions.

Each generated problem is built backwards: draw a ground image for every
variable, apply the resulting substitution to a random left-hand side and
take the normal form as the right-hand side.  The planted substitution
therefore solves the problem by construction, which gives an external
ground truth for both engines.  A feasibility guard keeps the brute-force
candidate space small enough to enumerate in tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    App,
    Atom,
    Lam,
    Signature,
    Substitution,
    Symbol,
    Term,
    Var,
    app,
    arity,
    arrow,
    const,
    ivar,
    nf,
)
from .enumeration import EnumContext, count_terms, enum_terms
from .matching import Equation, MatchingProblem, depth_bound, problem_h, validate

T = Atom("T")

_SIG = Signature(
    atoms=frozenset({T}),
    constants=(const("a", T), const("b", T), const("f", arrow(T, T))),
    instantiables=(),
    locals=(),
)

# Third-order (or lower) variable types over T, kept at low head arities so
# the candidate space stays enumerable at the proved depth bound.
_VAR_TYPES = (
    arrow(T, arrow(T, T), T),
    arrow(arrow(T, T), T),
    arrow(arrow(T, T), T, T),
    arrow(T, T),
    T,
)


@dataclass(frozen=True)
class CorpusConfig:
    seed: int = 2024
    size: int = 200
    max_vars: int = 2
    image_depth: int = 3
    rhs_depth: int = 2
    candidate_cap: int = 8_000


@dataclass(frozen=True)
class CorpusProblem:
    problem: MatchingProblem
    planted: Substitution


def _random_image(rng: random.Random, ty, depth: int) -> Term:
    pool = list(enum_terms(EnumContext(_SIG, (), ty, depth)))
    return rng.choice(pool)


def _random_lhs(rng: random.Random, x: Symbol, depth: int) -> Term:
    """A closed atomic-type left-hand side applying x to random ground
    arguments, optionally wrapped in a short unary-constant chain."""

    def ground(ty, budget: int) -> Term:
        pool = list(enum_terms(EnumContext(_SIG, (), ty, budget)))
        return rng.choice(pool)

    args = [ground(w, rng.randint(0, depth)) for w in _arg_tys(x)]
    out = app(Var(x), *args)
    f = Var(_SIG.constants[2])
    for _ in range(rng.randint(0, 2)):
        out = app(f, out)
    return out


def _arg_tys(x: Symbol):
    from .core import arg_types

    return arg_types(x.ty)


def _feasible(p: MatchingProblem, cap: int) -> bool:
    h = problem_h(p)
    total = 1
    from .matching import problem_vars

    for x in problem_vars(p):
        total *= count_terms(
            EnumContext(p.signature, (), x.ty, depth_bound(arity(x.ty), h))
        )
        if total > cap:
            return False
    return total <= cap


def generate_corpus(config: CorpusConfig = CorpusConfig()) -> list[CorpusProblem]:
    rng = random.Random(config.seed)
    out: list[CorpusProblem] = []
    attempt = 0
    while len(out) < config.size:
        attempt += 1
        n_vars = rng.randint(1, config.max_vars)
        variables = tuple(
            ivar(f"x{i + 1}", rng.choice(_VAR_TYPES)) for i in range(n_vars)
        )
        images = {
            x: _random_image(rng, x.ty, rng.randint(0, config.image_depth))
            for x in variables
        }
        planted = Substitution.of(images)
        eqs = []
        for x in variables:
            lhs = _random_lhs(rng, x, config.rhs_depth)
            eqs.append(Equation(nf(lhs), nf(planted.apply(lhs))))
        sig = Signature(_SIG.atoms, _SIG.constants, variables, ())
        try:
            p = validate(MatchingProblem(sig, tuple(eqs)))
        except Exception:
            continue
        if problem_h(p) > 2 or not _feasible(p, config.candidate_cap):
            continue
        out.append(CorpusProblem(p, planted))
    return out


def _swap_ab(t: Term) -> Term:
    a, b = _SIG.constants[0], _SIG.constants[1]

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            if u.sym == a:
                return Var(b)
            if u.sym == b:
                return Var(a)
            return u
        if isinstance(u, App):
            return App(go(u.fn), go(u.arg))
        if isinstance(u, Lam):
            return Lam(u.binder, go(u.body))
        return u

    return go(t)


def unsolvable_perturbations(
    corpus: list[CorpusProblem], target: int, *, confirm=None
) -> list[MatchingProblem]:
    """Adjoin to each problem a copy of its first equation with the two
    atomic constants swapped in the right-hand side.  The same left side
    cannot equal two distinct ground terms, so whenever the swap changes
    the right-hand side the result is unsolvable; each output is still
    confirmed by the brute-force engine before being kept."""
    from .matching import solve_brute

    check = confirm if confirm is not None else (lambda p: not solve_brute(p).solved)
    out: list[MatchingProblem] = []
    for cp in corpus:
        eq = cp.problem.equations[0]
        twisted = nf(_swap_ab(eq.rhs))
        if twisted == eq.rhs:
            continue
        cand = MatchingProblem(
            cp.problem.signature,
            cp.problem.equations + (Equation(eq.lhs, twisted),),
            validated=True,
        )
        if check(cand):
            out.append(cand)
            if len(out) >= target:
                break
    return out

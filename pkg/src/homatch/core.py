"""Simply typed lambda-calculus kernel.

Types, symbols, terms, typing, alpha-equivalence, capture-avoiding
substitution, beta-eta normalization and eta-long forms.  Everything here is
immutable and pure; the rest of the package builds on these primitives.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from itertools import count
from typing import Iterator, Mapping


class IllTyped(Exception):
    """A term has no simple type."""


class NotNormal(Exception):
    """A term expected in beta-normal (eta-long) form is not."""


class SubstitutionError(ValueError):
    """A substitution violates its well-formedness invariants."""


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        d = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{d} -> {self.cod}"


Type = Atom | Arrow


def arrow(*tys: Type) -> Type:
    """Right-associated arrow: arrow(a, b, c) == a -> (b -> c)."""
    if not tys:
        raise ValueError("arrow() needs at least one type")
    out = tys[-1]
    for ty in reversed(tys[:-1]):
        out = Arrow(ty, out)
    return out


def arg_types(ty: Type) -> tuple[Type, ...]:
    out: list[Type] = []
    while isinstance(ty, Arrow):
        out.append(ty.dom)
        ty = ty.cod
    return tuple(out)


def target(ty: Type) -> Atom:
    while isinstance(ty, Arrow):
        ty = ty.cod
    return ty


def arity(ty: Type) -> int:
    return len(arg_types(ty))


def order(ty: Type) -> int:
    if isinstance(ty, Atom):
        return 1
    return max(1 + order(ty.dom), order(ty.cod))


# ---------------------------------------------------------------------------
# Symbols and signatures


class Kind(enum.Enum):
    CONSTANT = "constant"
    INSTANTIABLE = "instantiable"
    LOCAL = "local"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: Kind
    ty: Type

    def __str__(self) -> str:
        return self.name


def const(name: str, ty: Type) -> Symbol:
    return Symbol(name, Kind.CONSTANT, ty)


def ivar(name: str, ty: Type) -> Symbol:
    return Symbol(name, Kind.INSTANTIABLE, ty)


def local(name: str, ty: Type) -> Symbol:
    return Symbol(name, Kind.LOCAL, ty)


@dataclass(frozen=True)
class Signature:
    """Declared atomic types and symbols of a problem.

    `complete()` guarantees every atomic type has at least one constant,
    adding a `_default_<U>` constant where the user declared none.
    """

    atoms: frozenset[Atom]
    constants: tuple[Symbol, ...]
    instantiables: tuple[Symbol, ...] = ()
    locals: tuple[Symbol, ...] = ()

    def __post_init__(self) -> None:
        seen: dict[str, Symbol] = {}
        for s in (*self.constants, *self.instantiables, *self.locals):
            if s.name in seen and seen[s.name] != s:
                raise ValueError(f"symbol {s.name!r} declared twice with different roles")
            seen[s.name] = s

    def complete(self) -> "Signature":
        covered = {c.ty for c in self.constants if isinstance(c.ty, Atom)}
        extra = tuple(
            const(f"_default_{a.name}", a)
            for a in sorted(self.atoms, key=lambda a: a.name)
            if a not in covered
        )
        if not extra:
            return self
        return Signature(
            self.atoms,
            tuple(sorted((*self.constants, *extra), key=lambda s: s.name)),
            self.instantiables,
            self.locals,
        )

    def constants_for(self, atom: Atom) -> tuple[Symbol, ...]:
        """Constants whose type targets `atom`, sorted by name."""
        return tuple(
            sorted((c for c in self.constants if target(c.ty) == atom), key=lambda c: c.name)
        )


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    sym: Symbol


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    binder: Symbol
    body: "Term"

    def __post_init__(self) -> None:
        if self.binder.kind is not Kind.LOCAL:
            raise ValueError("lambda binders must be local variables")


Term = Var | App | Lam


def app(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def lams(binders, body: Term) -> Term:
    for b in reversed(tuple(binders)):
        body = Lam(b, body)
    return body


def strip_lams(t: Term) -> tuple[tuple[Symbol, ...], Term]:
    binders: list[Symbol] = []
    while isinstance(t, Lam):
        binders.append(t.binder)
        t = t.body
    return tuple(binders), t


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    return t, tuple(reversed(args))


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        yield from subterms(t.fn)
        yield from subterms(t.arg)
    elif isinstance(t, Lam):
        yield from subterms(t.body)


def all_symbol_names(t: Term) -> frozenset[str]:
    out: set[str] = set()
    for s in subterms(t):
        if isinstance(s, Var):
            out.add(s.sym.name)
        elif isinstance(s, Lam):
            out.add(s.binder.name)
    return frozenset(out)


def free_vars(t: Term) -> frozenset[Symbol]:
    """Free symbols of every kind (constants included)."""
    if isinstance(t, Var):
        return frozenset({t.sym})
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    return free_vars(t.body) - {t.binder}


def free_instantiables(t: Term) -> frozenset[Symbol]:
    return frozenset(s for s in free_vars(t) if s.kind is Kind.INSTANTIABLE)


def free_locals(t: Term) -> frozenset[Symbol]:
    return frozenset(s for s in free_vars(t) if s.kind is Kind.LOCAL)


def is_ground(t: Term) -> bool:
    return not free_instantiables(t)


def occurs_free(t: Term, x: Symbol) -> bool:
    if isinstance(t, Var):
        return t.sym == x
    if isinstance(t, App):
        return occurs_free(t.fn, x) or occurs_free(t.arg, x)
    if t.binder == x:
        return False
    return occurs_free(t.body, x)


def infer_type(t: Term) -> Type:
    if isinstance(t, Var):
        return t.sym.ty
    if isinstance(t, Lam):
        return Arrow(t.binder.ty, infer_type(t.body))
    fty = infer_type(t.fn)
    if not isinstance(fty, Arrow):
        raise IllTyped(f"non-arrow applied at {t.fn!r}")
    aty = infer_type(t.arg)
    if fty.dom != aty:
        raise IllTyped(f"argument type {aty} does not match domain {fty.dom}")
    return fty.cod


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_equal(t: Term, u: Term) -> bool:
    """Equality up to renaming of bound variables (types must agree)."""

    def go(t: Term, u: Term, et: dict[Symbol, int], eu: dict[Symbol, int], n: int) -> bool:
        if isinstance(t, Var) and isinstance(u, Var):
            it, iu = et.get(t.sym), eu.get(u.sym)
            if it is None and iu is None:
                return t.sym == u.sym
            return it == iu
        if isinstance(t, App) and isinstance(u, App):
            return go(t.fn, u.fn, et, eu, n) and go(t.arg, u.arg, et, eu, n)
        if isinstance(t, Lam) and isinstance(u, Lam):
            if t.binder.ty != u.binder.ty:
                return False
            return go(t.body, u.body, {**et, t.binder: n}, {**eu, u.binder: n}, n + 1)
        return False

    return go(t, u, {}, {}, 0)


# ---------------------------------------------------------------------------
# Substitution of a single variable (capture-avoiding)


def _fresh_local(ty: Type, avoid: set[str]) -> Symbol:
    for i in count(1):
        name = f"_z{i}"
        if name not in avoid:
            avoid.add(name)
            return local(name, ty)
    raise AssertionError("unreachable")


def substitute(t: Term, x: Symbol, u: Term) -> Term:
    """Replace free occurrences of x in t by u, renaming binders as needed."""
    if x.ty != infer_type(u):
        raise IllTyped(f"cannot substitute term of type {infer_type(u)} for {x.name}:{x.ty}")
    u_free = {s.name for s in free_vars(u)}
    avoid = set(u_free) | all_symbol_names(t)

    def go(t: Term) -> Term:
        if isinstance(t, Var):
            return u if t.sym == x else t
        if isinstance(t, App):
            return App(go(t.fn), go(t.arg))
        if t.binder == x:
            return t
        if t.binder.name in u_free and occurs_free(t.body, x):
            nb = _fresh_local(t.binder.ty, avoid)
            return Lam(nb, go(_rename(t.body, t.binder, nb)))
        return Lam(t.binder, go(t.body))

    return go(t)


def _rename(t: Term, old: Symbol, new: Symbol) -> Term:
    if isinstance(t, Var):
        return Var(new) if t.sym == old else t
    if isinstance(t, App):
        return App(_rename(t.fn, old, new), _rename(t.arg, old, new))
    if t.binder == old:
        return t
    return Lam(t.binder, _rename(t.body, old, new))


# ---------------------------------------------------------------------------
# Beta-eta normalization and eta-long form


def _beta(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Lam):
        return Lam(t.binder, _beta(t.body))
    fn = _beta(t.fn)
    if isinstance(fn, Lam):
        return _beta(substitute(fn.body, fn.binder, t.arg))
    return App(fn, _beta(t.arg))


def _eta_contract(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(_eta_contract(t.fn), _eta_contract(t.arg))
    body = _eta_contract(t.body)
    if (
        isinstance(body, App)
        and isinstance(body.arg, Var)
        and body.arg.sym == t.binder
        and not occurs_free(body.fn, t.binder)
    ):
        return body.fn
    return Lam(t.binder, body)


def normalize(t: Term) -> Term:
    """The unique beta-eta normal form of a well-typed term."""
    return _eta_contract(_beta(t))


def eta_long(t: Term) -> Term:
    """Fully eta-expanded form of a beta-normal term."""
    avoid = set(all_symbol_names(t))

    def go(t: Term, ty: Type) -> Term:
        binders, body = strip_lams(t)
        tys = arg_types(ty)
        if len(binders) > len(tys):
            raise IllTyped(f"term has more binders than its type {ty} admits")
        extra = tuple(_fresh_local(tys[i], avoid) for i in range(len(binders), len(tys)))
        head, args = spine(body)
        if not isinstance(head, Var):
            raise NotNormal("head of a beta-normal term must be a variable")
        full_args = tuple(args) + tuple(Var(e) for e in extra)
        head_tys = arg_types(head.sym.ty)
        if len(full_args) != len(head_tys):
            raise NotNormal("application spine does not saturate the head")
        expanded = tuple(go(a, head_tys[i]) for i, a in enumerate(full_args))
        return lams(binders + extra, app(head, *expanded))

    return go(t, infer_type(t))


def canonical(t: Term) -> Term:
    """Rename every binder to a distinct reserved _z name, in preorder."""
    free_names = {s.name for s in free_vars(t)}
    ctr = count(1)

    def next_binder(ty: Type) -> Symbol:
        while True:
            name = f"_z{next(ctr)}"
            if name not in free_names:
                return local(name, ty)

    def go(t: Term, env: dict[Symbol, Symbol]) -> Term:
        if isinstance(t, Var):
            return Var(env.get(t.sym, t.sym))
        if isinstance(t, App):
            return App(go(t.fn, env), go(t.arg, env))
        nb = next_binder(t.binder.ty)
        return Lam(nb, go(t.body, {**env, t.binder: nb}))

    return go(t, {})


@functools.lru_cache(maxsize=None)
def nf(t: Term) -> Term:
    """Canonical beta-normal eta-long form with deterministic binder names."""
    return canonical(eta_long(normalize(t)))


# ---------------------------------------------------------------------------
# Substitutions


@dataclass(frozen=True)
class Substitution:
    """Finite map from instantiable variables to terms free of local variables."""

    pairs: tuple[tuple[Symbol, Term], ...] = ()

    def __post_init__(self) -> None:
        seen: set[Symbol] = set()
        for x, t in self.pairs:
            if x.kind is not Kind.INSTANTIABLE:
                raise SubstitutionError(f"{x.name} is not an instantiable variable")
            if x in seen:
                raise SubstitutionError(f"{x.name} bound twice")
            seen.add(x)
            if infer_type(t) != x.ty:
                raise SubstitutionError(f"binding for {x.name} has type {infer_type(t)}, expected {x.ty}")
            if free_locals(t):
                bad = sorted(s.name for s in free_locals(t))
                raise SubstitutionError(f"local variables {bad} occur free in binding for {x.name}")

    @classmethod
    def of(cls, mapping: Mapping[Symbol, Term]) -> "Substitution":
        return cls(tuple(sorted(mapping.items(), key=lambda p: p[0].name)))

    @property
    def mapping(self) -> dict[Symbol, Term]:
        return dict(self.pairs)

    @property
    def domain(self) -> frozenset[Symbol]:
        return frozenset(x for x, _ in self.pairs)

    def get(self, x: Symbol) -> Term | None:
        for y, t in self.pairs:
            if y == x:
                return t
        return None

    def apply(self, t: Term) -> Term:
        """Simultaneous graft of every binding; the result is not normalized."""
        m = self.mapping

        def go(t: Term) -> Term:
            if isinstance(t, Var):
                return m.get(t.sym, t)
            if isinstance(t, App):
                return App(go(t.fn), go(t.arg))
            return Lam(t.binder, go(t.body))

        # Images contain no free locals, so grafting under binders cannot
        # capture anything.
        return go(t)

    def restrict(self, xs) -> "Substitution":
        keep = set(xs)
        return Substitution(tuple(p for p in self.pairs if p[0] in keep))

    def __len__(self) -> int:
        return len(self.pairs)


def compose(tau: Substitution, sigma: Substitution) -> Substitution:
    """tau after sigma: sigma's images rewritten by tau, plus tau's own
    bindings for variables sigma leaves untouched."""
    out = {x: tau.apply(t) for x, t in sigma.pairs}
    for x, t in tau.pairs:
        if x not in out:
            out[x] = t
    return Substitution.of(out)

"""Executable forms of the constructions behind the depth bound.

These operations take a known solution as input and are never on the
decision path: the substitution-depth lemma check, accessibility of
occurrences in a solution image, the pruned (accessible) solution, the
compact accessible solution, and the reduction of a matching problem to an
interpolation problem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count
from typing import Iterable

from .bohm import (
    BohmTree,
    Occurrence,
    depth,
    occurrences,
    relevant_in,
    to_bohm,
    tree_depth,
    trivial_ground_term,
)
from .core import (
    Kind,
    Signature,
    Substitution,
    Symbol,
    Term,
    Var,
    alpha_equal,
    app,
    arg_types,
    arity,
    free_vars,
    infer_type,
    is_ground,
    lams,
    local,
    nf,
    order,
    strip_lams,
    substitute,
)
from .matching import Equation, InterpolationEquation, MatchingProblem, problem_vars, validate


class NotASolution(Exception):
    """The supplied substitution does not solve the supplied problem."""


class NotAccessible(Exception):
    """A compactness step found no equation witnessing the forced projection."""


# ---------------------------------------------------------------------------
# Key lemma


@dataclass
class KeyLemmaReport:
    """Violations found when checking one (u, y, c) instance."""

    subject_occurs: bool
    depth_before: int
    depth_after: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _head_label(bt: BohmTree, free: frozenset[Symbol]):
    """Comparison label for part (2): constants, instantiables and free
    locals compare by symbol; bound binders only by type."""
    h = bt.head
    if h.kind is Kind.LOCAL and h not in free:
        return ("bound", h.ty)
    return ("sym", h)


def key_lemma_check(u: Term, y: Symbol, c: Term) -> KeyLemmaReport:
    """Check, on one instance, that substituting a second-order ground term
    never loses depth except through irrelevant or depth-0 arguments."""
    if order(y.ty) > 2:
        raise ValueError(f"{y.name} has order {order(y.ty)} > 2")
    if infer_type(c) != y.ty:
        raise ValueError("substituted term must have the variable's type")
    if not is_ground(c):
        raise ValueError("substituted term must be ground")
    un = nf(u)
    after = nf(substitute(un, y, c))
    d_before, d_after = tree_depth(to_bohm(un)), tree_depth(to_bohm(after))
    occurs = y in free_vars(un)
    report = KeyLemmaReport(occurs, d_before, d_after)

    # Part (1): an occurrence of y implies |c| <= |u[y <- c]|.
    if occurs and depth(c) > d_after:
        report.violations.append(
            f"part 1: depth {depth(c)} of substituted term exceeds {d_after}"
        )

    # Part (2): occurrences with no y on their path persist with their label.
    bt_before, bt_after = to_bohm(un), to_bohm(after)
    free_after = free_vars(after) | free_vars(un)
    index_after = {occ: sub for occ, sub in occurrences(bt_after)}
    path_has_y: dict[Occurrence, bool] = {}
    for occ, sub in occurrences(bt_before):
        parent = occ[:-1] if occ else ()
        has_y = sub.head == y or (bool(occ) and path_has_y[parent])
        path_has_y[occ] = has_y
        if has_y:
            continue
        other = index_after.get(occ)
        if other is None:
            report.violations.append(f"part 2: occurrence {occ} vanished")
        elif _head_label(sub, free_after) != _head_label(other, free_after):
            report.violations.append(
                f"part 2: occurrence {occ} relabeled {sub.head.name} -> {other.head.name}"
            )

    # Corollary: relevant everywhere and |c| != 0 implies |u| <= |u[y <- c]|.
    n_args = arity(y.ty)
    if (
        occurs
        and depth(c) != 0
        and all(relevant_in(c, i + 1) for i in range(n_args))
        and d_before > d_after
    ):
        report.violations.append(
            f"corollary: depth dropped {d_before} -> {d_after} despite relevance"
        )
    return report


# ---------------------------------------------------------------------------
# Accessibility


def accessible_occurrences(t: Term, eq: InterpolationEquation) -> frozenset[Occurrence]:
    """Occurrences of the Bohm tree of t reachable from the root, descending
    through a binder-headed node only into argument positions in which the
    corresponding equation argument is relevant."""
    t = nf(t)
    bt = to_bohm(t)
    binders = bt.binders
    if len(binders) != len(eq.args):
        raise ValueError(
            f"image has {len(binders)} binders but equation has {len(eq.args)} arguments"
        )
    slot = {b: i for i, b in enumerate(binders)}
    out: set[Occurrence] = set()

    def walk(node: BohmTree, occ: Occurrence) -> None:
        out.add(occ)
        i = slot.get(node.head)
        for j, child in enumerate(node.children, start=1):
            if i is None or relevant_in(eq.args[i], j):
                walk(child, (*occ, j))

    walk(bt, ())
    return frozenset(out)


def _solves_interpolation(sigma: Substitution, phi: Iterable[InterpolationEquation]) -> bool:
    return all(
        alpha_equal(nf(sigma.apply(eq.lhs_term())), nf(eq.rhs)) for eq in phi
    )


def interpolation_h(phi: Iterable[InterpolationEquation]) -> int:
    return max((depth(eq.rhs) for eq in phi), default=0)


def accessible_solution(
    sigma: Substitution, phi: list[InterpolationEquation], sig: Signature
) -> Substitution:
    """Prune each image to its accessible occurrences, filling the removed
    positions with depth-0 ground terms of the expected type."""
    if not _solves_interpolation(sigma, phi):
        raise NotASolution("substitution does not solve the interpolation problem")
    sig = sig.complete()
    out = dict(sigma.pairs)
    for x in {eq.x for eq in phi}:
        t = nf(out[x])
        bt = to_bohm(t)
        access: set[Occurrence] = set()
        for eq in phi:
            if eq.x == x:
                access |= accessible_occurrences(t, eq)

        def rebuild(node: BohmTree, occ: Occurrence) -> BohmTree:
            if occ not in access:
                ty = infer_type(lams(node.binders, _node_body(node)))
                return to_bohm(trivial_ground_term(ty, sig))
            children = tuple(
                rebuild(c, (*occ, j)) for j, c in enumerate(node.children, start=1)
            )
            return BohmTree(node.binders, node.head, children)

        out[x] = nf(_from_tree(rebuild(bt, ())))
    return Substitution.of(out)


def _node_body(node: BohmTree) -> Term:
    return app(Var(node.head), *(_from_tree(c) for c in node.children))


def _from_tree(bt: BohmTree) -> Term:
    return lams(bt.binders, _node_body(bt))


def _projection_index(c: Term) -> int | None:
    """If c is alpha-equal to \\z1...zp. zj, return j (1-based)."""
    binders, body = strip_lams(nf(c))
    if isinstance(body, Var) and body.sym in binders:
        return binders.index(body.sym) + 1
    return None


def compact_accessible_solution(
    sigma_hat: Substitution, phi: list[InterpolationEquation], sig: Signature
) -> Substitution:
    """Replace each binder occurrence past the (h+1)-th on its path by the
    projection forced by the equations through which it is accessible."""
    if not _solves_interpolation(sigma_hat, phi):
        raise NotASolution("substitution does not solve the interpolation problem")
    h = interpolation_h(phi)
    out = dict(sigma_hat.pairs)
    for x in {eq.x for eq in phi}:
        t = nf(out[x])
        bt = to_bohm(t)
        binders = bt.binders
        slot = {b: i for i, b in enumerate(binders)}
        eq_access = [
            (eq, accessible_occurrences(t, eq)) for eq in phi if eq.x == x
        ]

        marks: dict[Occurrence, int] = {}

        def scan(node: BohmTree, occ: Occurrence, counts: dict[Symbol, int]) -> None:
            i = slot.get(node.head)
            if i is not None:
                counts = {**counts, node.head: counts.get(node.head, 0) + 1}
                if counts[node.head] >= h + 2:
                    js = set()
                    for eq, access in eq_access:
                        if occ in access:
                            j = _projection_index(eq.args[i])
                            if j is None:
                                raise NotAccessible(
                                    f"equation argument {i + 1} for {x.name} is not a projection"
                                )
                            js.add(j)
                    if not js:
                        raise NotAccessible(
                            f"occurrence {occ} of {node.head.name} accessible in no equation"
                        )
                    if len(js) > 1:
                        raise NotAccessible(
                            f"equations disagree on the forced projection at {occ}: {sorted(js)}"
                        )
                    marks[occ] = js.pop()
            for j, child in enumerate(node.children, start=1):
                scan(child, (*occ, j), counts)

        def rebuild(node: BohmTree, occ: Occurrence) -> BohmTree:
            children = tuple(
                rebuild(c, (*occ, j)) for j, c in enumerate(node.children, start=1)
            )
            if occ in marks:
                chosen = children[marks[occ] - 1]
                # The projected child has an atomic type (second-order binder
                # arguments are first order), so its binder list is empty.
                return BohmTree(node.binders, chosen.head, chosen.children)
            return BohmTree(node.binders, node.head, children)

        scan(bt, (), {})
        out[x] = nf(_from_tree(rebuild(bt, ())))
    return Substitution.of(out)


# ---------------------------------------------------------------------------
# Reduction of matching to interpolation


def build_interpolation(
    p: MatchingProblem, sigma: Substitution
) -> list[InterpolationEquation]:
    """Interpolation problem constructed from a problem and a ground solution:
    abstractions stripped, rigid-rigid pairs decomposed, and each flex
    equation's arguments either instantiated by sigma (when the argument
    position matters) or replaced by a fresh local."""
    if not p.validated:
        p = validate(p)
    from .matching import verify_solution

    if not verify_solution(p, sigma):
        raise NotASolution("substitution does not solve the matching problem")
    fresh = count(1)
    out: list[InterpolationEquation] = []

    def walk(a: Term, b: Term) -> None:
        a, b = nf(a), nf(b)
        ab, abody = strip_lams(a)
        bb, bbody = strip_lams(b)
        for x_a, x_b in zip(ab, bb):
            abody = substitute(abody, x_a, Var(x_b))
        from .core import spine

        head, args = spine(abody)
        rhead, rargs = spine(bbody)
        assert isinstance(head, Var) and isinstance(rhead, Var)
        if head.sym.kind is not Kind.INSTANTIABLE:
            assert head.sym == rhead.sym, "solution invariant violated"
            for d, e in zip(args, rargs):
                walk(d, e)
            return
        x = head.sym
        image = sigma.get(x)
        cs: list[Term] = []
        for i, d in enumerate(args):
            z = local(f"_w{next(fresh)}", infer_type(d))
            probe = [nf(sigma.apply(dj)) for dj in args]
            probe[i] = nf(Var(z))
            w = nf(app(image, *probe))
            if z in free_vars(w):
                ci = nf(sigma.apply(d))
                cs.append(ci)
                walk(d, ci)
            else:
                cs.append(nf(Var(z)))
        out.append(InterpolationEquation(x, tuple(cs), bbody))

    for eq in p.equations:
        walk(eq.lhs, eq.rhs)
    return out


def fresh_local_absence_check(x: Symbol, args: list[Term], sigma: Substitution) -> bool:
    """The fresh locals standing for irrelevant argument positions never
    surface in the normal form of the instantiated equation head."""
    image = sigma.get(x)
    if image is None:
        raise ValueError(f"{x.name} is not bound by the substitution")
    fresh = count(1)
    cs: list[Term] = []
    zs: list[Symbol] = []
    for i, d in enumerate(args):
        z = local(f"_w{next(fresh)}", infer_type(d))
        probe = [nf(sigma.apply(dj)) for dj in args]
        probe[i] = nf(Var(z))
        w = nf(app(image, *probe))
        if z in free_vars(w):
            cs.append(nf(sigma.apply(d)))
        else:
            zs.append(z)
            cs.append(nf(Var(z)))
    result = nf(app(image, *cs))
    return not (set(zs) & set(free_vars(result)))

"""Command-line front end.

``homatch FILE`` decides the matching problem in FILE and prints either a
witness substitution (one ``x <- term`` line per variable) or ``UNSOLVABLE``.
Exit status: 0 solved, 1 unsolvable, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import islice

from .core import Substitution, arity
from .matching import (
    MatchingProblem,
    SolveResult,
    ValidationError,
    depth_bound,
    enumerate_complete_set,
    problem_h,
    problem_vars,
    solve_brute,
    solve_huet_pruned,
    validate,
)
from .parser import ParseError, format_term, parse_problem
from .proofs import (
    NotASolution,
    accessible_solution,
    build_interpolation,
    compact_accessible_solution,
    fresh_local_absence_check,
    interpolation_h,
)


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="homatch", description="Decide third-order matching problems."
    )
    ap.add_argument("file", help="problem file")
    ap.add_argument(
        "--engine",
        choices=("brute", "huet", "both"),
        default="huet",
        help="decision engine (default: huet)",
    )
    ap.add_argument(
        "--enumerate",
        type=int,
        metavar="K",
        default=None,
        help="print up to K members of a complete set of solutions",
    )
    ap.add_argument(
        "--max-depth",
        type=int,
        metavar="N",
        default=None,
        help="override the per-variable depth bound (may lose completeness)",
    )
    ap.add_argument("--stats", action="store_true", help="print search statistics")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument(
        "--proofkit",
        action="store_true",
        help="after solving, rerun the certifying constructions on the witness",
    )
    ap.add_argument(
        "--threads",
        type=int,
        metavar="N",
        default=1,
        help="accepted for compatibility; execution is serial",
    )
    return ap


def _witness_lines(sigma: Substitution) -> list[str]:
    return [f"{x.name} <- {format_term(t)}" for x, t in sigma.pairs]


def _stats_dict(r: SolveResult) -> dict:
    return {
        "candidates_tested": r.stats.candidates_tested,
        "nodes_expanded": r.stats.nodes_expanded,
        "max_depth_used": r.stats.max_depth_used,
        "elapsed_s": round(r.stats.elapsed, 6),
    }


def _run_proofkit(p: MatchingProblem, sigma: Substitution, out: list[str]) -> bool:
    """Certify a ground witness by replaying the depth-bound constructions."""
    ok = True
    try:
        phi = build_interpolation(p, sigma)
    except NotASolution as exc:
        out.append(f"proofkit: FAILED ({exc})")
        return False
    h = interpolation_h(phi)
    out.append(f"proofkit: interpolation problem with {len(phi)} equation(s), h={h}")
    for eq in phi:
        absent = fresh_local_absence_check(eq.x, list(eq.args), sigma)
        out.append(
            f"proofkit: irrelevant-slot locals absent for {eq.x.name}: "
            f"{'ok' if absent else 'VIOLATED'}"
        )
        ok &= absent
    sigma_r = sigma.restrict({eq.x for eq in phi})
    try:
        hat = accessible_solution(sigma_r, phi, p.signature)
        for x, t in hat.pairs:
            b = depth_bound(arity(x.ty), h)
            out.append(
                f"proofkit: accessible image for {x.name} has depth "
                f"{_img_depth(t)} (bound {b})"
            )
        compact = compact_accessible_solution(hat, phi, p.signature)
        for x, t in compact.pairs:
            b = depth_bound(arity(x.ty), h)
            d = _img_depth(t)
            within = d <= b
            out.append(
                f"proofkit: compact image for {x.name} has depth {d} <= {b}: "
                f"{'ok' if within else 'VIOLATED'}"
            )
            ok &= within
    except Exception as exc:  # noqa: BLE001 - report, don't crash
        out.append(f"proofkit: FAILED ({type(exc).__name__}: {exc})")
        return False
    return ok


def _img_depth(t) -> int:
    from .bohm import depth

    return depth(t)


def main(argv: list[str] | None = None) -> int:
    args = _build_argparser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        p = validate(parse_problem(text))
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    h = problem_h(p)
    xs = problem_vars(p)
    bounds = {x: depth_bound(arity(x.ty), h) for x in xs}
    if args.max_depth is not None:
        proved = max(bounds.values(), default=0)
        if args.max_depth < proved:
            print(
                f"warning: --max-depth {args.max_depth} is below the proved "
                f"bound {proved}; an UNSOLVABLE verdict is not conclusive",
                file=sys.stderr,
            )

    if args.enumerate is not None:
        return _run_enumerate(p, args)

    engines = {
        "brute": [("brute", solve_brute)],
        "huet": [("huet", solve_huet_pruned)],
        "both": [("brute", solve_brute), ("huet", solve_huet_pruned)],
    }[args.engine]
    results = [(name, fn(p, args.max_depth)) for name, fn in engines]
    if len(results) == 2 and results[0][1].solved != results[1][1].solved:
        print("error: engines disagree on solvability", file=sys.stderr)
        return 2
    name, result = results[-1]

    lines: list[str] = []
    proof_ok: bool | None = None
    if result.solved:
        lines.extend(_witness_lines(result.substitution))
        if args.proofkit:
            proof_ok = _run_proofkit(p, result.substitution, lines)
    else:
        lines.append("UNSOLVABLE")
    if args.stats:
        for ename, r in results:
            s = _stats_dict(r)
            lines.append(
                f"stats[{ename}]: candidates={s['candidates_tested']} "
                f"nodes={s['nodes_expanded']} depth={s['max_depth_used']} "
                f"elapsed={s['elapsed_s']}s"
            )

    if args.json:
        payload = {
            "solved": result.solved,
            "engine": args.engine,
            "witness": (
                {x.name: format_term(t) for x, t in result.substitution.pairs}
                if result.solved
                else None
            ),
            "bounds": {x.name: b for x, b in bounds.items()},
            "stats": {ename: _stats_dict(r) for ename, r in results},
        }
        if proof_ok is not None:
            payload["proofkit_ok"] = proof_ok
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))
    return 0 if result.solved else 1


def _run_enumerate(p: MatchingProblem, args: argparse.Namespace) -> int:
    sols = list(islice(enumerate_complete_set(p), args.enumerate))
    if args.json:
        payload = {
            "solved": bool(sols),
            "solutions": [
                {x.name: format_term(t) for x, t in s.pairs} for s in sols
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        if not sols:
            print("UNSOLVABLE")
        for i, s in enumerate(sols, start=1):
            print(f"solution {i}:")
            for line in _witness_lines(s):
                print(f"  {line}")
    return 0 if sols else 1


if __name__ == "__main__":
    sys.exit(main())

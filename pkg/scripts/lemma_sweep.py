#!/usr/bin/env python3
"""Exhaustive check of the substitution-depth lemma on small terms.

Sweeps all pairs (u, c) with u drawn over a signature extended by the
substituted variable y and c ground, both up to a configurable depth, and
reports any violation of the lemma's two parts or its corollary.
"""

from __future__ import annotations

import argparse
import time

from homatch.core import Atom, Signature, arrow, const, ivar
from homatch.enumeration import EnumContext, enum_terms
from homatch.proofs import key_lemma_check

T = Atom("T")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=2, help="max depth for u and c")
    args = ap.parse_args()

    a, b, f = const("a", T), const("b", T), const("f", arrow(T, T))
    y = ivar("y", arrow(T, T))
    sig = Signature(frozenset({T}), (a, b, f), (), ())
    sig_y = Signature(frozenset({T}), (a, b, f, y), (), ())

    us = list(enum_terms(EnumContext(sig_y, (), T, args.depth)))
    us += list(enum_terms(EnumContext(sig_y, (), arrow(T, T), args.depth)))
    cs = list(enum_terms(EnumContext(sig, (), arrow(T, T), args.depth)))

    t0 = time.perf_counter()
    triples = violations = 0
    for u in us:
        for c in cs:
            triples += 1
            report = key_lemma_check(u, y, c)
            if not report.ok:
                violations += 1
                print(f"VIOLATION u={u} c={c}: {report.violations}")
    print(f"{triples} instances checked, {violations} violations "
          f"({time.perf_counter() - t0:.1f}s)")
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())

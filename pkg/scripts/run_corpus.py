#!/usr/bin/env python3
"""Regenerate the random corpus and report engine agreement statistics."""

from __future__ import annotations

import argparse
import time

from homatch.corpus import CorpusConfig, generate_corpus, unsolvable_perturbations
from homatch.matching import solve_brute, solve_huet_pruned, verify_solution


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--size", type=int, default=200)
    ap.add_argument("--unsolvable", type=int, default=100)
    args = ap.parse_args()

    t0 = time.perf_counter()
    corpus = generate_corpus(CorpusConfig(seed=args.seed, size=args.size))
    bad = unsolvable_perturbations(corpus, args.unsolvable)
    print(f"generated {len(corpus)} solvable + {len(bad)} unsolvable problems "
          f"in {time.perf_counter() - t0:.1f}s")

    mismatches = 0
    t0 = time.perf_counter()
    for i, p in enumerate([cp.problem for cp in corpus] + bad):
        rb, rh = solve_brute(p), solve_huet_pruned(p)
        if rb.solved != rh.solved:
            mismatches += 1
            print(f"  MISMATCH on problem {i}: brute={rb.solved} huet={rh.solved}")
        for r in (rb, rh):
            if r.solved and not verify_solution(p, r.substitution):
                print(f"  UNVERIFIED witness on problem {i}")
    print(f"engine agreement: {mismatches} mismatches "
          f"({time.perf_counter() - t0:.1f}s)")
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())

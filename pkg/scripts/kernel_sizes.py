#!/usr/bin/env python3
"""Reduced-instance sizes against the kernel bound, per (k, d, s).

Draws random connected instances for each parameter triple, kernelizes them,
and tabulates the outcome mix and the largest reduced vertex count seen.
"""

from __future__ import annotations

import argparse
import csv
import os
import random
import sys
from collections import defaultdict

from dedp.kernel import Reduced, kernel_bound, kernelize
from dedp.reductions import GeneratorError, random_instance


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--per-triple", type=int, default=200)
    ap.add_argument("--n-max", type=int, default=24)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--out", default="results/kernel_sizes.csv")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    triples = [(k, d, s) for k in (2, 3, 4) for s in range(k) for d in (1, 2, 3)]
    rows = []
    for k, d, s in triples:
        bound = kernel_bound(k, d, s)
        tally = defaultdict(int)
        largest = 0
        for _ in range(args.per_triple):
            n = rng.randint(max(2, d), args.n_max)
            m = rng.randint(n - 1, min(3 * n, n * (n - 1)))
            try:
                inst = random_instance(n, m, k, d, s, seed=rng.randrange(2**31), ensure_connected=True)
            except GeneratorError:
                tally["skipped"] += 1
                continue
            res = kernelize(inst)
            tally[type(res).__name__] += 1
            if isinstance(res, Reduced):
                largest = max(largest, res.instance.n)
                if res.instance.n > bound:
                    print(f"bound exceeded: k={k} d={d} s={s} n'={res.instance.n}", file=sys.stderr)
                    return 1
        rows.append(
            {
                "k": k, "d": d, "s": s, "bound": bound, "largest_reduced": largest,
                "solved": tally["Solved"], "reduced": tally["Reduced"],
                "no_solution": tally["NoSolution"], "skipped": tally["skipped"],
            }
        )
        print(" ".join(f"{key}={val}" for key, val in rows[-1].items()))
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

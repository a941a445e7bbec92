#!/usr/bin/env python3
"""Exhaustive cross-check over all small digraphs.

For every non-isomorphic digraph with n <= N, every request multiset with
k <= K, and every d <= Dmax, s <= Smax, compare:
  * the XP solver against the path-enumeration oracle,
  * the kernelization decision against the oracle, and
  * the size of every reduced instance against the kernel bound.

Writes a JSON summary; progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict

from dedp.corpus import ExhaustiveConfig, exhaustive_cases, exhaustive_size
from dedp.kernel import NoSolution, Reduced, Solved, kernel_bound, kernelize
from dedp.solve import oracle, solve_xp


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--k-max", type=int, default=2)
    ap.add_argument("--d-max", type=int, default=3)
    ap.add_argument("--s-max", type=int, default=2)
    ap.add_argument("--no-kernel", action="store_true", help="skip the kernelization checks")
    ap.add_argument("--out", default="results/exhaustive_sweep.json")
    ap.add_argument("--every", type=int, default=500_000, help="progress interval")
    args = ap.parse_args(argv)

    cfg = ExhaustiveConfig(args.n_max, args.k_max, args.d_max, args.s_max)
    total = exhaustive_size(cfg)
    stats = {
        "config": asdict(cfg),
        "total": total,
        "checked": 0,
        "positive": 0,
        "xp_disagreements": [],
        "kernel_disagreements": [],
        "bound_violations": [],
        "kernel_outcomes": {"Solved": 0, "Reduced": 0, "NoSolution": 0},
    }
    t0 = time.perf_counter()
    per_n = {}
    for inst in exhaustive_cases(cfg):
        truth = oracle(inst) is not None
        xp = solve_xp(inst) is not None
        stats["checked"] += 1
        stats["positive"] += truth
        per_n[inst.n] = per_n.get(inst.n, 0) + 1
        key = {"edges": sorted(inst.graph.edges), "requests": [list(r) for r in inst.requests], "d": inst.d, "s": inst.s}
        if xp != truth:
            stats["xp_disagreements"].append(key)
        if not args.no_kernel:
            res = kernelize(inst)
            stats["kernel_outcomes"][type(res).__name__] += 1
            if isinstance(res, Reduced):
                if inst.s < inst.k and res.instance.n > kernel_bound(inst.k, inst.d, inst.s):
                    stats["bound_violations"].append(key)
                decided = oracle(res.instance) is not None
            else:
                decided = isinstance(res, Solved)
                assert isinstance(res, (Solved, NoSolution))
            if decided != truth:
                stats["kernel_disagreements"].append(key)
        if stats["checked"] % args.every == 0:
            el = time.perf_counter() - t0
            print(f"{stats['checked']}/{total} ({el:.0f} s)", file=sys.stderr, flush=True)
    stats["per_n"] = per_n
    stats["elapsed_s"] = round(time.perf_counter() - t0, 1)
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w") as fh:
        json.dump(stats, fh, indent=1)
    bad = len(stats["xp_disagreements"]) + len(stats["kernel_disagreements"]) + len(stats["bound_violations"])
    print(
        f"checked {stats['checked']} of {total}; xp mismatches {len(stats['xp_disagreements'])}; "
        f"kernel mismatches {len(stats['kernel_disagreements'])}; bound violations {len(stats['bound_violations'])}; "
        f"{stats['elapsed_s']} s"
    )
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())

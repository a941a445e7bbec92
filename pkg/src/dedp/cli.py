"""Command-line front end: ``dedp {solve,kernelize,verify,gen,check-decomp,stats}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FilePath
from typing import Sequence

from . import dtw, kernel, reductions, solve
from .instance import (
    FormatError,
    Instance,
    Solution,
    compact,
    parse_instance,
    parse_solution,
    trivial_status,
    verify_solution,
    write_instance,
    write_solution,
)
from .transform import blocking_vertices, dump_trace, lift_path

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_FORMAT, EXIT_CAP = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    return FilePath(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def solve_kernel(inst: Instance) -> Solution | None:
    """Kernelize, then run the XP solver on whatever is left and lift the answer."""
    res = kernel.kernelize(inst)
    if isinstance(res, kernel.NoSolution):
        return None
    if isinstance(res, kernel.Solved):
        return res.solution
    sol = solve.solve_xp(res.instance)
    if sol is None:
        return None
    lifted = Solution(sol.viable_set, tuple(lift_path(res.trace, p) for p in sol.paths))
    verdict = verify_solution(inst, lifted)
    if not verdict:
        raise kernel.KernelInvariantError(f"lifted solution fails verification: {verdict.message}")
    return lifted


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.inp))
    if args.algo == "oracle":
        sol = solve.oracle(inst, limit=args.limit)
    elif args.algo == "xp":
        sol = solve.solve_xp(inst)
    else:
        sol = solve_kernel(inst)
    if sol is not None and not verify_solution(inst, sol):
        print("internal error: produced solution does not verify", file=sys.stderr)
        return EXIT_NO
    print("yes" if sol is not None else "no")
    if sol is not None:
        _write(args.out, write_solution(sol))
    return EXIT_OK if sol is not None else EXIT_NO


def _write_trace(path: str, trace, mapping: dict[int, int]) -> None:
    lines = [f"m {new} {old}" for new, old in sorted(mapping.items())]
    _write(path, "\n".join(lines) + ("\n" if lines else "") + dump_trace(trace))


def cmd_kernelize(args) -> int:
    inst = parse_instance(_read(args.inp))
    res = kernel.kernelize(inst)
    if isinstance(res, kernel.NoSolution):
        print("no")
        _write(args.out, write_solution(None))
        return EXIT_NO
    if isinstance(res, kernel.Solved):
        print("solved")
        _write(args.out, write_solution(res.solution))
        return EXIT_OK
    small, mapping = compact(res.instance)
    print(f"reduced n={small.n} bound={kernel.kernel_bound(inst.k, inst.d, inst.s)}")
    _write(args.out, write_instance(small))
    if args.trace:
        _write_trace(args.trace, res.trace, mapping)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    sol = parse_solution(_read(args.solution))
    if sol is None:
        print("solution file answers 'no'; nothing to verify", file=sys.stderr)
        return EXIT_NO
    verdict = verify_solution(inst, sol)
    if verdict:
        print("ok")
        return EXIT_OK
    print(f"invalid ({verdict.kind}): {verdict.message}")
    return EXIT_NO


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "random":
        need(args, "n", "m", "k", "d", "s")
        inst = reductions.random_instance(
            args.n, args.m, args.k, args.d, args.s, args.seed,
            acyclic=args.acyclic, ensure_connected=args.connected, ensure_clean=args.clean,
        )
    elif kind == "ddpc":
        need(args, "n", "m", "k", "s")
        src = reductions.random_ddpc(args.n, args.m, args.k, args.s, args.seed, acyclic=args.acyclic)
        inst = reductions.from_ddpc(src, args.alpha, args.index)
    elif kind == "indset":
        need(args, "n", "d", "s")
        G = reductions.random_undirected(args.n, args.p, args.seed)
        inst = reductions.from_independent_set(G, args.d, args.s)
    else:
        need(args, "n", "m", "k", "d", "s")
        base = reductions.random_instance(
            args.n, args.m, args.k, args.d, 0, args.seed,
            acyclic=args.acyclic, ensure_connected=args.connected,
        )
        inst = reductions.amplify(base, args.s)
    text = write_instance(inst)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def need(args, *names):
    missing = [f"--{x}" for x in names if getattr(args, x) is None]
    if missing:
        raise _UsageError(f"--kind {args.kind} needs {' '.join(missing)}")


class _UsageError(Exception):
    pass


def cmd_check_decomp(args) -> int:
    D = parse_instance(_read(args.graph)).graph
    dec = dtw.parse_decomposition(_read(args.decomp))
    report = dtw.validate_decomposition(D, dec)
    if report.ok:
        print(f"width {report.width}")
        return EXIT_OK
    print(f"violation ({report.kind}): {report.message}")
    return EXIT_NO


def cmd_stats(args) -> int:
    inst = parse_instance(_read(args.inp))
    n_star = len(inst.graph.vertices - inst.terminals)
    blocking = len(blocking_vertices(inst.graph, inst.requests, inst.s))
    bound = kernel.kernel_bound(inst.k, inst.d, inst.s) if inst.s < inst.k else "n/a"
    rows = [
        ("n", inst.n), ("m", inst.graph.m), ("k", inst.k), ("d", inst.d), ("s", inst.s),
        ("nonterminals", n_star), ("blocking", blocking), ("kernel_bound", bound),
        ("trivial_status", trivial_status(inst).value),
    ]
    for key, val in rows:
        print(f"{key} {val}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dedp", description="Solve, kernelize and check DEDP instances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance")
    s.add_argument("--algo", choices=("oracle", "xp", "kernel"), default="kernel")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")
    s.add_argument("--limit", type=int, default=100_000, help="oracle cap on simple paths per request")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("kernelize", help="solve or shrink an instance")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--trace")
    s.set_defaults(func=cmd_kernelize)

    s = sub.add_parser("verify", help="check a solution file")
    s.add_argument("--instance", required=True)
    s.add_argument("--solution", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("gen", help="write a generated instance")
    s.add_argument("--kind", choices=("random", "ddpc", "indset", "amplify"), required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out")
    for name in ("n", "m", "k", "d", "s"):
        s.add_argument(f"--{name}", type=int)
    s.add_argument("--acyclic", action="store_true")
    s.add_argument("--connected", action="store_true", help="thread a path through every request")
    s.add_argument("--clean", action="store_true", help="add relays until no blocking vertex remains")
    s.add_argument("--alpha", type=float, default=0.5, help="ddpc: viable fraction exponent")
    s.add_argument("--index", type=int, default=1, help="ddpc: request rerouted through the chain")
    s.add_argument("--p", type=float, default=0.4, help="indset: edge probability")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check-decomp", help="validate an arboreal decomposition")
    s.add_argument("--graph", required=True)
    s.add_argument("--decomp", required=True)
    s.set_defaults(func=cmd_check_decomp)

    s = sub.add_parser("stats", help="summarise an instance")
    s.add_argument("--in", dest="inp", required=True)
    s.set_defaults(func=cmd_stats)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"dedp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"dedp: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"dedp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except solve.OracleLimitError as exc:
        print(f"dedp: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, reductions.GeneratorError) as exc:
        print(f"dedp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())

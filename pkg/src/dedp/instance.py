"""DEDP instances, solutions, verification and the line-oriented file formats."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .digraph import Digraph, Path, is_path, reachable_avoiding, shortest_path


class FormatError(ValueError):
    """Malformed instance or solution text; ``code`` is a stable identifier."""

    def __init__(self, code: str, message: str, line: int | None = None):
        self.code = code
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{code}: {message}{where}")


class Request(NamedTuple):
    source: int
    target: int


@dataclass(frozen=True)
class Instance:
    """Digraph, ordered request multiset, and parameters ``d`` and ``s``.

    ``c = n - d`` is derived; ``d`` is the stored parameter.
    """

    graph: Digraph
    requests: tuple[Request, ...]
    d: int
    s: int

    def __post_init__(self):
        reqs = tuple(Request(int(a), int(b)) for a, b in self.requests)
        object.__setattr__(self, "requests", reqs)
        if self.s < 0:
            raise ValueError("s must be non-negative")
        if not 0 <= self.d <= self.graph.n:
            raise ValueError(f"d={self.d} outside [0, n={self.graph.n}]")
        for r in reqs:
            self.graph.check_vertex(*r)

    @property
    def k(self) -> int:
        return len(self.requests)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def c(self) -> int:
        return self.graph.n - self.d

    @property
    def sources(self) -> frozenset[int]:
        return frozenset(r.source for r in self.requests)

    @property
    def targets(self) -> frozenset[int]:
        return frozenset(r.target for r in self.requests)

    @property
    def terminals(self) -> frozenset[int]:
        return self.sources | self.targets

    def with_graph(self, graph: Digraph, d: int | None = None) -> "Instance":
        return Instance(graph, self.requests, self.d if d is None else d, self.s)


@dataclass(frozen=True)
class Solution:
    viable_set: frozenset[int]
    paths: tuple[Path, ...]

    def __post_init__(self):
        object.__setattr__(self, "viable_set", frozenset(self.viable_set))
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))


def nonterminals(inst: Instance, over: Iterable[int] | None = None) -> frozenset[int]:
    base = inst.graph.vertices if over is None else frozenset(over)
    return base - inst.terminals


def congestion(paths: Iterable[Sequence[int]]) -> Counter:
    """Number of paths each vertex occurs in."""
    count: Counter = Counter()
    for p in paths:
        count.update(set(p))
    return count


class Verdict(NamedTuple):
    ok: bool
    kind: str | None = None  # "structural", "size" or "congestion" on failure
    message: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


def verify_solution(inst: Instance, sol: Solution) -> Verdict:
    D = inst.graph
    if len(sol.paths) != inst.k:
        return Verdict(False, "structural", f"{len(sol.paths)} paths for {inst.k} requests")
    for i, (req, p) in enumerate(zip(inst.requests, sol.paths), start=1):
        if not p:
            return Verdict(False, "structural", f"path {i} is empty", i)
        for x in p:
            if x not in D.vertices:
                return Verdict(False, "structural", f"path {i} uses unknown vertex {x}", x)
        for a, b in zip(p, p[1:]):
            if not D.has_edge(a, b):
                return Verdict(False, "structural", f"path {i} uses non-edge ({a}, {b})", (a, b))
        if len(set(p)) != len(p):
            dup = next(x for x, c in Counter(p).items() if c > 1)
            return Verdict(False, "structural", f"path {i} repeats vertex {dup}", dup)
        if (p[0], p[-1]) != tuple(req):
            return Verdict(False, "structural", f"path {i} runs {p[0]}->{p[-1]}, request is {req.source}->{req.target}", i)
    if not sol.viable_set <= D.vertices:
        bad = min(sol.viable_set - D.vertices)
        return Verdict(False, "structural", f"viable set contains unknown vertex {bad}", bad)
    if len(sol.viable_set) < inst.d:
        return Verdict(False, "size", f"|X| = {len(sol.viable_set)} < d = {inst.d}")
    count = congestion(sol.paths)
    for x in sorted(sol.viable_set):
        if count[x] > inst.s:
            return Verdict(False, "congestion", f"vertex {x} lies on {count[x]} paths > s = {inst.s}", x)
    return Verdict(True)


class TrivialStatus(enum.Enum):
    POSITIVE_TRIVIAL = "positive"
    NEGATIVE_TRIVIAL = "negative"
    UNDECIDED = "undecided"


def disconnected_requests(inst: Instance) -> list[int]:
    return [
        i for i, (a, b) in enumerate(inst.requests)
        if not reachable_avoiding(inst.graph, a, b, ())
    ]


def trivial_status(inst: Instance) -> TrivialStatus:
    if disconnected_requests(inst):
        return TrivialStatus.NEGATIVE_TRIVIAL
    if inst.d == 0 or inst.s >= inst.k:
        return TrivialStatus.POSITIVE_TRIVIAL
    return TrivialStatus.UNDECIDED


def trivial_solution(inst: Instance) -> Solution:
    """Certificate for a POSITIVE_TRIVIAL instance: shortest paths, ``d`` smallest vertices."""
    paths = [shortest_path(inst.graph, (a,), (b,)) for a, b in inst.requests]
    if any(p is None for p in paths):
        raise ValueError("instance has a disconnected request")
    if inst.d == 0:
        X: list[int] = []
    elif inst.s >= inst.k:
        X = inst.graph.sorted_vertices()[: inst.d]
    else:
        raise ValueError("instance is not trivially positive")
    return Solution(frozenset(X), tuple(paths))


# ---------------------------------------------------------------- file formats


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError("BAD_NUMBER", f"expected integers, got {' '.join(tokens)}", lineno) from None


def parse_instance(text: str) -> Instance:
    header = None
    arcs: list[tuple[int, int]] = []
    requests: list[Request] = []
    for lineno, tok in _lines(text):
        kind = tok[0]
        if kind == "p":
            if header is not None:
                raise FormatError("DUPLICATE_HEADER", "second header line", lineno)
            if len(tok) != 7 or tok[1] != "dedp":
                raise FormatError("BAD_HEADER", "expected 'p dedp n m k d s'", lineno)
            header = _ints(tok[2:], lineno)
            n, m, k, d, s = header
            if min(header) < 0:
                raise FormatError("BAD_HEADER", "negative header field", lineno)
            if d > n:
                raise FormatError("D_EXCEEDS_N", f"d={d} exceeds n={n}", lineno)
            continue
        if header is None:
            raise FormatError("MISSING_HEADER", "data line before header", lineno)
        if kind not in ("a", "r") or len(tok) != 3:
            raise FormatError("BAD_LINE", f"unrecognised line: {' '.join(tok)}", lineno)
        u, v = _ints(tok[1:], lineno)
        for x in (u, v):
            if not 1 <= x <= header[0]:
                raise FormatError("VERTEX_RANGE", f"vertex {x} outside [1, {header[0]}]", lineno)
        if kind == "a":
            if u == v:
                raise FormatError("SELF_LOOP", f"arc {u} -> {u}", lineno)
            arcs.append((u, v))
        else:
            requests.append(Request(u, v))
    if header is None:
        raise FormatError("MISSING_HEADER", "no 'p dedp' line")
    n, m, k, d, s = header
    if len(arcs) != m:
        raise FormatError("COUNT_MISMATCH", f"header says m={m}, found {len(arcs)} arc lines")
    if len(requests) != k:
        raise FormatError("COUNT_MISMATCH", f"header says k={k}, found {len(requests)} request lines")
    return Instance(Digraph.from_edges(n, arcs), tuple(requests), d, s)


def write_instance(inst: Instance) -> str:
    D = inst.graph
    if not D.is_contiguous():
        raise ValueError("vertex ids must be 1..n; relabel with compact() first")
    out = [f"p dedp {D.n} {D.m} {inst.k} {inst.d} {inst.s}"]
    out += [f"a {u} {v}" for u, v in D.sorted_edges()]
    out += [f"r {a} {b}" for a, b in inst.requests]
    return "\n".join(out) + "\n"


def compact(inst: Instance) -> tuple[Instance, dict[int, int]]:
    """Relabel vertices to ``1..n`` in increasing order; returns ``(instance, new -> old)``."""
    order = inst.graph.sorted_vertices()
    new = {old: i for i, old in enumerate(order, start=1)}
    graph = Digraph.from_edges(len(order), ((new[u], new[v]) for u, v in inst.graph.edges))
    reqs = tuple(Request(new[a], new[b]) for a, b in inst.requests)
    return Instance(graph, reqs, inst.d, inst.s), {i: old for old, i in new.items()}


def parse_solution(text: str) -> Solution | None:
    """Parse a solution file; ``None`` for an ``s no`` answer."""
    answer = None
    X: list[int] | None = None
    paths: dict[int, tuple[int, ...]] = {}
    for lineno, tok in _lines(text):
        kind = tok[0]
        if kind == "s":
            if len(tok) != 2 or tok[1] not in ("yes", "no"):
                raise FormatError("BAD_LINE", "expected 's yes' or 's no'", lineno)
            answer = tok[1] == "yes"
        elif kind == "x":
            X = _ints(tok[1:], lineno)
        elif kind == "q":
            vals = _ints(tok[1:], lineno)
            if len(vals) < 2:
                raise FormatError("BAD_LINE", "path line needs an index and a vertex", lineno)
            if vals[0] in paths:
                raise FormatError("DUPLICATE_PATH", f"second path for request {vals[0]}", lineno)
            paths[vals[0]] = tuple(vals[1:])
        else:
            raise FormatError("BAD_LINE", f"unrecognised line: {' '.join(tok)}", lineno)
    if answer is None:
        raise FormatError("MISSING_HEADER", "no 's' line")
    if not answer:
        return None
    if sorted(paths) != list(range(1, len(paths) + 1)):
        raise FormatError("BAD_INDEX", "path indices must be 1..k")
    return Solution(frozenset(X or ()), tuple(paths[i] for i in sorted(paths)))


def write_solution(sol: Solution | None) -> str:
    if sol is None:
        return "s no\n"
    out = ["s yes", " ".join(["x"] + [str(v) for v in sorted(sol.viable_set)])]
    for i, p in enumerate(sol.paths, start=1):
        out.append(" ".join(["q", str(i)] + [str(v) for v in p]))
    return "\n".join(out) + "\n"


def relabel_solution(sol: Solution, mapping: dict[int, int]) -> Solution:
    return Solution(
        frozenset(mapping[x] for x in sol.viable_set),
        tuple(tuple(mapping[x] for x in p) for p in sol.paths),
    )


def is_valid_path_for(D: Digraph, p: Sequence[int], req: Request) -> bool:
    return is_path(D, p) and p[0] == req.source and p[-1] == req.target

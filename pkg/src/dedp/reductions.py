"""Instance generators: the hardness constructions, request amplification, random corpora."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations
from math import ceil
from typing import Iterator

import numpy as np

from .digraph import Digraph, reach_from
from .instance import FormatError, Instance, Request, _ints, _lines, trivial_status, TrivialStatus
from .transform import blocked_counts, blocking_vertices


class GeneratorError(RuntimeError):
    """The requested generator flags could not be satisfied."""


@dataclass(frozen=True)
class DdpcInstance:
    """Directed disjoint paths with congestion: every vertex on at most ``congestion`` paths."""

    graph: Digraph
    requests: tuple[Request, ...]
    congestion: int

    def __post_init__(self):
        object.__setattr__(self, "requests", tuple(Request(*r) for r in self.requests))
        if self.congestion < 1:
            raise ValueError("congestion must be at least 1")

    @property
    def k(self) -> int:
        return len(self.requests)

    def as_dedp(self) -> Instance:
        """Same question posed as DEDP with ``d = n`` (no vertex may exceed the congestion)."""
        return Instance(self.graph, self.requests, self.graph.n, self.congestion)


@dataclass(frozen=True)
class UndirectedGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))


def _chain_length(n_base: int, alpha: Fraction) -> int:
    # smallest c >= 1 with c >= ceil(N - N^alpha), N = n_base + c + 3
    c = 1
    while True:
        n = n_base + c + 3
        need = ceil(n - n ** float(alpha) - 1e-12)
        if need <= c:
            return c
        c = need


def from_ddpc(src: DdpcInstance, alpha: float | Fraction, i: int) -> Instance:
    """Pad a DDPC instance with a congested chain so that d grows like n^alpha.

    Request ``i`` (1-based) is redirected through the chain to a fresh target, and
    ``congestion`` copies of a new request are forced along the whole chain.
    """
    alpha = Fraction(alpha).limit_denominator(10**6)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if not 1 <= i <= src.k:
        raise ValueError(f"request index {i} outside 1..{src.k}")
    s = src.congestion
    nb = src.graph.n
    if not src.graph.is_contiguous():
        raise ValueError("source digraph must have vertices 1..n")
    c = _chain_length(nb, alpha)
    chain = list(range(nb + 1, nb + c + 1))
    t_new, s_extra, t_extra = nb + c + 1, nb + c + 2, nb + c + 3
    si, ti = src.requests[i - 1]
    edges = set(src.graph.edges)
    edges.update(zip(chain, chain[1:]))
    edges.update({(ti, chain[0]), (s_extra, chain[0]), (chain[-1], t_extra), (chain[-1], t_new)})
    reqs = list(src.requests)
    reqs[i - 1] = Request(si, t_new)
    reqs += [Request(s_extra, t_extra)] * s
    n = nb + c + 3
    return Instance(Digraph.from_edges(n, edges), tuple(reqs), n - c, s)


def independent_set_offset(G: UndirectedGraph, s: int) -> int:
    """Vertices of the construction that are viable in every certificate."""
    k = s * G.n + len(G.edges)
    return len(G.edges) + (1 if k <= s else 0)


def from_independent_set(G: UndirectedGraph, d: int, s: int) -> Instance:
    """Single-source DAG whose viable sets encode independent sets of ``G``.

    Vertex ids: ``1..n`` for G, ``n+1`` the root, then one vertex per edge in
    sorted edge order.  Every edge vertex lies on exactly one path, so the DEDP
    parameter is ``d`` plus those always-viable vertices.
    """
    if s < 1:
        raise ValueError("construction needs s >= 1 (with s = 0 the vertex requests vanish)")
    if not 0 <= d <= G.n:
        raise ValueError(f"d must lie in [0, {G.n}]")
    root = G.n + 1
    edge_ids = {e: G.n + 2 + j for j, e in enumerate(sorted(G.edges))}
    arcs = [(root, v) for v in range(1, G.n + 1)]
    for (u, w), ve in edge_ids.items():
        arcs += [(u, ve), (w, ve)]
    reqs = [Request(root, v) for v in range(1, G.n + 1) for _ in range(s)]
    reqs += [Request(root, ve) for ve in edge_ids.values()]
    n = G.n + 1 + len(edge_ids)
    return Instance(Digraph.from_edges(n, arcs), tuple(reqs), d + independent_set_offset(G, s), s)


def amplify(inst: Instance, s_target: int) -> Instance:
    """Raise congestion from 0 to ``s_target`` by copying every request ``k*d*s + 1`` times."""
    if inst.s != 0:
        raise ValueError("amplify expects an instance with s = 0")
    if s_target < 1:
        raise ValueError("s_target must be positive")
    copies = inst.k * inst.d * s_target + 1
    reqs = tuple(r for r in inst.requests for _ in range(copies))
    return Instance(inst.graph, reqs, inst.d, s_target)


# ------------------------------------------------------------------ random corpora


def random_digraph(n: int, m: int, rng: random.Random, acyclic: bool = False) -> tuple[Digraph, list[int]]:
    """Uniform ``m``-edge digraph; with ``acyclic`` edges follow a random order.

    Returns the digraph and the vertex order used (identity order when cyclic).
    """
    order = list(range(1, n + 1))
    if acyclic:
        rng.shuffle(order)
        pool = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)]
    else:
        pool = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    if m > len(pool):
        raise ValueError(f"m={m} exceeds the {len(pool)} possible arcs")
    return Digraph.from_edges(n, rng.sample(pool, m)), order


def random_instance(
    n: int,
    m: int,
    k: int,
    d: int,
    s: int,
    seed: int,
    acyclic: bool = False,
    ensure_connected: bool = False,
    ensure_clean: bool = False,
    retries: int = 50,
) -> Instance:
    """Seeded random instance.

    ``ensure_connected`` threads a random path through every disconnected
    request; ``ensure_clean`` gives each blocked request a relay through a
    different non-terminal until no blocking vertex remains.  Both may add arcs
    beyond ``m``.
    """
    if not 0 <= d <= n:
        raise ValueError("need 0 <= d <= n")
    if n < 1:
        raise ValueError("need n >= 1")
    rng = random.Random(seed)
    for _ in range(retries):
        D, order = random_digraph(n, m, rng, acyclic)
        pos = {v: i for i, v in enumerate(order)}
        reqs = []
        for _ in range(k):
            a, b = rng.randrange(1, n + 1), rng.randrange(1, n + 1)
            if acyclic and pos[a] > pos[b]:
                a, b = b, a
            reqs.append(Request(a, b))
        edges = set(D.edges)
        if ensure_connected:
            edges = _connect(n, edges, reqs, pos, acyclic, rng)
        if ensure_clean:
            edges = _make_clean(n, edges, reqs, s, pos, acyclic, rng)
            if edges is None:
                continue
        inst = Instance(Digraph.from_edges(n, edges), tuple(reqs), d, s)
        if ensure_connected and trivial_status(inst) is TrivialStatus.NEGATIVE_TRIVIAL:
            continue
        if ensure_clean and blocking_vertices(inst.graph, inst.requests, s):
            continue
        return inst
    raise GeneratorError(f"no instance satisfying the flags after {retries} attempts")


def _connect(n, edges, reqs, pos, acyclic, rng):
    for a, b in reqs:
        D = Digraph.from_edges(n, edges)
        if a == b or b in reach_from(D, (a,)):
            continue
        inner = [v for v in range(1, n + 1) if v not in (a, b)]
        if acyclic:
            inner = [v for v in inner if pos[a] < pos[v] < pos[b]]
        hops = rng.sample(inner, rng.randint(0, min(3, len(inner))))
        if acyclic:
            hops.sort(key=pos.__getitem__)
        walk = [a, *hops, b]
        edges |= set(zip(walk, walk[1:]))
    return edges


def _make_clean(n, edges, reqs, s, pos, acyclic, rng):
    terms = {x for r in reqs for x in r}
    for _ in range(4):
        D = Digraph.from_edges(n, edges)
        blocked = blocked_counts(D, reqs)
        bad = {v: idx for v, idx in blocked.items() if len(idx) >= s + 1}
        if not bad:
            return edges
        for v, idx in sorted(bad.items()):
            for i in idx:
                a, b = reqs[i]
                relays = [x for x in range(1, n + 1) if x not in terms and x != v]
                if acyclic:
                    relays = [x for x in relays if pos[a] < pos[x] < pos[b]]
                if relays:
                    r = rng.choice(relays)
                    edges |= {(a, r), (r, b)}
                elif a != b and (not acyclic or pos[a] < pos[b]):
                    edges.add((a, b))
                else:
                    return None
    return None


def large_clean_instance(k: int, d: int, s: int, seed: int, density: int = 2) -> Instance:
    """Clean connected instance whose non-terminal count reaches ``d 2^(k-s) C(k,s)``."""
    from .kernel import kernel_bound_core

    bound = kernel_bound_core(k, d, s)
    n = bound + 2 * k
    inst = random_instance(n, density * n, k, d, s, seed, ensure_connected=True, ensure_clean=True)
    if len(inst.graph.vertices - inst.terminals) < bound:
        raise GeneratorError("too few non-terminals")
    return inst


def random_ddpc(n: int, m: int, k: int, congestion: int, seed: int, acyclic: bool = False) -> DdpcInstance:
    rng = random.Random(seed)
    D, order = random_digraph(n, m, rng, acyclic)
    pos = {v: i for i, v in enumerate(order)}
    reqs = []
    for _ in range(k):
        a, b = rng.sample(range(1, n + 1), 2) if n > 1 else (1, 1)
        if acyclic and pos[a] > pos[b]:
            a, b = b, a
        reqs.append(Request(a, b))
    return DdpcInstance(D, tuple(reqs), congestion)


def random_undirected(n: int, p: float, seed: int) -> UndirectedGraph:
    rng = random.Random(seed)
    return UndirectedGraph(n, frozenset(e for e in combinations(range(1, n + 1), 2) if rng.random() < p))


# ------------------------------------------------------------------ exhaustive enumeration


def enumerate_digraphs(n: int) -> list[Digraph]:
    """One representative (the minimal edge code) per isomorphism class on ``n`` vertices."""
    return list(_enumerate_digraphs(n))


@lru_cache(maxsize=None)
def _enumerate_digraphs(n: int) -> tuple[Digraph, ...]:
    if n <= 1:
        return (Digraph.from_edges(n, []),)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    bit = {p: i for i, p in enumerate(pairs)}
    nb = len(pairs)
    codes = np.arange(1 << nb, dtype=np.int64)
    best = codes.copy()
    chunk = 5
    chunks = [(lo, min(lo + chunk, nb)) for lo in range(0, nb, chunk)]
    for perm in permutations(range(n)):
        target = [bit[(perm[u], perm[v])] for u, v in pairs]
        out = np.zeros_like(codes)
        for lo, hi in chunks:
            table = np.zeros(1 << (hi - lo), dtype=np.int64)
            for j in range(hi - lo):
                table[(np.arange(1 << (hi - lo)) >> j) & 1 == 1] |= 1 << target[lo + j]
            out |= table[(codes >> lo) & ((1 << (hi - lo)) - 1)]
        np.minimum(best, out, out=best)
    reps = np.unique(best)
    return tuple(
        Digraph.from_edges(n, [(u + 1, v + 1) for (u, v), i in bit.items() if (int(code) >> i) & 1])
        for code in reps
    )


def enumerate_request_sets(n: int, k_max: int) -> Iterator[tuple[Request, ...]]:
    """All request multisets of size ``0..k_max`` over vertices ``1..n``, canonically ordered."""
    pairs = [Request(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    for k in range(k_max + 1):
        yield from combinations_with_replacement(pairs, k)


# ------------------------------------------------------------------ file formats


def parse_ddpc(text: str) -> DdpcInstance:
    header = None
    arcs, reqs = [], []
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if len(tok) != 6 or tok[1] != "ddpc":
                raise FormatError("BAD_HEADER", "expected 'p ddpc n m k s'", lineno)
            header = _ints(tok[2:], lineno)
            continue
        if header is None:
            raise FormatError("MISSING_HEADER", "data line before header", lineno)
        if tok[0] not in ("a", "r") or len(tok) != 3:
            raise FormatError("BAD_LINE", f"unrecognised line: {' '.join(tok)}", lineno)
        u, v = _ints(tok[1:], lineno)
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise FormatError("VERTEX_RANGE", f"vertex outside [1, {header[0]}]", lineno)
        if tok[0] == "a":
            if u == v:
                raise FormatError("SELF_LOOP", f"arc {u} -> {u}", lineno)
            arcs.append((u, v))
        else:
            reqs.append(Request(u, v))
    if header is None:
        raise FormatError("MISSING_HEADER", "no 'p ddpc' line")
    n, m, k, s = header
    if len(arcs) != m or len(reqs) != k:
        raise FormatError("COUNT_MISMATCH", "arc or request count differs from header")
    return DdpcInstance(Digraph.from_edges(n, arcs), tuple(reqs), s)


def write_ddpc(src: DdpcInstance) -> str:
    D = src.graph
    out = [f"p ddpc {D.n} {D.m} {src.k} {src.congestion}"]
    out += [f"a {u} {v}" for u, v in D.sorted_edges()]
    out += [f"r {a} {b}" for a, b in src.requests]
    return "\n".join(out) + "\n"


def parse_ug(text: str) -> UndirectedGraph:
    header = None
    edges = []
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "ug":
                raise FormatError("BAD_HEADER", "expected 'p ug n m'", lineno)
            header = _ints(tok[2:], lineno)
            continue
        if header is None:
            raise FormatError("MISSING_HEADER", "data line before header", lineno)
        if tok[0] != "e" or len(tok) != 3:
            raise FormatError("BAD_LINE", f"unrecognised line: {' '.join(tok)}", lineno)
        u, v = _ints(tok[1:], lineno)
        if u == v:
            raise FormatError("SELF_LOOP", f"edge {u} - {u}", lineno)
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise FormatError("VERTEX_RANGE", f"vertex outside [1, {header[0]}]", lineno)
        edges.append((u, v))
    if header is None:
        raise FormatError("MISSING_HEADER", "no 'p ug' line")
    if len(edges) != header[1]:
        raise FormatError("COUNT_MISMATCH", "edge count differs from header")
    return UndirectedGraph(header[0], frozenset(edges))


def write_ug(G: UndirectedGraph) -> str:
    out = [f"p ug {G.n} {len(G.edges)}"] + [f"e {u} {v}" for u, v in sorted(G.edges)]
    return "\n".join(out) + "\n"

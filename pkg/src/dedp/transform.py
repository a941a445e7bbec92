"""Bypassing vertices with provenance, blocking vertices, cleaning, path lifting."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .digraph import Digraph, Edge, Path, reach_from, shorten_walk
from .instance import Instance, Request

log = logging.getLogger(__name__)


class TooFewVerticesError(ValueError):
    """Cleaning left fewer than ``d`` vertices, so the instance is negative."""


@dataclass(frozen=True, eq=False)
class BypassTrace:
    """Maps each edge of a reduced digraph to the bypassed vertices it contracts.

    For every reduced edge ``(u, v)`` the sequence ``u, *expansion[(u, v)], v`` is a
    walk in ``original``.  Treat ``expansion`` as read-only.
    """

    original: Digraph
    bypassed: tuple[int, ...]
    expansion: dict[Edge, tuple[int, ...]]

    @classmethod
    def identity(cls, D: Digraph) -> "BypassTrace":
        return cls(D, (), {e: () for e in D.edges})

    def graph(self) -> Digraph:
        """The reduced digraph this trace describes."""
        return Digraph(self.original.vertices - frozenset(self.bypassed), frozenset(self.expansion))


def _expansion_key(seq: tuple[int, ...], terminals: frozenset[int]):
    return (sum(1 for x in seq if x not in terminals), len(seq), seq)


def bypass(
    D: Digraph, v: int, trace: BypassTrace | None = None, terminals: Iterable[int] = ()
) -> tuple[Digraph, BypassTrace]:
    """``D / v``: delete ``v`` and join every in-neighbour to every out-neighbour."""
    D.check_vertex(v)
    return bypass_set(D, (v,), trace, terminals, order=(v,))


def bypass_set(
    D: Digraph,
    B: Iterable[int],
    trace: BypassTrace | None = None,
    terminals: Iterable[int] = (),
    order: Sequence[int] | None = None,
) -> tuple[Digraph, BypassTrace]:
    """``D / B``, bypassing in ascending id order unless ``order`` is given.

    When a shortcut edge already exists, the expansion with fewer non-terminal
    vertices wins, then the shorter one, then the lexicographically smaller one.
    """
    B = frozenset(B)
    D.check_vertex(*B)
    if trace is None:
        trace = BypassTrace.identity(D)
    elif frozenset(trace.expansion) != D.edges:
        raise ValueError("trace does not describe the given digraph")
    seq = sorted(B) if order is None else list(order)
    if frozenset(seq) != B or len(seq) != len(B):
        raise ValueError("order must list every vertex of B exactly once")
    if not seq:
        return D, trace
    terminals = frozenset(terminals)

    succ = {x: set(D.out_neighbors(x)) for x in D.vertices}
    pred = {x: set(D.in_neighbors(x)) for x in D.vertices}
    exp = dict(trace.expansion)
    for v in seq:
        ins, outs = pred.pop(v), succ.pop(v)
        for u in ins:
            succ[u].discard(v)
        for w in outs:
            pred[w].discard(v)
        for u in ins:
            head = exp.pop((u, v))
            for w in outs:
                if u == w:
                    continue
                cand = head + (v,) + exp[(v, w)]
                old = exp.get((u, w))
                if old is None or _expansion_key(cand, terminals) < _expansion_key(old, terminals):
                    exp[(u, w)] = cand
                succ[u].add(w)
                pred[w].add(u)
        for w in outs:
            exp.pop((v, w), None)
    vertices = D.vertices - B
    edges = frozenset((u, w) for u, ws in succ.items() for w in ws)
    new_trace = BypassTrace(trace.original, trace.bypassed + tuple(seq), exp)
    return Digraph(vertices, edges), new_trace


def lift_path(trace: BypassTrace, p: Sequence[int]) -> Path:
    """Expand a reduced-graph path into a path of the original digraph."""
    if not p:
        raise ValueError("empty path")
    walk = [p[0]]
    for a, b in zip(p, p[1:]):
        try:
            walk.extend(trace.expansion[(a, b)])
        except KeyError:
            raise ValueError(f"edge ({a}, {b}) is not in the traced digraph") from None
        walk.append(b)
    if len(p) == 1 and p[0] not in trace.original.vertices:
        raise ValueError(f"vertex {p[0]} is not in the original digraph")
    return shorten_walk(trace.original, walk)


def blocked_requests(D: Digraph, I: Sequence[Request], X: Iterable[int]) -> list[int]:
    """Indices of requests with no path in ``D - X``.

    A request with an endpoint in ``X`` counts as blocked.
    """
    X = frozenset(X)
    D.check_vertex(*X)
    reach: dict[int, set[int]] = {}
    out = []
    for i, (a, b) in enumerate(I):
        if a not in reach:
            reach[a] = reach_from(D, (a,), X)
        if b not in reach[a]:
            out.append(i)
    return out


def _nonterminal_vertices(D: Digraph, I: Sequence[Request]) -> list[int]:
    terms = {x for r in I for x in r}
    return sorted(D.vertices - terms)


def blocked_counts(D: Digraph, I: Sequence[Request]) -> dict[int, list[int]]:
    """For each non-terminal ``v``, the indices of requests blocked by ``{v}``."""
    base = {a: reach_from(D, (a,)) for a in {r.source for r in I}}
    out = {}
    for v in _nonterminal_vertices(D, I):
        # v can only block requests whose every route passes it
        candidates = [i for i, (a, b) in enumerate(I) if a != b and v in base[a] and b in base[a]]
        if not candidates:
            out[v] = []
            continue
        reach: dict[int, set[int]] = {}
        blocked = []
        for i in candidates:
            a, b = I[i]
            if a not in reach:
                reach[a] = reach_from(D, (a,), (v,))
            if b not in reach[a]:
                blocked.append(i)
        out[v] = blocked
    return out


def blocking_vertices(D: Digraph, I: Sequence[Request], s: int) -> frozenset[int]:
    """Non-terminal vertices whose removal disconnects at least ``s + 1`` requests."""
    return frozenset(v for v, blocked in blocked_counts(D, I).items() if len(blocked) >= s + 1)


def clean(inst: Instance, trace: BypassTrace | None = None) -> tuple[Instance, BypassTrace]:
    """Bypass every blocking vertex; the result has none left."""
    terms = inst.terminals
    B = blocking_vertices(inst.graph, inst.requests, inst.s)
    D, trace = bypass_set(inst.graph, B, trace, terms)
    # Bypassing preserves reachability among survivors, so no new blockers can
    # appear; the loop only guards that argument.
    while True:
        again = blocking_vertices(D, inst.requests, inst.s)
        if not again:
            break
        log.warning("cleaning produced new blocking vertices %s", sorted(again))
        D, trace = bypass_set(D, again, trace, terms)
    if inst.d > D.n:
        raise TooFewVerticesError(
            f"{D.n} vertices survive cleaning but d = {inst.d}; blocking vertices are never viable"
        )
    return Instance(D, inst.requests, inst.d, inst.s), trace


def dump_trace(trace: BypassTrace) -> str:
    lines = []
    for (u, v) in sorted(trace.expansion):
        body = " ".join(str(x) for x in trace.expansion[(u, v)])
        lines.append(f"e {u} {v} : {body}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")

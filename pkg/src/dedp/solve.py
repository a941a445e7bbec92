"""Exact solvers: the XP algorithm over d-subsets and a path-enumeration oracle."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Sequence

from .digraph import Digraph, Path, reachable_avoiding, shorten_walk, shortest_path
from .instance import Instance, Request, Solution


class OracleLimitError(RuntimeError):
    """Path enumeration exceeded the configured cap."""


@dataclass(frozen=True)
class SplitGraph:
    """``D`` with every vertex of ``X`` replaced by ``s`` copies sharing its neighbourhood."""

    graph: Digraph
    copy_of: dict[int, int]  # every vertex of ``graph`` -> original vertex
    copies: dict[int, tuple[int, ...]]  # original in X -> its copies

    @property
    def x_prime(self) -> frozenset[int]:
        return frozenset(c for cs in self.copies.values() for c in cs)


def split_for_congestion(D: Digraph, X: Iterable[int], s: int) -> SplitGraph:
    if s < 2:
        raise ValueError("splitting needs s >= 2")
    X = sorted(set(X))
    D.check_vertex(*X)
    nxt = max(D.vertices, default=0) + 1
    copies: dict[int, tuple[int, ...]] = {}
    for x in X:
        copies[x] = tuple(range(nxt, nxt + s))
        nxt += s
    copy_of = {v: v for v in D.vertices if v not in copies}
    for x, cs in copies.items():
        for c in cs:
            copy_of[c] = x

    def images(v):
        return copies.get(v, (v,))

    edges = set()
    for u, v in D.edges:
        for a in images(u):
            for b in images(v):
                edges.add((a, b))
    return SplitGraph(Digraph(frozenset(copy_of), frozenset(edges)), copy_of, copies)


def _search_assignment(
    graph: Digraph,
    requests: Sequence[Request],
    groups: Sequence[tuple[int, ...]],
    group_of: dict[int, int],
    labelings,
) -> list[Path] | None:
    """First labelling of the guarded vertices under which every request routes.

    ``groups[g]`` are the interchangeable vertices standing for the ``g``-th
    vertex of X; a request endpoint inside group ``g`` may use any member
    labelled with that request.  ``labelings`` yields one label tuple per group.
    """
    guarded = frozenset(v for g in groups for v in g)
    memo: dict[tuple[int, frozenset[int]], Path | None] = {}
    for labels in labelings:
        own: dict[int, list[int]] = {}
        for g, lab in zip(groups, labels):
            for v, i in zip(g, lab):
                own.setdefault(i, []).append(v)
        paths = []
        for i, (a, b) in enumerate(requests):
            mine = frozenset(own.get(i, ()))
            key = (i, mine)
            if key not in memo:
                srcs = [v for v in groups[group_of[a]] if v in mine] if a in group_of else [a]
                tgts = [v for v in groups[group_of[b]] if v in mine] if b in group_of else [b]
                memo[key] = shortest_path(graph, srcs, tgts, guarded - mine) if srcs and tgts else None
            if memo[key] is None:
                break
            paths.append(memo[key])
        else:
            return paths
    return None


def is_one_viable(D: Digraph, I: Sequence[Request], X: Iterable[int]) -> tuple[Path, ...] | None:
    """Paths certifying that every vertex of ``X`` lies on at most one of them.

    Tries assignments ``X -> requests`` in lexicographic order; request ``i`` must be
    routable in ``D - (X minus X_i)``.
    """
    X = sorted(set(X))
    D.check_vertex(*X)
    k = len(I)
    if k == 0:
        return ()
    groups = [(x,) for x in X]
    group_of = {x: g for g, x in enumerate(X)}
    labelings = (tuple((lab,) for lab in labels) for labels in product(range(k), repeat=len(X)))
    paths = _search_assignment(D, I, groups, group_of, labelings)
    return None if paths is None else tuple(paths)


def s_viable_paths(D: Digraph, I: Sequence[Request], X: Iterable[int], s: int) -> tuple[Path, ...] | None:
    """Certificate that every vertex of ``X`` lies on at most ``s`` paths, if one exists."""
    X = sorted(set(X))
    if s == 0:
        paths = [shortest_path(D, (a,), (b,), X) for a, b in I]
        return None if any(p is None for p in paths) else tuple(paths)
    if s == 1:
        return is_one_viable(D, I, X)
    k = len(I)
    if k == 0:
        return ()
    split = split_for_congestion(D, X, s)
    groups = [split.copies[x] for x in X]
    group_of = {x: g for g, x in enumerate(X)}
    # copies are interchangeable: a non-decreasing label tuple per original suffices
    per_vertex = list(combinations_with_replacement(range(k), s))
    labelings = product(per_vertex, repeat=len(X))
    found = _search_assignment(split.graph, I, groups, group_of, labelings)
    if found is None:
        return None
    return tuple(shorten_walk(D, [split.copy_of[v] for v in p]) for p in found)


def solve_xp(inst: Instance) -> Solution | None:
    """Try every d-subset in lexicographic order; return the first viable one."""
    D, I = inst.graph, inst.requests
    if any(not reachable_avoiding(D, a, b, ()) for a, b in I):
        return None
    for X in combinations(D.sorted_vertices(), inst.d):
        paths = s_viable_paths(D, I, X, inst.s)
        if paths is not None:
            return Solution(frozenset(X), paths)
    return None


# ------------------------------------------------------------------ oracle


def simple_paths(D: Digraph, a: int, b: int, limit: int) -> list[Path]:
    """All simple ``a -> b`` paths in lexicographic order."""
    if a == b:
        return [(a,)]
    out: list[Path] = []
    path = [a]
    on_path = {a}
    stack = [iter(D.out_neighbors(a))]
    while stack:
        w = next(stack[-1], None)
        if w is None:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if w in on_path:
            continue
        if w == b:
            out.append(tuple(path) + (b,))
            if len(out) > limit:
                raise OracleLimitError(f"more than {limit} simple paths from {a} to {b}")
            continue
        path.append(w)
        on_path.add(w)
        stack.append(iter(D.out_neighbors(w)))
    return out


def _minimal_routes(D: Digraph, a: int, b: int, limit: int) -> list[Path]:
    # A path whose vertex set contains another's is never needed.
    by_set: dict[frozenset[int], Path] = {}
    for p in simple_paths(D, a, b, limit):
        by_set.setdefault(frozenset(p), p)
    sets = sorted(by_set, key=len)
    keep = []
    for i, s1 in enumerate(sets):
        if not any(s0 < s1 for s0 in sets[:i]):
            keep.append(by_set[s1])
    return sorted(keep)


def oracle(inst: Instance, limit: int = 100_000) -> Solution | None:
    """Decide the instance by exhaustive search over path tuples.

    Returns the first satisfying collection found, with the maximal viable set
    (every vertex on at most ``s`` paths).  Raises :class:`OracleLimitError` when a
    request has more than ``limit`` simple paths.
    """
    D, I, s = inst.graph, inst.requests, inst.s
    routes_for: dict[Request, list[Path]] = {}
    for r in I:
        if r not in routes_for:
            routes_for[r] = _minimal_routes(D, r.source, r.target, limit)
        if not routes_for[r]:
            return None
    allowance = D.n - inst.d  # vertices allowed above s
    count: Counter = Counter()
    chosen: list[Path] = []

    def extend(i: int, over: int) -> bool:
        if i == len(I):
            return True
        for p in routes_for[I[i]]:
            added = 0
            for x in p:
                count[x] += 1
                if count[x] == s + 1:
                    added += 1
            if over + added <= allowance:
                chosen.append(p)
                if extend(i + 1, over + added):
                    return True
                chosen.pop()
            for x in p:
                count[x] -= 1
        return False

    if not extend(0, 0):
        return None
    X = frozenset(v for v in D.vertices if count[v] <= s)
    return Solution(X, tuple(chosen))

"""Directed graphs and the connectivity primitives used throughout the package.

Vertices are positive integers.  A :class:`Digraph` produced by the file
parser or :meth:`Digraph.from_edges` has vertex set ``{1..n}``; graphs derived
by bypassing or deleting vertices keep the surviving original ids, so the
vertex set is stored explicitly.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Edge = tuple[int, int]
Path = tuple[int, ...]


@dataclass(frozen=True)
class Digraph:
    """Simple digraph: no self-loops, no parallel edges, 2-cycles allowed."""

    vertices: frozenset[int]
    edges: frozenset[Edge]
    _succ: dict = field(init=False, repr=False, compare=False, hash=False)
    _pred: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        succ: dict[int, list[int]] = {v: [] for v in self.vertices}
        pred: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in succ or v not in succ:
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            succ[u].append(v)
            pred[v].append(u)
        object.__setattr__(self, "_succ", {v: tuple(sorted(ws)) for v, ws in succ.items()})
        object.__setattr__(self, "_pred", {v: tuple(sorted(ws)) for v, ws in pred.items()})

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Digraph":
        return cls(frozenset(range(1, n + 1)), frozenset((int(u), int(v)) for u, v in edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._succ[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._pred[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def check_vertex(self, *vs: int) -> None:
        for v in vs:
            if v not in self.vertices:
                raise ValueError(f"vertex {v} is not in the digraph")

    def remove(self, removed: Iterable[int]) -> "Digraph":
        gone = frozenset(removed)
        if not gone:
            return self
        return Digraph(
            self.vertices - gone,
            frozenset(e for e in self.edges if e[0] not in gone and e[1] not in gone),
        )

    def induced(self, keep: Iterable[int]) -> "Digraph":
        return self.remove(self.vertices - frozenset(keep))

    def is_contiguous(self) -> bool:
        """True when the vertex set is exactly ``{1..n}``."""
        return self.vertices == frozenset(range(1, self.n + 1))


def reach_from(D: Digraph, sources: Iterable[int], avoid: Iterable[int] = ()) -> set[int]:
    """Vertices reachable from ``sources`` in ``D - avoid`` (sources in ``avoid`` are dropped)."""
    avoid = set(avoid)
    seen = {v for v in sources if v not in avoid}
    queue = deque(seen)
    succ = D._succ
    while queue:
        u = queue.popleft()
        for w in succ[u]:
            if w not in seen and w not in avoid:
                seen.add(w)
                queue.append(w)
    return seen


def reach_to(D: Digraph, targets: Iterable[int], avoid: Iterable[int] = ()) -> set[int]:
    """Vertices that reach some vertex of ``targets`` in ``D - avoid``."""
    avoid = set(avoid)
    seen = {v for v in targets if v not in avoid}
    queue = deque(seen)
    pred = D._pred
    while queue:
        u = queue.popleft()
        for w in pred[u]:
            if w not in seen and w not in avoid:
                seen.add(w)
                queue.append(w)
    return seen


def reachable(D: Digraph, u: int, v: int) -> bool:
    D.check_vertex(u, v)
    return reachable_avoiding(D, u, v, ())


def reachable_avoiding(D: Digraph, u: int, v: int, avoid: Iterable[int]) -> bool:
    """Is there a ``u -> v`` path in ``D - avoid``?  False if either endpoint is avoided."""
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    if u in avoid or v in avoid:
        return False
    if u == v:
        return True
    seen = {u}
    stack = [u]
    succ = D._succ
    while stack:
        x = stack.pop()
        for w in succ[x]:
            if w == v:
                return True
            if w not in seen and w not in avoid:
                seen.add(w)
                stack.append(w)
    return False


def is_separator(D: Digraph, X: Iterable[int], u: int, v: int) -> bool:
    X = frozenset(X)
    D.check_vertex(u, v)
    if u in X or v in X:
        raise ValueError("separator must not contain the endpoints")
    return not reachable_avoiding(D, u, v, X)


def shortest_path(
    D: Digraph, sources: Iterable[int], targets: Iterable[int], avoid: Iterable[int] = ()
) -> Path | None:
    """Fewest-vertex path from any source to any target in ``D - avoid``.

    Ties are broken towards the lexicographically smallest vertex sequence.
    """
    return _best_path(D, sources, targets, avoid, terminals=None)


def min_nonterminal_path(
    D: Digraph, u: int, v: int, terminals: Iterable[int], avoid: Iterable[int] = ()
) -> Path | None:
    """``u -> v`` path with the fewest non-terminal vertices.

    Secondary key is the number of vertices, then the vertex sequence.
    """
    D.check_vertex(u, v)
    return _best_path(D, (u,), (v,), avoid, terminals=frozenset(terminals))


def path_cost(path: Sequence[int], terminals: Iterable[int]) -> int:
    terminals = set(terminals)
    return sum(1 for x in path if x not in terminals)


def _best_path(D, sources, targets, avoid, terminals):
    # Backward Dijkstra with lexicographic (non-terminals, vertices) cost, then a
    # greedy forward walk choosing the smallest admissible successor.  All optimal
    # paths have the same length, so the greedy walk is lexicographically least.
    avoid = set(avoid)
    sources = sorted(x for x in set(sources) if x not in avoid)
    targets = {x for x in targets if x not in avoid}
    if not sources or not targets:
        return None
    if terminals is None:
        return _bfs_path(D, sources, targets, avoid)

    def weight(x):
        return (0 if terminals is None or x in terminals else 1, 1)

    dist: dict[int, tuple[int, int]] = {}
    heap = [(weight(t), t) for t in targets]
    heapq.heapify(heap)
    pred = D._pred
    while heap:
        d, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d
        for w in pred[x]:
            if w in dist or w in avoid:
                continue
            ww = weight(w)
            heapq.heappush(heap, ((d[0] + ww[0], d[1] + ww[1]), w))

    reached = [x for x in sources if x in dist]
    if not reached:
        return None
    start = min(reached, key=lambda x: (dist[x], x))
    path = [start]
    x = start
    succ = D._succ
    while x not in targets or dist[x] != weight(x):
        wx = weight(x)
        want = (dist[x][0] - wx[0], dist[x][1] - wx[1])
        x = next(w for w in succ[x] if dist.get(w) == want)
        path.append(x)
    return tuple(path)


def _bfs_path(D, sources, targets, avoid):
    # unit weights: backward BFS layers, then the same greedy forward walk
    dist = {t: 0 for t in targets}
    queue = deque(targets)
    pred = D._pred
    while queue:
        x = queue.popleft()
        for w in pred[x]:
            if w not in dist and w not in avoid:
                dist[w] = dist[x] + 1
                queue.append(w)
    reached = [x for x in sources if x in dist]
    if not reached:
        return None
    x = min(reached, key=lambda v: (dist[v], v))
    path = [x]
    succ = D._succ
    while dist[x]:
        x = next(w for w in succ[x] if dist.get(w) == dist[x] - 1)
        path.append(x)
    return tuple(path)


def max_vertex_disjoint_paths(D: Digraph, u: int, v: int) -> tuple[int, list[Path]]:
    """Maximum set of internally vertex-disjoint ``u -> v`` paths.

    Unit-capacity augmenting paths on the split graph, where every vertex other
    than ``u`` and ``v`` becomes an arc ``x_in -> x_out`` of capacity one.
    """
    D.check_vertex(u, v)
    if u == v:
        raise ValueError("endpoints must differ")
    if D.has_edge(u, v):
        raise ValueError(f"edge ({u}, {v}) is present; Menger's bound does not apply")

    def out_node(x):
        return (x, 0) if x in (u, v) else (x, 1)

    def in_node(x):
        return (x, 0)

    cap: dict[tuple, dict[tuple, int]] = {}
    arcs: list[tuple[tuple, tuple]] = []

    def add_arc(a, b):
        cap.setdefault(a, {})[b] = 1
        cap.setdefault(b, {}).setdefault(a, 0)
        arcs.append((a, b))

    for x in D.sorted_vertices():
        if x not in (u, v):
            add_arc(in_node(x), out_node(x))
    for a, b in D.sorted_edges():
        add_arc(out_node(a), in_node(b))
    nbrs = {a: sorted(bs) for a, bs in cap.items()}

    source, sink = out_node(u), in_node(v)
    flow = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b in nbrs.get(a, ()):
                if b not in parent and cap[a][b] > 0:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            break
        b = sink
        while parent[b] is not None:
            a = parent[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
        flow += 1

    # saturated original edge arcs carry one unit each
    used: dict[int, list[int]] = {}
    for a, b in D.sorted_edges():
        if cap[out_node(a)][in_node(b)] == 0:
            used.setdefault(a, []).append(b)
    paths = []
    for _ in range(flow):
        walk = [u]
        x = u
        while x != v:
            x = used[x].pop(0)
            walk.append(x)
        paths.append(shorten_walk(D, walk))
    return flow, paths


def weak_components(D: Digraph, restrict_to: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Weak components of ``D[restrict_to]``, sorted by smallest member."""
    keep = set(D.vertices if restrict_to is None else restrict_to)
    D.check_vertex(*keep)
    seen: set[int] = set()
    comps = []
    for r in sorted(keep):
        if r in seen:
            continue
        comp = {r}
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for w in D._succ[x] + D._pred[x]:
                if w in keep and w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_walk(D: Digraph, walk: Sequence[int]) -> bool:
    if not walk or any(x not in D.vertices for x in walk):
        return False
    return all((a, b) in D.edges for a, b in zip(walk, walk[1:]))


def is_path(D: Digraph, path: Sequence[int]) -> bool:
    return is_walk(D, path) and len(set(path)) == len(path)


def shorten_walk(D: Digraph, walk: Sequence[int]) -> Path:
    """Excise cycles from a walk, keeping its endpoints.

    The result is a path whose vertex set is contained in the walk's.
    """
    if not is_walk(D, walk):
        raise ValueError(f"not a walk in the digraph: {list(walk)}")
    out: list[int] = []
    pos: dict[int, int] = {}
    for x in walk:
        if x in pos:
            for y in out[pos[x] + 1:]:
                del pos[y]
            del out[pos[x] + 1:]
        else:
            pos[x] = len(out)
            out.append(x)
    return tuple(out)

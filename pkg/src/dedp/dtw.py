"""Guarded sets, arboreal decompositions and the limited-collections check."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .digraph import Digraph, reach_from, reach_to, weak_components
from .instance import FormatError, _ints, _lines


class DecompositionError(ValueError):
    """Raised for structural defects; ``kind`` is ``"structural"`` or ``"guard"``."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


def return_vertices(D: Digraph, S: Iterable[int], Z: Iterable[int] = ()) -> frozenset[int]:
    """Vertices outside ``S`` and ``Z`` lying on a walk in ``D - Z`` that leaves ``S`` and returns."""
    S, Z = frozenset(S), frozenset(Z)
    if not S:
        return frozenset()
    return frozenset((reach_from(D, S, Z) & reach_to(D, S, Z)) - S)


def is_guarded(D: Digraph, S: Iterable[int], Z: Iterable[int]) -> bool:
    """No walk in ``D - Z`` leaves ``S`` and comes back to it."""
    S, Z = frozenset(S), frozenset(Z)
    if S & Z:
        raise ValueError("S and Z must be disjoint")
    D.check_vertex(*S, *Z)
    return not return_vertices(D, S, Z)


@dataclass(frozen=True)
class Arborescence:
    root: int
    parent: dict[int, int | None]  # root maps to None

    @property
    def nodes(self) -> list[int]:
        return sorted(self.parent)

    def children(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {r: [] for r in self.parent}
        for r, p in self.parent.items():
            if p is not None:
                ch[p].append(r)
        return {r: sorted(c) for r, c in ch.items()}

    def validate(self) -> None:
        roots = [r for r, p in self.parent.items() if p is None]
        if roots != [self.root]:
            raise DecompositionError("structural", f"expected the single root {self.root}, found {sorted(roots)}")
        for r, p in self.parent.items():
            if p is not None and p not in self.parent:
                raise DecompositionError("structural", f"node {r} has unknown parent {p}")
        for r in self.parent:
            seen = {r}
            p = self.parent[r]
            while p is not None:
                if p in seen:
                    raise DecompositionError("structural", f"cycle through node {p}")
                seen.add(p)
                p = self.parent[p]

    def subtree(self, r: int) -> list[int]:
        ch = self.children()
        out, stack = [], [r]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(ch[x])
        return sorted(out)


@dataclass(frozen=True)
class ArborealDecomposition:
    tree: Arborescence
    bags: dict[int, frozenset[int]]
    guards: dict[int, frozenset[int]] = field(default_factory=dict)  # child node -> guard of its incoming edge

    def guard(self, child: int) -> frozenset[int]:
        return self.guards.get(child, frozenset())

    def node_width(self, r: int) -> int:
        touching = set(self.bags[r]) | set(self.guard(r))
        for c in self.tree.children()[r]:
            touching |= self.guard(c)
        return len(touching)


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    width: int | None = None
    kind: str | None = None
    message: str = ""


def validate_decomposition(D: Digraph, dec: ArborealDecomposition) -> DecompositionReport:
    """Width (max node width minus one) of a valid decomposition, else the first violation.

    The union guarded by an edge is taken over the subtree rooted at the edge's
    head, head included.
    """
    try:
        dec.tree.validate()
    except DecompositionError as exc:
        return DecompositionReport(False, kind=exc.kind, message=str(exc))
    if set(dec.bags) != set(dec.tree.parent):
        return DecompositionReport(False, kind="structural", message="bags and tree nodes differ")
    seen: dict[int, int] = {}
    for r in dec.tree.nodes:
        bag = dec.bags[r]
        if not bag:
            return DecompositionReport(False, kind="structural", message=f"bag of node {r} is empty")
        for v in sorted(bag):
            if v not in D.vertices:
                return DecompositionReport(False, kind="structural", message=f"bag of node {r} has unknown vertex {v}")
            if v in seen:
                return DecompositionReport(False, kind="structural", message=f"vertex {v} in bags {seen[v]} and {r}")
            seen[v] = r
    missing = D.vertices - set(seen)
    if missing:
        return DecompositionReport(False, kind="structural", message=f"vertex {min(missing)} in no bag")
    for c in dec.guards:
        if c not in dec.tree.parent or dec.tree.parent[c] is None:
            return DecompositionReport(False, kind="structural", message=f"guard for non-edge into node {c}")
        if not dec.guards[c] <= D.vertices:
            return DecompositionReport(False, kind="structural", message=f"guard of edge into {c} has unknown vertex")
    for c in dec.tree.nodes:
        p = dec.tree.parent[c]
        if p is None:
            continue
        below = frozenset().union(*(dec.bags[r] for r in dec.tree.subtree(c)))
        Z = dec.guard(c)
        below_free = below - Z
        if not is_guarded(D, below_free, Z):
            return DecompositionReport(
                False, kind="guard", message=f"union below edge ({p}, {c}) is not guarded by {sorted(Z)}"
            )
    width = max(dec.node_width(r) for r in dec.tree.nodes) - 1
    return DecompositionReport(True, width=width)


def topological_decomposition(D: Digraph, order: Sequence[int]) -> ArborealDecomposition:
    """Path-shaped decomposition with singleton bags in ``order`` and empty guards."""
    order = list(order)
    parent = {order[0]: None}
    for a, b in zip(order, order[1:]):
        parent[b] = a
    return ArborealDecomposition(Arborescence(order[0], parent), {v: frozenset({v}) for v in order})


def random_decomposition(D: Digraph, rng: random.Random) -> ArborealDecomposition:
    """Random arborescence and bag partition; each guard is the return set of the union below it."""
    vs = D.sorted_vertices()
    rng.shuffle(vs)
    nodes = rng.randint(1, len(vs))
    cuts = sorted(rng.sample(range(1, len(vs)), nodes - 1))
    bags = {r: frozenset(vs[lo:hi]) for r, (lo, hi) in enumerate(zip([0] + cuts, cuts + [len(vs)]), start=1)}
    parent: dict[int, int | None] = {1: None}
    for r in range(2, nodes + 1):
        parent[r] = rng.randint(1, r - 1)
    tree = Arborescence(1, parent)
    guards = {}
    for c in range(2, nodes + 1):
        below = frozenset().union(*(bags[r] for r in tree.subtree(c)))
        guards[c] = return_vertices(D, below)
    return ArborealDecomposition(tree, bags, guards)


def check_limited(
    D: Digraph,
    paths: Sequence[Sequence[int]],
    S_prime: Iterable[int],
    w: int,
    k: int,
    guard: Iterable[int],
) -> bool:
    """At most ``(w+1) k`` weak components of the path union restricted to ``S_prime``.

    ``guard`` must witness that ``S_prime`` is ``w``-guarded.
    """
    S_prime, guard = frozenset(S_prime), frozenset(guard)
    if len(guard) > w or (guard & S_prime) or not is_guarded(D, S_prime, guard):
        raise ValueError(f"{sorted(guard)} does not witness that the set is {w}-guarded")
    verts = {x for p in paths for x in p} & S_prime
    arcs = {(a, b) for p in paths for a, b in zip(p, p[1:]) if a in verts and b in verts}
    union = Digraph(frozenset(verts), frozenset(arcs))
    return len(weak_components(union)) <= (w + 1) * k


def is_guarded_by_walks(D: Digraph, S: Iterable[int], Z: Iterable[int]) -> bool:
    """Reference check: search walks of length up to ``2n`` that leave ``S`` and return."""
    S, Z = frozenset(S), frozenset(Z)
    limit = 2 * D.n
    for start in sorted(S):
        # states: (vertex, left S yet?)
        frontier = {(start, False)}
        seen = set(frontier)
        for _ in range(limit):
            nxt = set()
            for v, left in frontier:
                for w in D.out_neighbors(v):
                    if w in Z:
                        continue
                    if w in S and left:
                        return False
                    state = (w, left or w not in S)
                    if state not in seen:
                        seen.add(state)
                        nxt.add(state)
            frontier = nxt
            if not frontier:
                break
    return True


# ------------------------------------------------------------------ file format


def parse_decomposition(text: str) -> ArborealDecomposition:
    """``t <nodes>``; ``n <node> <parent|0> w: <bag>``; ``g <child> x: <guard>``."""
    count = None
    parent: dict[int, int | None] = {}
    bags: dict[int, frozenset[int]] = {}
    guards: dict[int, frozenset[int]] = {}
    for lineno, tok in _lines(text):
        if tok[0] == "t":
            if len(tok) != 2:
                raise FormatError("BAD_HEADER", "expected 't <nodes>'", lineno)
            count = _ints(tok[1:], lineno)[0]
        elif tok[0] == "n":
            if len(tok) < 4 or tok[3] != "w:":
                raise FormatError("BAD_LINE", "expected 'n <node> <parent|0> w: ...'", lineno)
            node, par = _ints(tok[1:3], lineno)
            if node in parent:
                raise FormatError("DUPLICATE_NODE", f"node {node} listed twice", lineno)
            parent[node] = par or None
            bags[node] = frozenset(_ints(tok[4:], lineno))
        elif tok[0] == "g":
            if len(tok) < 3 or tok[2] != "x:":
                raise FormatError("BAD_LINE", "expected 'g <child> x: ...'", lineno)
            child = _ints(tok[1:2], lineno)[0]
            guards[child] = frozenset(_ints(tok[3:], lineno))
        else:
            raise FormatError("BAD_LINE", f"unrecognised line: {' '.join(tok)}", lineno)
    if count is None:
        raise FormatError("MISSING_HEADER", "no 't' line")
    if len(parent) != count:
        raise FormatError("COUNT_MISMATCH", f"header says {count} nodes, found {len(parent)}")
    roots = [r for r, p in parent.items() if p is None]
    root = roots[0] if roots else min(parent, default=0)
    return ArborealDecomposition(Arborescence(root, parent), bags, guards)


def write_decomposition(dec: ArborealDecomposition) -> str:
    out = [f"t {len(dec.tree.parent)}"]
    for r in dec.tree.nodes:
        par = dec.tree.parent[r] or 0
        out.append(" ".join(["n", str(r), str(par), "w:"] + [str(v) for v in sorted(dec.bags[r])]))
    for c in sorted(dec.guards):
        out.append(" ".join(["g", str(c), "x:"] + [str(v) for v in sorted(dec.guards[c])]))
    return "\n".join(out) + "\n"

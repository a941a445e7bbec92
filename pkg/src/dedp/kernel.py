"""Kernelization: blocked sets, the iteration step, the base case and the full pipeline.

Every request-set bound below is checked with exact integer or rational
arithmetic; a violated bound raises :class:`KernelInvariantError`, which means
an upstream bug (for example an instance that is not actually clean).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .digraph import Digraph, Path, min_nonterminal_path, shortest_path
from .instance import (
    Instance,
    Solution,
    TrivialStatus,
    trivial_solution,
    trivial_status,
    verify_solution,
)
from .transform import BypassTrace, TooFewVerticesError, blocked_counts, bypass_set, clean, lift_path


class KernelInvariantError(AssertionError):
    """A guarantee of the kernelization failed to hold."""


def kernel_bound_core(k: int, d: int, s: int) -> int:
    """Non-terminal count from which a clean instance is always positive."""
    if k < 1 or s < 0 or d < 0:
        raise ValueError("need k >= 1 and d, s >= 0")
    if s >= k:
        raise ValueError(f"s={s} >= k={k}: the instance is trivial, no kernel bound")
    return d * 2 ** (k - s) * comb(k, s)


def kernel_bound(k: int, d: int, s: int) -> int:
    return kernel_bound_core(k, d, s) + 2 * k


def blocked_sets(inst: Instance) -> tuple[frozenset[int], ...]:
    """``B_i``: non-terminals whose single removal disconnects request ``i``."""
    per_vertex = blocked_counts(inst.graph, inst.requests)
    sets: list[set[int]] = [set() for _ in inst.requests]
    for v, blocked in per_vertex.items():
        for i in blocked:
            sets[i].add(v)
    return tuple(frozenset(b) for b in sets)


@dataclass(frozen=True)
class StepRecord:
    """Sizes observed in one iteration step, for checking the per-step size bounds."""

    index: int
    live: int
    s: int
    n_star: int
    blocked: int
    reduced_n_star: int
    path_cost: int

    @property
    def blocked_bound(self) -> int:
        return self.n_star * self.s // self.live

    @property
    def path_bound(self) -> int:
        return self.reduced_n_star // 2


@dataclass(frozen=True)
class IterationStep:
    index: int
    graph: Digraph  # D / B_index
    trace: BypassTrace
    path: Path  # in ``graph``
    record: StepRecord


def iteration_step(
    inst: Instance, live: Iterable[int], trace: BypassTrace | None = None
) -> IterationStep:
    """Pick the live request with the smallest blocked set, bypass it, route it cheaply.

    ``inst.graph`` is the current digraph; ``inst.requests`` is the full request
    multiset, so terminals of already-routed requests stay terminals.
    """
    live = sorted(set(live))
    if len(live) < inst.s + 1:
        raise ValueError(f"need at least s+1 = {inst.s + 1} live requests, got {len(live)}")
    D = inst.graph
    terms = inst.terminals
    n_star = len(D.vertices - terms)
    B = blocked_sets(inst)
    load: dict[int, int] = {}
    for b in B:
        for v in b:
            load[v] = load.get(v, 0) + 1
    if any(c > inst.s for c in load.values()):
        raise KernelInvariantError("instance is not clean")
    i = min(live, key=lambda j: (len(B[j]), j))
    reduced, step_trace = bypass_set(D, B[i], trace, terms)
    a, b = inst.requests[i]
    path = min_nonterminal_path(reduced, a, b, terms)
    if path is None:
        raise KernelInvariantError(f"request {i} is disconnected")
    record = StepRecord(
        index=i,
        live=len(live),
        s=inst.s,
        n_star=n_star,
        blocked=len(B[i]),
        reduced_n_star=len(reduced.vertices - terms),
        path_cost=sum(1 for x in path if x not in terms),
    )
    if record.blocked > record.blocked_bound:
        raise KernelInvariantError(f"|B_{i}| = {record.blocked} > {record.blocked_bound}")
    if record.path_cost > record.path_bound:
        raise KernelInvariantError(f"path uses {record.path_cost} non-terminals > {record.path_bound}")
    return IterationStep(i, reduced, step_trace, path, record)


@dataclass
class _Routing:
    paths: dict[int, Path] = field(default_factory=dict)  # lifted to the trace's original
    records: list[StepRecord] = field(default_factory=list)


def _route_base(inst: Instance, live: Sequence[int], trace: BypassTrace | None, routing: _Routing):
    """Base case with ``|live| = s + 1``; returns the viable set, fills ``routing``."""
    terms = inst.terminals
    n_star = len(inst.graph.vertices - terms)
    if len(live) != inst.s + 1:
        raise ValueError(f"base case needs exactly s+1 = {inst.s + 1} live requests")
    if n_star < 2 * inst.d * (inst.s + 1):
        raise ValueError(f"base case needs n* >= 2d(s+1) = {2 * inst.d * (inst.s + 1)}, got {n_star}")
    step = iteration_step(inst, live, trace)
    routing.records.append(step.record)
    routing.paths[step.index] = lift_path(step.trace, step.path)
    used = [x for x in step.path if x not in terms]
    final, final_trace = bypass_set(step.graph, used, step.trace, terms)
    for j in live:
        if j == step.index:
            continue
        a, b = inst.requests[j]
        p = shortest_path(final, (a,), (b,))
        if p is None:
            raise KernelInvariantError(f"request {j} disconnected in the base case")
        routing.paths[j] = lift_path(final_trace, p)
    survivors = sorted(final.vertices - terms)
    if len(survivors) < inst.d:
        raise KernelInvariantError(f"only {len(survivors)} non-terminals survive, d = {inst.d}")
    return frozenset(survivors[: inst.d])


def solve_base(inst: Instance, live: Iterable[int] | None = None) -> Solution:
    """Solve a clean instance with exactly ``s + 1`` live requests and ``n* >= 2d(s+1)``.

    The returned solution covers the live requests in index order.
    """
    live = sorted(range(inst.k) if live is None else set(live))
    for j in live:
        a, b = inst.requests[j]
        if shortest_path(inst.graph, (a,), (b,)) is None:
            raise ValueError(f"request {j} is disconnected")
    routing = _Routing()
    X = _route_base(inst, live, None, routing)
    sub = Instance(inst.graph, tuple(inst.requests[j] for j in live), inst.d, inst.s)
    sol = Solution(X, tuple(routing.paths[j] for j in live))
    _check(sub, sol)
    return sol


def _shrink_ratio(k: int, s: int, steps: int) -> Fraction:
    r = Fraction(1)
    for j in range(steps):
        r *= Fraction(k - s - j, 2 * (k - j))
    return r


def solve_large_clean(
    inst: Instance, trace: BypassTrace | None = None, records: list[StepRecord] | None = None
) -> Solution:
    """Solve a clean instance with ``n* >= d 2^(k-s) C(k,s)``.

    ``trace`` may describe how ``inst.graph`` was obtained from some original
    digraph; returned paths then live in that original.
    """
    k, s, d = inst.k, inst.s, inst.d
    if not s < k:
        raise ValueError("s >= k: use the trivial solution")
    terms = inst.terminals
    n0 = len(inst.graph.vertices - terms)
    if n0 < kernel_bound_core(k, d, s):
        raise ValueError(f"n* = {n0} below the bound {kernel_bound_core(k, d, s)}")
    for j, (a, b) in enumerate(inst.requests):
        if shortest_path(inst.graph, (a,), (b,)) is None:
            raise ValueError(f"request {j} is disconnected")
    if trace is None:
        trace = BypassTrace.identity(inst.graph)

    routing = _Routing()
    live = list(range(k))
    current, current_trace = inst.graph, trace
    for it in range(1, k - s):
        step = iteration_step(inst.with_graph(current, d=0), live, current_trace)
        routing.records.append(step.record)
        routing.paths[step.index] = lift_path(step.trace, step.path)
        used = [x for x in step.path if x not in terms]
        current, current_trace = bypass_set(step.graph, used, step.trace, terms)
        live.remove(step.index)
        n_i = len(current.vertices - terms)
        if n_i < n0 * _shrink_ratio(k, s, it):
            raise KernelInvariantError(f"iteration {it}: n* = {n_i} < {n0 * _shrink_ratio(k, s, it)}")
    X = _route_base(inst.with_graph(current), live, current_trace, routing)
    if records is not None:
        records.extend(routing.records)
    sol = Solution(X, tuple(routing.paths[j] for j in range(k)))
    _check(Instance(trace.original, inst.requests, d, s), sol)
    return sol


def _check(inst: Instance, sol: Solution) -> None:
    verdict = verify_solution(inst, sol)
    if not verdict:
        raise KernelInvariantError(f"produced solution fails verification: {verdict.message}")


@dataclass(frozen=True)
class Solved:
    solution: Solution
    records: tuple[StepRecord, ...] = ()


@dataclass(frozen=True)
class Reduced:
    instance: Instance
    trace: BypassTrace


@dataclass(frozen=True)
class NoSolution:
    reason: str


KernelResult = Solved | Reduced | NoSolution


def kernelize(inst: Instance) -> KernelResult:
    """Either solve the instance or shrink it to at most ``kernel_bound`` vertices."""
    status = trivial_status(inst)
    if status is TrivialStatus.NEGATIVE_TRIVIAL:
        return NoSolution("a request has no path")
    if status is TrivialStatus.POSITIVE_TRIVIAL:
        sol = trivial_solution(inst)
        _check(inst, sol)
        return Solved(sol)
    try:
        cleaned, trace = clean(inst)
    except TooFewVerticesError as exc:
        return NoSolution(str(exc))
    n_star = len(cleaned.graph.vertices - cleaned.terminals)
    if n_star >= kernel_bound_core(inst.k, inst.d, inst.s):
        records: list[StepRecord] = []
        sol = solve_large_clean(cleaned, trace, records)
        _check(inst, sol)
        return Solved(sol, tuple(records))
    bound = kernel_bound(inst.k, inst.d, inst.s)
    if cleaned.n > bound:
        raise KernelInvariantError(f"reduced instance has {cleaned.n} > {bound} vertices")
    return Reduced(cleaned, trace)

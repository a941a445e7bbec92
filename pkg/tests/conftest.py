"""Shared fixtures and independent brute-force references (built on networkx)."""

from __future__ import annotations

from collections import Counter
from itertools import product

import networkx as nx
import pytest
from hypothesis import strategies as st

from dedp.digraph import Digraph
from dedp.instance import Instance, Request

G1_EDGES = [(1, 3), (2, 3), (3, 4), (3, 5)]
G1_REQUESTS = (Request(1, 4), Request(2, 5))


@pytest.fixture
def g1() -> Digraph:
    return Digraph.from_edges(5, G1_EDGES)


def g1_instance(d: int, s: int) -> Instance:
    return Instance(Digraph.from_edges(5, G1_EDGES), G1_REQUESTS, d, s)


def to_nx(D: Digraph) -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(D.vertices)
    G.add_edges_from(D.edges)
    return G


def nx_paths(D: Digraph, a: int, b: int) -> list[tuple[int, ...]]:
    if a == b:
        return [(a,)]
    return [tuple(p) for p in nx.all_simple_paths(to_nx(D), a, b)]


def brute_force_best(inst: Instance) -> int | None:
    """Fewest vertices above congestion ``s`` over all path tuples (no pruning)."""
    choices = [nx_paths(inst.graph, a, b) for a, b in inst.requests]
    if any(not c for c in choices):
        return None
    best = None
    for combo in product(*choices):
        count = Counter(x for p in combo for x in p)
        over = sum(1 for c in count.values() if c > inst.s)
        best = over if best is None else min(best, over)
    return 0 if best is None else best


def brute_force_decision(inst: Instance) -> bool:
    best = brute_force_best(inst)
    return best is not None and best <= inst.n - inst.d


@st.composite
def digraphs(draw, min_n: int = 1, max_n: int = 6, acyclic: bool = False):
    n = draw(st.integers(min_n, max_n))
    if acyclic:
        pool = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    else:
        pool = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    edges = draw(st.lists(st.sampled_from(pool), unique=True)) if pool else []
    return Digraph.from_edges(n, edges)


@st.composite
def instances(draw, max_n: int = 5, max_k: int = 3, max_d: int = 3, max_s: int = 2):
    D = draw(digraphs(max_n=max_n))
    vs = st.integers(1, D.n)
    k = draw(st.integers(0, max_k))
    reqs = tuple(Request(draw(vs), draw(vs)) for _ in range(k))
    d = draw(st.integers(0, min(max_d, D.n)))
    s = draw(st.integers(0, max_s))
    return Instance(D, reqs, d, s)


# ---------------------------------------------------------------- acceptance summary

SUITE_BUDGET_S = 300.0
_session_start = [0.0]


def pytest_sessionstart(session):
    import time

    _session_start[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import sys
    import time

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    elapsed = time.perf_counter() - _session_start[0]
    if 9 in mod.RESULTS:
        ok, detail = mod.RESULTS[9]
        within = elapsed < SUITE_BUDGET_S
        mod.RESULTS[9] = (ok and within, f"{detail}; whole suite {elapsed:.0f} s (budget {SUITE_BUDGET_S:.0f} s)")
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(number))

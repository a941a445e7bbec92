import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from dedp.digraph import Digraph, is_path
from dedp.instance import Instance, Request, verify_solution
from dedp.solve import (
    OracleLimitError,
    is_one_viable,
    oracle,
    s_viable_paths,
    simple_paths,
    solve_xp,
    split_for_congestion,
)

from conftest import G1_REQUESTS, brute_force_decision, g1_instance, instances, nx_paths


def test_one_viable_g1_endpoints(g1):
    paths = is_one_viable(g1, G1_REQUESTS, {1, 2, 4, 5})
    assert paths == ((1, 3, 4), (2, 3, 5))


def test_one_viable_g1_center(g1):
    assert is_one_viable(g1, G1_REQUESTS, {3}) is None


def test_one_viable_empty_set(g1):
    assert is_one_viable(g1, G1_REQUESTS, ()) == ((1, 3, 4), (2, 3, 5))


def test_split_relay():
    D = Digraph.from_edges(3, [(1, 2), (2, 3)])
    sp = split_for_congestion(D, {2}, 2)
    assert sp.copies == {2: (4, 5)}
    assert sp.graph.edges == {(1, 4), (1, 5), (4, 3), (5, 3)}
    assert len(sp.x_prime) == 2


def test_split_g1(g1):
    sp = split_for_congestion(g1, {3}, 2)
    for c in sp.copies[3]:
        assert set(sp.graph.in_neighbors(c)) == {1, 2}
        assert set(sp.graph.out_neighbors(c)) == {4, 5}
    assert s_viable_paths(g1, G1_REQUESTS, {3}, 2) is not None


def test_split_size():
    D = Digraph.from_edges(6, [(1, 2), (2, 3), (3, 4)])
    assert len(split_for_congestion(D, {1, 2, 3}, 3).x_prime) == 9


def test_split_rejects_small_s(g1):
    with pytest.raises(ValueError):
        split_for_congestion(g1, {3}, 1)


def test_xp_g1():
    sol = solve_xp(g1_instance(4, 1))
    assert sol is not None and sol.viable_set == {1, 2, 4, 5}
    assert solve_xp(g1_instance(5, 1)) is None


def test_xp_d0_positive():
    sol = solve_xp(g1_instance(0, 0))
    assert sol is not None and sol.viable_set == frozenset()


def test_oracle_examples():
    assert oracle(g1_instance(4, 1)) is not None
    D = Digraph.from_edges(3, [(1, 2), (2, 3)])
    assert oracle(Instance(D, (Request(1, 3),), 3, 1)) is not None
    assert oracle(Instance(D, (Request(3, 1),), 0, 0)) is None


def test_oracle_cap():
    n = 8
    D = Digraph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v])
    with pytest.raises(OracleLimitError):
        oracle(Instance(D, (Request(1, 2),), 1, 0), limit=50)


def test_simple_paths_lexicographic():
    D = Digraph.from_edges(4, [(1, 2), (1, 3), (2, 4), (3, 4), (2, 3)])
    assert simple_paths(D, 1, 4, 100) == [(1, 2, 3, 4), (1, 2, 4), (1, 3, 4)]


def test_terminal_in_viable_set_shared_by_requests():
    # both requests start at 1; with s = 2 vertex 1 may carry both
    D = Digraph.from_edges(3, [(1, 2), (1, 3)])
    inst = Instance(D, (Request(1, 2), Request(1, 3)), 3, 2)
    sol = solve_xp(inst)
    assert sol is not None and verify_solution(inst, sol)


@settings(max_examples=300, deadline=None)
@given(instances(max_n=6, max_k=3, max_d=3, max_s=2))
def test_xp_and_oracle_match_brute_force(inst):
    truth = brute_force_decision(inst)
    for solver in (solve_xp, oracle):
        sol = solver(inst)
        assert (sol is not None) == truth
        if sol is not None:
            assert verify_solution(inst, sol)


def _disjoint_inside(paths, X):
    seen = set()
    for p in paths:
        inside = set(p) & X
        if inside & seen:
            return False
        seen |= inside
    return True


@settings(max_examples=200, deadline=None)
@given(instances(max_n=7, max_k=3, max_d=0, max_s=0), st.data())
def test_one_viable_partition_characterization(inst, data):
    D = inst.graph
    X = frozenset(data.draw(st.lists(st.sampled_from(sorted(D.vertices)), unique=True, max_size=4)))
    choices = [nx_paths(D, a, b) for a, b in inst.requests]
    expected = all(choices) and any(_disjoint_inside(c, X) for c in product(*choices))
    got = is_one_viable(D, inst.requests, X)
    assert (got is not None) == expected
    if got is not None:
        assert _disjoint_inside(got, X)
        assert all(is_path(D, p) and (p[0], p[-1]) == r for p, r in zip(got, inst.requests))


@settings(max_examples=150, deadline=None)
@given(instances(max_n=6, max_k=3, max_d=3, max_s=2))
def test_xp_monotone_in_d(inst):
    if solve_xp(inst) is not None:
        for d in range(inst.d):
            assert solve_xp(Instance(inst.graph, inst.requests, d, inst.s)) is not None


def test_random_corpus_agreement():
    rng = random.Random(2024)
    from dedp.reductions import random_instance

    for seed in range(150):
        n = rng.randint(2, 7)
        m = rng.randint(0, min(12, n * (n - 1)))
        inst = random_instance(n, m, rng.randint(1, 3), rng.randint(0, min(3, n)), rng.randint(0, 2), seed)
        assert (solve_xp(inst) is None) == (oracle(inst) is None)

import random
from itertools import combinations

import networkx as nx
import pytest

from dedp.digraph import Digraph
from dedp.instance import Instance, Request, TrivialStatus, trivial_status
from dedp.reductions import (
    DdpcInstance,
    GeneratorError,
    UndirectedGraph,
    amplify,
    enumerate_digraphs,
    enumerate_request_sets,
    from_ddpc,
    from_independent_set,
    independent_set_offset,
    large_clean_instance,
    parse_ddpc,
    parse_ug,
    random_ddpc,
    random_instance,
    random_undirected,
    write_ddpc,
    write_ug,
)
from dedp.solve import oracle
from dedp.transform import blocking_vertices

from conftest import brute_force_decision, to_nx

K3 = UndirectedGraph(3, frozenset({(1, 2), (1, 3), (2, 3)}))


def _ddpc_example():
    D = Digraph.from_edges(4, [(1, 2), (3, 4), (1, 4)])
    return DdpcInstance(D, (Request(1, 2), Request(3, 4)), 1)


def test_from_ddpc_shape():
    out = from_ddpc(_ddpc_example(), 0.5, 2)
    assert out.k == 3 and out.s == 1
    nb, c = 4, out.n - 4 - 3
    chain = list(range(nb + 1, nb + c + 1))
    t_new, s_extra, t_extra = nb + c + 1, nb + c + 2, nb + c + 3
    assert out.requests == (Request(1, 2), Request(3, t_new), Request(s_extra, t_extra))
    assert {(4, chain[0]), (s_extra, chain[0]), (chain[-1], t_extra), (chain[-1], t_new)} <= out.graph.edges
    assert out.d == out.n - c


def test_from_ddpc_alpha_one_keeps_one_chain_vertex():
    out = from_ddpc(_ddpc_example(), 1, 1)
    assert out.n == 4 + 1 + 3


def test_from_ddpc_rejects_bad_alpha():
    with pytest.raises(ValueError):
        from_ddpc(_ddpc_example(), 0, 1)
    with pytest.raises(ValueError):
        from_ddpc(_ddpc_example(), 1.5, 1)


@pytest.mark.parametrize("seed", range(20))
def test_from_ddpc_keeps_dags_acyclic(seed):
    src = random_ddpc(5, 6, 2, 1, seed, acyclic=True)
    out = from_ddpc(src, 0.5, 1)
    assert nx.is_directed_acyclic_graph(to_nx(out.graph))


@pytest.mark.parametrize("seed", range(25))
def test_from_ddpc_transports_decision(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    src = random_ddpc(n, rng.randint(1, min(8, n * (n - 1))), 2, 1, seed)
    out = from_ddpc(src, 0.5, rng.randint(1, 2))
    assert brute_force_decision(src.as_dedp()) == (oracle(out) is not None)


def test_independent_set_k3_shape():
    out = from_independent_set(K3, 1, 1)
    assert out.n == 7 and out.k == 6
    assert out.sources == {4}
    assert nx.is_directed_acyclic_graph(to_nx(out.graph))


@pytest.mark.parametrize("d,expected", [(0, True), (1, True), (2, False), (3, False)])
def test_independent_set_k3_decisions(d, expected):
    assert (oracle(from_independent_set(K3, d, 1)) is not None) is expected


def test_independent_set_rejects_s0():
    with pytest.raises(ValueError):
        from_independent_set(K3, 1, 0)


def test_independent_set_offset_degenerate():
    # a single isolated vertex with s = 1 yields one request, so s >= k
    assert independent_set_offset(UndirectedGraph(1, frozenset()), 1) == 1
    assert independent_set_offset(K3, 1) == 3


def _has_independent_set(G, d):
    return any(
        all((min(u, w), max(u, w)) not in G.edges for u, w in combinations(S, 2))
        for S in combinations(range(1, G.n + 1), d)
    )


@pytest.mark.parametrize("seed", range(15))
def test_independent_set_transport(seed):
    rng = random.Random(seed)
    G = random_undirected(rng.randint(1, 5), 0.5, seed)
    for d in range(0, min(3, G.n) + 1):
        out = from_independent_set(G, d, 1)
        assert (oracle(out) is not None) == _has_independent_set(G, d)


def test_amplify_counts():
    D = Digraph.from_edges(3, [(1, 2), (2, 3)])
    inst = Instance(D, (Request(1, 2), Request(2, 3)), 2, 0)
    out = amplify(inst, 3)
    assert out.k == 26 and out.requests.count(Request(1, 2)) == 13 and out.s == 3
    assert amplify(Instance(D, inst.requests, 0, 0), 3).k == 2


def test_amplify_rejects_nonzero_s():
    D = Digraph.from_edges(2, [(1, 2)])
    with pytest.raises(ValueError):
        amplify(Instance(D, (Request(1, 2),), 0, 1), 2)


@pytest.mark.parametrize("seed", range(20))
def test_amplify_transports_decision(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    inst = random_instance(n, rng.randint(1, n * (n - 1)), 2, rng.randint(0, min(2, n)), 0, seed)
    assert (oracle(inst) is None) == (oracle(amplify(inst, 1)) is None)


def test_random_instance_deterministic():
    a = random_instance(6, 8, 2, 2, 1, seed=11)
    b = random_instance(6, 8, 2, 2, 1, seed=11)
    assert a == b


@pytest.mark.parametrize("seed", range(20))
def test_random_instance_flags(seed):
    inst = random_instance(7, 6, 3, 2, 1, seed, ensure_connected=True, ensure_clean=True)
    assert trivial_status(inst) is not TrivialStatus.NEGATIVE_TRIVIAL
    assert not blocking_vertices(inst.graph, inst.requests, inst.s)


def test_random_instance_exhausted_retries():
    with pytest.raises(GeneratorError):
        random_instance(4, 3, 1, 1, 0, seed=1, retries=0)


def test_random_instance_rejects_bad_d():
    with pytest.raises(ValueError):
        random_instance(3, 2, 1, 4, 0, seed=0)


def test_large_clean_instance_meets_bound():
    inst = large_clean_instance(4, 2, 2, seed=3)
    assert len(inst.graph.vertices - inst.terminals) >= 48
    assert not blocking_vertices(inst.graph, inst.requests, 2)


def test_generator_error_type():
    assert issubclass(GeneratorError, RuntimeError)


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 3), (3, 16), (4, 218)])
def test_enumerate_digraph_counts(n, count):
    assert len(enumerate_digraphs(n)) == count


def test_enumerate_digraphs_pairwise_non_isomorphic():
    graphs = [to_nx(D) for D in enumerate_digraphs(3)]
    for a, b in combinations(graphs, 2):
        assert not nx.is_isomorphic(a, b)


def test_enumerate_request_sets_count():
    assert sum(1 for _ in enumerate_request_sets(5, 2)) == 1 + 25 + 325


def test_ddpc_round_trip():
    src = random_ddpc(5, 7, 2, 1, seed=4)
    assert parse_ddpc(write_ddpc(src)) == src


def test_ug_round_trip():
    G = random_undirected(6, 0.5, seed=2)
    assert parse_ug(write_ug(G)) == G

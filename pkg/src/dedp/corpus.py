"""Deterministic instance corpora used by the acceptance suite and the experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .digraph import Digraph
from .instance import Instance
from .reductions import (
    DdpcInstance,
    UndirectedGraph,
    enumerate_digraphs,
    enumerate_request_sets,
    large_clean_instance,
    random_ddpc,
    random_instance,
    random_undirected,
)


@dataclass(frozen=True)
class ExhaustiveConfig:
    n_max: int = 5
    k_max: int = 2
    d_max: int = 3
    s_max: int = 2


def exhaustive_cases(cfg: ExhaustiveConfig = ExhaustiveConfig()) -> Iterator[Instance]:
    """Every non-isomorphic digraph with every request multiset and parameter pair.

    Order: n, then graph code, then request multiset, then d, then s.
    """
    for n in range(1, cfg.n_max + 1):
        for D in enumerate_digraphs(n):
            for reqs in enumerate_request_sets(n, cfg.k_max):
                for d in range(min(cfg.d_max, n) + 1):
                    for s in range(cfg.s_max + 1):
                        yield Instance(D, reqs, d, s)


def exhaustive_size(cfg: ExhaustiveConfig = ExhaustiveConfig()) -> int:
    from math import comb

    total = 0
    for n in range(1, cfg.n_max + 1):
        graphs = len(enumerate_digraphs(n))
        req_sets = sum(comb(n * n + k - 1, k) for k in range(cfg.k_max + 1))
        total += graphs * req_sets * (min(cfg.d_max, n) + 1) * (cfg.s_max + 1)
    return total


@dataclass(frozen=True)
class RandomConfig:
    count: int = 500
    n_max: int = 7
    k_max: int = 3
    d_max: int = 3
    s_max: int = 2
    seed: int = 20240601


def random_cases(cfg: RandomConfig = RandomConfig()) -> list[Instance]:
    """Seeded mix of arbitrary, connected and clean instances."""
    rng = random.Random(cfg.seed)
    out = []
    for j in range(cfg.count):
        n = rng.randint(2, cfg.n_max)
        acyclic = rng.random() < 0.3
        arcs = n * (n - 1) // (2 if acyclic else 1)
        m = rng.randint(min(n - 1, arcs), min(3 * n, arcs))
        k = rng.randint(1, cfg.k_max)
        d = rng.randint(0, min(cfg.d_max, n))
        s = rng.randint(0, cfg.s_max)
        flavour = j % 3
        out.append(
            random_instance(
                n, m, k, d, s, seed=rng.randrange(2**31),
                acyclic=acyclic,
                ensure_connected=flavour >= 1,
                ensure_clean=flavour == 2,
            )
        )
    return out


LARGE_CLEAN_PARAMS = ((2, 1, 1), (3, 1, 2), (3, 2, 2), (4, 2, 2))  # (k, s, d)


def large_clean_cases(count: int = 200, seed: int = 7) -> list[Instance]:
    """``count`` clean instances at or above the core bound, cycling over the parameter sets."""
    out = []
    for j in range(count):
        k, s, d = LARGE_CLEAN_PARAMS[j % len(LARGE_CLEAN_PARAMS)]
        out.append(large_clean_instance(k, d, s, seed=seed * 100_003 + j))
    return out


def bypass_cases(count: int = 1000, n_max: int = 10, seed: int = 11):
    """``(D, B, order1, order2)`` with random density and random bypass set."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, n_max)
        pool = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
        D = Digraph.from_edges(n, rng.sample(pool, rng.randint(0, len(pool))))
        B = rng.sample(range(1, n + 1), rng.randint(0, n))
        o1, o2 = B[:], B[:]
        rng.shuffle(o1)
        rng.shuffle(o2)
        yield D, frozenset(B), o1, o2


def ddpc_cases(count: int = 100, seed: int = 13) -> list[tuple[DdpcInstance, int]]:
    """Small DDPC sources (n <= 5, k = 2, congestion 1) with the request to reroute."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 5)
        acyclic = rng.random() < 0.5
        m = rng.randint(1, n * (n - 1) // (2 if acyclic else 1))
        src = random_ddpc(n, m, 2, 1, seed=rng.randrange(2**31), acyclic=acyclic)
        out.append((src, rng.randint(1, 2)))
    return out


def undirected_cases(count: int = 50, n_max: int = 6, seed: int = 17) -> list[UndirectedGraph]:
    rng = random.Random(seed)
    return [
        random_undirected(rng.randint(1, n_max), rng.choice((0.2, 0.4, 0.6)), seed=rng.randrange(2**31))
        for _ in range(count)
    ]


def zero_congestion_cases(count: int = 100, seed: int = 19) -> list[Instance]:
    """Small ``s = 0`` instances for the amplification check."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 5)
        m = rng.randint(1, min(8, n * (n - 1)))
        k = rng.randint(1, 2)
        d = rng.randint(0, min(2, n))
        out.append(random_instance(n, m, k, d, 0, seed=rng.randrange(2**31), ensure_connected=rng.random() < 0.7))
    return out

"""Seeded synthetic instances: random small graphs for differential testing,
disjoint replicas, and a high-yield star workload for scaling runs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .hypergraph import Hypergraph, canonicalize
from .oracle import brute_force_size
from .querygen import QueryGenerationError, QuerySettings, generate_queries

# Fixture F1: vertices v0..v6 with labels A=0, B=1, C=2
F1_LABELS = (0, 2, 0, 2, 1, 0, 0)
F1_EDGES = ((2, 4), (4, 6), (0, 1, 2), (3, 5, 6), (0, 1, 4, 6), (2, 3, 4, 5))
F1_QUERY_LABELS = (0, 2, 0, 0, 1)
F1_QUERY_EDGES = ((2, 4), (0, 1, 2), (0, 1, 3, 4))


def f1_data() -> Hypergraph:
    return canonicalize(F1_EDGES, F1_LABELS)


def f1_query() -> Hypergraph:
    return canonicalize(F1_QUERY_EDGES, F1_QUERY_LABELS)


@dataclass(frozen=True)
class Instance:
    seed: int
    data: Hypergraph
    query: Hypergraph


def random_instance(
    seed: int,
    max_vertices: int = 12,
    max_edges: int = 10,
    max_labels: int = 3,
    max_arity: int = 4,
    query_edges: tuple[int, int] = (2, 4),
    max_query_vertices: int = 10,
    max_bruteforce_maps: int | None = 20_000,
) -> Instance:
    """A random data hypergraph plus a random-walk query drawn from it.

    Draws whose brute-force search space exceeds ``max_bruteforce_maps``
    vertex maps are discarded and redrawn from the same generator.
    """
    rng = random.Random(seed)
    while True:
        nv = rng.randint(3, max_vertices)
        nl = rng.randint(1, max_labels)
        labels = [rng.randrange(nl) for _ in range(nv)]
        ne = rng.randint(query_edges[0], max_edges)
        raw = [rng.sample(range(nv), rng.randint(1, min(max_arity, nv))) for _ in range(ne)]
        data = canonicalize(raw, labels)
        if data.edge_count < query_edges[0]:
            continue
        k = rng.randint(query_edges[0], min(query_edges[1], data.edge_count))
        settings = QuerySettings(k, 1, max_query_vertices, seed=rng.getrandbits(32), num_queries=1)
        try:
            (query,) = generate_queries(data, settings)
        except QueryGenerationError:
            continue
        if max_bruteforce_maps is not None and brute_force_size(query, data) > max_bruteforce_maps:
            continue
        return Instance(seed, data, query)


def disjoint_copies(h: Hypergraph, copies: int) -> Hypergraph:
    """``copies`` vertex-disjoint replicas of ``h`` with fresh vertex ids."""
    n = h.vertex_count
    edges = [tuple(v + c * n for v in e) for c in range(copies) for e in h.edges]
    return canonicalize(edges, list(h.labels) * copies)


def star_instance(hubs: int = 10, leaves: int = 60, arms: int = 3) -> tuple[Hypergraph, Hypergraph]:
    """``hubs`` stars of ``leaves`` two-vertex hyperedges {hub, leaf}; the
    query is one hub with ``arms`` leaves. Every ordered choice of distinct
    leaves of one hub is an embedding: hubs * leaves!/(leaves-arms)!."""
    labels: list[int] = []
    edges = []
    for _ in range(hubs):
        hub = len(labels)
        labels.append(0)
        for _ in range(leaves):
            edges.append((hub, len(labels)))
            labels.append(1)
    data = canonicalize(edges, labels)
    query = canonicalize([(0, i) for i in range(1, arms + 1)], [0] + [1] * arms)
    return data, query

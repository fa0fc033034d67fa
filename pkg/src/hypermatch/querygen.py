"""Random-walk sampling of connected query hypergraphs.

Randomness is consumed in a fixed order so runs are reproducible from the
seed: per walk, one ``randrange`` picks the start hyperedge, then one
``choice`` per added hyperedge picks from the ascending list of frontier
hyperedges (those adjacent to any collected hyperedge and not yet collected).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .hypergraph import Hypergraph, canonicalize

ATTEMPTS_PER_QUERY = 1000


class QueryGenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuerySettings:
    num_edges: int
    min_vertices: int
    max_vertices: int
    seed: int = 0
    num_queries: int = 1

    def __post_init__(self):
        if self.num_edges < 1:
            raise ValueError("num_edges must be at least 1")
        if self.min_vertices > self.max_vertices:
            raise ValueError("min_vertices must not exceed max_vertices")
        if self.num_queries < 0:
            raise ValueError("num_queries must be non-negative")


# Query sizes used in the original experiments: name -> (|E|, |V|min, |V|max)
PRESETS = {
    "q2": (2, 5, 15),
    "q3": (3, 10, 20),
    "q4": (4, 10, 30),
    "q6": (6, 15, 35),
}


def random_walk(h: Hypergraph, num_edges: int, rng: random.Random) -> list[int] | None:
    """Collect ``num_edges`` distinct connected hyperedges, or None if the
    walk runs out of frontier."""
    start = rng.randrange(h.edge_count)
    collected = [start]
    seen = {start}
    frontier: set[int] = set(h.adjacent_edges(start))
    while len(collected) < num_edges:
        if not frontier:
            return None
        nxt = rng.choice(sorted(frontier))
        collected.append(nxt)
        seen.add(nxt)
        frontier.discard(nxt)
        frontier.update(e for e in h.adjacent_edges(nxt) if e not in seen)
    return collected


def subhypergraph(h: Hypergraph, edge_ids: list[int]) -> Hypergraph:
    """Induced query over the given hyperedges with vertices renumbered densely
    in ascending original-id order."""
    verts = sorted({v for e in edge_ids for v in h.edges[e]})
    remap = {v: i for i, v in enumerate(verts)}
    return canonicalize(
        [[remap[v] for v in h.edges[e]] for e in edge_ids],
        [h.labels[v] for v in verts],
    )


def generate_queries(h: Hypergraph, settings: QuerySettings) -> list[Hypergraph]:
    return [q for q, _ in generate_queries_with_sources(h, settings)]


def generate_queries_with_sources(
    h: Hypergraph, settings: QuerySettings
) -> list[tuple[Hypergraph, list[int]]]:
    if h.edge_count < settings.num_edges:
        raise QueryGenerationError(
            f"data hypergraph has {h.edge_count} hyperedges, fewer than the requested {settings.num_edges}"
        )
    rng = random.Random(settings.seed)
    out = []
    for k in range(settings.num_queries):
        for _ in range(ATTEMPTS_PER_QUERY):
            walk = random_walk(h, settings.num_edges, rng)
            if walk is None:
                continue
            nverts = len({v for e in walk for v in h.edges[e]})
            if settings.min_vertices <= nverts <= settings.max_vertices:
                out.append((subhypergraph(h, walk), walk))
                break
        else:
            raise QueryGenerationError(
                f"no query found for {settings} after {ATTEMPTS_PER_QUERY} walks (query #{k})"
            )
    return out

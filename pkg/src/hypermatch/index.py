"""Signature-partitioned hyperedge tables with per-partition inverted indexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .hypergraph import Hypergraph, Signature

EMPTY: tuple[int, ...] = ()


@dataclass
class Partition:
    """All hyperedges sharing one signature.

    ``edges`` is the hyperedge table (ids resolved through the source graph);
    ``inverted`` maps a vertex to the ascending ids of the table edges that
    contain it.
    """

    signature: Signature
    edges: list[int] = field(default_factory=list)
    inverted: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.edges)

    def posting(self, v: int) -> tuple[int, ...]:
        return self.inverted.get(v, EMPTY)


class IndexSizeStats(NamedTuple):
    num_partitions: int
    total_table_entries: int
    total_posting_entries: int


class IndexedHypergraph:
    """A data hypergraph together with its partitioned storage.

    Immutable after :func:`build_index`; safe to share between threads and
    forked worker processes.
    """

    def __init__(self, graph: Hypergraph, partitions: dict[Signature, Partition]):
        self.graph = graph
        self.partitions = partitions

    def __repr__(self) -> str:
        return f"IndexedHypergraph({self.graph!r}, partitions={len(self.partitions)})"

    def partition(self, sig: Signature) -> Partition | None:
        return self.partitions.get(sig)

    def cardinality(self, sig: Signature) -> int:
        part = self.partitions.get(sig)
        return len(part.edges) if part is not None else 0

    def incident_in_partition(self, v: int, sig: Signature) -> tuple[int, ...]:
        """he(v, s); empty for unknown vertices or signatures."""
        part = self.partitions.get(sig)
        if part is None:
            return EMPTY
        return part.inverted.get(v, EMPTY)

    @property
    def max_partition_size(self) -> int:
        return max(len(p.edges) for p in self.partitions.values())

    def size_stats(self) -> IndexSizeStats:
        return IndexSizeStats(
            num_partitions=len(self.partitions),
            total_table_entries=sum(len(p.edges) for p in self.partitions.values()),
            total_posting_entries=sum(
                len(pl) for p in self.partitions.values() for pl in p.inverted.values()
            ),
        )


def build_index(graph: Hypergraph) -> IndexedHypergraph:
    partitions: dict[Signature, Partition] = {}
    scatter: dict[Signature, dict[int, list[int]]] = {}
    for eid, sig in enumerate(graph.signatures):
        part = partitions.get(sig)
        if part is None:
            part = partitions[sig] = Partition(sig)
            scatter[sig] = {}
        part.edges.append(eid)
        inv = scatter[sig]
        for v in graph.edges[eid]:
            inv.setdefault(v, []).append(eid)
    # edge ids are visited ascending, so every posting list is already sorted
    for sig, inv in scatter.items():
        partitions[sig].inverted = {v: tuple(pl) for v, pl in inv.items()}
    return IndexedHypergraph(graph, partitions)


def cardinality(idx: IndexedHypergraph, sig: Signature) -> int:
    return idx.cardinality(sig)


def incident_in_partition(idx: IndexedHypergraph, v: int, sig: Signature) -> tuple[int, ...]:
    return idx.incident_in_partition(v, sig)


def index_size_stats(idx: IndexedHypergraph) -> IndexSizeStats:
    return idx.size_stats()

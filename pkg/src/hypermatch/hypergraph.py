"""Vertex-labelled simple hypergraphs.

A :class:`Hypergraph` is immutable once built. Vertices are ``0..n-1``,
labels are dense non-negative integers and every hyperedge is stored as a
sorted tuple of vertex ids, so set equality is tuple equality.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

Signature = tuple[tuple[int, int], ...]


class HypergraphError(ValueError):
    """Raised for malformed hypergraph input."""


class Hyperedge(NamedTuple):
    id: int
    vertices: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class HypergraphStats:
    num_vertices: int
    num_hyperedges: int
    num_labels: int
    max_arity: int
    mean_arity: float

    def as_dict(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "num_hyperedges": self.num_hyperedges,
            "num_labels": self.num_labels,
            "max_arity": self.max_arity,
            "mean_arity": self.mean_arity,
        }


def make_signature(labels: Iterable[int]) -> Signature:
    """Canonical label multiset: ``((label, multiplicity), ...)`` sorted by label."""
    return tuple(sorted(Counter(labels).items()))


class Hypergraph:
    """An undirected, vertex-labelled simple hypergraph.

    Build instances with :func:`canonicalize` (or :meth:`from_edges`); the
    constructor trusts its input and only wires up the incidence lists.
    """

    __slots__ = ("labels", "edges", "_incidence", "_signatures")

    def __init__(self, labels: Sequence[int], edges: Sequence[tuple[int, ...]]):
        if not edges:
            raise HypergraphError("a hypergraph needs at least one hyperedge")
        self.labels: tuple[int, ...] = tuple(labels)
        self.edges: tuple[tuple[int, ...], ...] = tuple(edges)
        incidence: list[list[int]] = [[] for _ in self.labels]
        for eid, vertices in enumerate(self.edges):
            for v in vertices:
                incidence[v].append(eid)
        self._incidence = tuple(tuple(he) for he in incidence)
        self._signatures: tuple[Signature, ...] | None = None

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]], labels: Mapping[int, int] | Sequence[int]) -> Hypergraph:
        return canonicalize(edges, labels)

    def __repr__(self) -> str:
        return f"Hypergraph(|V|={self.vertex_count}, |E|={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.labels, self.edges))

    # basic accessors

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def label_set(self) -> frozenset[int]:
        return frozenset(self.labels)

    def hyperedge(self, eid: int) -> Hyperedge:
        self._check_edge(eid)
        return Hyperedge(eid, self.edges[eid])

    def hyperedges(self) -> list[Hyperedge]:
        return [Hyperedge(i, e) for i, e in enumerate(self.edges)]

    def label(self, v: int) -> int:
        self._check_vertex(v)
        return self.labels[v]

    def arity(self, eid: int) -> int:
        self._check_edge(eid)
        return len(self.edges[eid])

    def signature(self, eid: int) -> Signature:
        self._check_edge(eid)
        return self.signatures[eid]

    @property
    def signatures(self) -> tuple[Signature, ...]:
        if self._signatures is None:
            labels = self.labels
            self._signatures = tuple(make_signature(labels[v] for v in e) for e in self.edges)
        return self._signatures

    # incidence view

    def incident(self, v: int) -> tuple[int, ...]:
        """he(v): ids of hyperedges containing ``v``, ascending."""
        self._check_vertex(v)
        return self._incidence[v]

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self._incidence[v])

    def incident_with_arity(self, v: int, arity: int) -> tuple[int, ...]:
        """he^a(v): incident hyperedges whose arity is ``arity``."""
        self._check_vertex(v)
        return tuple(e for e in self._incidence[v] if len(self.edges[e]) == arity)

    def adjacent_vertices(self, v: int) -> frozenset[int]:
        """adj(v): vertices sharing at least one hyperedge with ``v``."""
        self._check_vertex(v)
        out: set[int] = set()
        for e in self._incidence[v]:
            out.update(self.edges[e])
        out.discard(v)
        return frozenset(out)

    def adjacent_edges(self, eid: int) -> frozenset[int]:
        """adj(e): hyperedges other than ``e`` that share a vertex with it."""
        self._check_edge(eid)
        out: set[int] = set()
        for v in self.edges[eid]:
            out.update(self._incidence[v])
        out.discard(eid)
        return frozenset(out)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < len(self.labels):
            raise IndexError(f"vertex id {v} out of range 0..{len(self.labels) - 1}")

    def _check_edge(self, eid: int) -> None:
        if not 0 <= eid < len(self.edges):
            raise IndexError(f"hyperedge id {eid} out of range 0..{len(self.edges) - 1}")


def canonicalize(
    edges: Iterable[Iterable[int]],
    labels: Mapping[int, int] | Sequence[int],
    vertex_count: int | None = None,
) -> Hypergraph:
    """Build a simple hypergraph from raw edge lists.

    Vertex lists are deduplicated and sorted; repeated hyperedges collapse onto
    their first occurrence and ids follow the surviving input order.
    ``labels`` maps every vertex id to a label id. When it is a mapping,
    ``vertex_count`` defaults to ``max(id) + 1`` and every id below it needs a
    label.
    """
    if isinstance(labels, Mapping):
        n = vertex_count if vertex_count is not None else (max(labels) + 1 if labels else 0)
        missing = [v for v in range(n) if v not in labels]
        if missing:
            raise HypergraphError(f"vertices without labels: {missing[:10]}")
        label_list = [labels[v] for v in range(n)]
    else:
        label_list = list(labels)
        if vertex_count is not None and vertex_count != len(label_list):
            raise HypergraphError(f"expected {vertex_count} labels, got {len(label_list)}")
    for lab in label_list:
        if not isinstance(lab, int) or lab < 0:
            raise HypergraphError(f"label ids must be non-negative integers, got {lab!r}")
    n = len(label_list)

    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    for pos, raw in enumerate(edges):
        vertices = tuple(sorted(set(raw)))
        if not vertices:
            raise HypergraphError(f"hyperedge #{pos} is empty")
        for v in vertices:
            if not 0 <= v < n:
                raise HypergraphError(f"hyperedge #{pos} references vertex {v} without a label")
        if vertices in seen:
            continue
        seen.add(vertices)
        out.append(vertices)
    return Hypergraph(label_list, out)


def stats(h: Hypergraph) -> HypergraphStats:
    arities = [len(e) for e in h.edges]
    return HypergraphStats(
        num_vertices=h.vertex_count,
        num_hyperedges=h.edge_count,
        num_labels=len(h.label_set),
        max_arity=max(arities),
        mean_arity=sum(arities) / len(arities),
    )


def is_connected(h: Hypergraph) -> bool:
    """True iff every vertex is covered and the hyperedges form one component."""
    if any(not h.incident(v) for v in range(h.vertex_count)):
        return False
    seen = {0}
    stack = [0]
    while stack:
        e = stack.pop()
        for v in h.edges[e]:
            for nxt in h.incident(v):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return len(seen) == h.edge_count

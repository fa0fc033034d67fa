"""Matching order and compiled query plans.

Steps are 0-based positions in the matching order. Sets of steps are kept as
integer bitmasks (bit ``i`` set means step ``i``), which makes vertex
profiles cheap to build and compare.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hypergraph import Hypergraph, Signature, is_connected
from .index import IndexedHypergraph


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class SharedVertex:
    """A query vertex shared between the current step and an earlier one."""

    vertex: int
    label: int
    prior_degree: int  # number of earlier steps containing the vertex


@dataclass(frozen=True)
class StepPlan:
    step: int
    query_edge: int
    vertices: tuple[int, ...]
    signature: Signature
    adjacent: tuple[tuple[int, tuple[SharedVertex, ...]], ...]
    nonadjacent: tuple[int, ...]
    vertex_masks: tuple[int, ...]  # aligned with ``vertices``
    profile_template: tuple[tuple[int, int], ...]  # sorted (label, step mask)
    prefix_vertex_count: int

    def template_steps(self, u: int) -> tuple[int, ...]:
        """Steps (up to and including this one) whose query edge contains ``u``."""
        pos = self.vertices.index(u)
        mask = self.vertex_masks[pos]
        return tuple(i for i in range(self.step + 1) if mask >> i & 1)


@dataclass(frozen=True)
class QueryPlan:
    query: Hypergraph
    order: tuple[int, ...]
    steps: tuple[StepPlan, ...]

    def __len__(self) -> int:
        return len(self.order)

    @property
    def prefix_vertex_counts(self) -> tuple[int, ...]:
        return tuple(s.prefix_vertex_count for s in self.steps)

    def align(self, matched: tuple[int, ...]) -> tuple[int, ...]:
        """Re-order a full matched tuple from matching order to query-edge order."""
        out = [0] * len(self.order)
        for step, qe in enumerate(self.order):
            out[qe] = matched[step]
        return tuple(out)


def _cheaper(card_a: int, shared_a: int, card_b: int, shared_b: int) -> bool:
    # card_a / shared_a < card_b / shared_b, exact
    return card_a * shared_b < card_b * shared_a


def compute_matching_order(q: Hypergraph, idx: IndexedHypergraph) -> tuple[int, ...]:
    """Start from the rarest query hyperedge, then greedily add the connected
    hyperedge minimising cardinality per already-covered vertex.

    Ties go to the smaller query hyperedge id.
    """
    if not is_connected(q):
        raise PlanError("query hypergraph must be connected")
    sigs = q.signatures
    cards = [idx.cardinality(s) for s in sigs]
    first = min(range(q.edge_count), key=lambda e: (cards[e], e))
    order = [first]
    chosen = {first}
    covered = set(q.edges[first])
    while len(order) < q.edge_count:
        best = -1
        best_shared = 0
        for e in range(q.edge_count):
            if e in chosen:
                continue
            shared = len(covered.intersection(q.edges[e]))
            if shared == 0:
                continue
            if best < 0 or _cheaper(cards[e], shared, cards[best], best_shared):
                best, best_shared = e, shared
        order.append(best)
        chosen.add(best)
        covered.update(q.edges[best])
    return tuple(order)


def validate_order(q: Hypergraph, order: tuple[int, ...]) -> None:
    if sorted(order) != list(range(q.edge_count)):
        raise PlanError(f"order {order} is not a permutation of the query hyperedges")
    covered = set(q.edges[order[0]])
    for qe in order[1:]:
        if covered.isdisjoint(q.edges[qe]):
            raise PlanError(f"order {order} is not connected at hyperedge {qe}")
        covered.update(q.edges[qe])


def compile_plan(q: Hypergraph, order: tuple[int, ...] | list[int]) -> QueryPlan:
    order = tuple(order)
    validate_order(q, order)
    labels = q.labels
    sigs = q.signatures
    masks: dict[int, int] = {}  # query vertex -> steps containing it so far
    steps = []
    for i, qe in enumerate(order):
        verts = q.edges[qe]
        vset = set(verts)
        adjacent = []
        nonadjacent = []
        for j in range(i):
            shared = vset.intersection(q.edges[order[j]])
            if shared:
                adjacent.append(
                    (
                        j,
                        tuple(
                            SharedVertex(u, labels[u], masks[u].bit_count())
                            for u in sorted(shared)
                        ),
                    )
                )
            else:
                nonadjacent.append(j)
        for u in verts:
            masks[u] = masks.get(u, 0) | (1 << i)
        step = StepPlan(
            step=i,
            query_edge=qe,
            vertices=verts,
            signature=sigs[qe],
            adjacent=tuple(adjacent),
            nonadjacent=tuple(nonadjacent),
            vertex_masks=tuple(masks[u] for u in verts),
            profile_template=tuple(sorted((labels[u], masks[u]) for u in verts)),
            prefix_vertex_count=len(masks),
        )
        steps.append(step)
    return QueryPlan(query=q, order=order, steps=tuple(steps))


def plan_query(q: Hypergraph, idx: IndexedHypergraph) -> QueryPlan:
    return compile_plan(q, compute_matching_order(q, idx))

"""Match-by-vertex reference matchers used to cross-check the engine.

Both matchers report embeddings in the engine's unit: tuples of data
hyperedge ids aligned with the query's hyperedge order, deduplicated over the
vertex mappings that induce them.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from typing import Iterable

from .hypergraph import Hypergraph, is_connected

BRUTE_FORCE_MAX_VERTICES = 10


class OracleRefusal(RuntimeError):
    """The instance is outside the oracle's supported size."""


class IHSFilter:
    """Incident-hyperedge-structure filter over a fixed data hypergraph.

    ``literal=True`` switches the hyperedge-label condition to a single
    existential pair check instead of requiring a same-signature partner for
    every incident query hyperedge.
    """

    def __init__(self, h: Hypergraph, literal: bool = False):
        self.h = h
        self.literal = literal
        self._features = [_features(h, v) for v in range(h.vertex_count)]
        self._by_label: dict[int, list[int]] = {}
        for v, lab in enumerate(h.labels):
            self._by_label.setdefault(lab, []).append(v)

    def candidates(self, q: Hypergraph, u: int) -> set[int]:
        lab = q.labels[u]
        deg, nadj, arity_counts, sigs = _features(q, u)
        out = set()
        for v in self._by_label.get(lab, ()):
            vdeg, vnadj, varity, vsigs = self._features[v]
            if deg > vdeg or nadj > vnadj:
                continue
            if any(n > varity.get(a, 0) for a, n in arity_counts.items()):
                continue
            if self.literal:
                if sigs.isdisjoint(vsigs):
                    continue
            elif not sigs <= vsigs:
                continue
            out.add(v)
        return out


def _features(h: Hypergraph, v: int):
    he = h.incident(v)
    return (
        len(he),
        len(h.adjacent_vertices(v)),
        Counter(len(h.edges[e]) for e in he),
        frozenset(h.signatures[e] for e in he),
    )


def ihs_filter(u: int, q: Hypergraph, h: Hypergraph, literal: bool = False) -> set[int]:
    return IHSFilter(h, literal).candidates(q, u)


def _edge_lookup(h: Hypergraph) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(h.edges)}


def _align(q: Hypergraph, f: dict[int, int] | list[int], lookup: dict[tuple[int, ...], int]) -> tuple[int, ...]:
    return tuple(lookup[tuple(sorted(f[u] for u in e))] for e in q.edges)


def vertex_order(q: Hypergraph, candidates: list[set[int]]) -> list[int]:
    """BFS over query vertices from the one with the fewest candidates."""
    start = min(range(q.vertex_count), key=lambda u: (len(candidates[u]), u))
    order = [start]
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in sorted(q.adjacent_vertices(u)):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def enumerate_by_vertex(
    q: Hypergraph,
    h: Hypergraph,
    use_ihs: bool = True,
    literal_ihs: bool = False,
    eager: bool = True,
) -> set[tuple[int, ...]]:
    """Backtracking over query vertices.

    After assigning ``u``, every query hyperedge whose vertices are now all
    assigned must map onto an existing data hyperedge. With ``eager`` on, each
    partly assigned query hyperedge containing ``u`` must also still fit
    inside some data hyperedge of the same signature; this only prunes
    branches that the closing check would reject later.
    """
    if not is_connected(q):
        raise ValueError("query hypergraph must be connected")
    if use_ihs:
        filt = IHSFilter(h, literal_ihs)
        cands = [filt.candidates(q, u) for u in range(q.vertex_count)]
    else:
        by_label: dict[int, set[int]] = {}
        for v, lab in enumerate(h.labels):
            by_label.setdefault(lab, set()).add(v)
        cands = [by_label.get(q.labels[u], set()) for u in range(q.vertex_count)]
    if any(not c for c in cands):
        return set()
    order = vertex_order(q, cands)
    position = {u: i for i, u in enumerate(order)}
    n = len(order)
    # query hyperedges completed when order[i] is assigned
    closing: list[list[tuple[int, ...]]] = [[] for _ in order]
    # (signature, earlier vertices) of query hyperedges left open at order[i]
    partial: list[list[tuple[tuple, tuple[int, ...]]]] = [[] for _ in order]
    for qi, e in enumerate(q.edges):
        last = max(position[u] for u in e)
        closing[last].append(e)
        if eager:
            for u in e:
                i = position[u]
                earlier = tuple(w for w in e if position[w] < i)
                if i < last and earlier:
                    partial[i].append((q.signatures[qi], earlier))
    ordered_cands = [sorted(cands[u]) for u in order]
    edge_set = set(h.edges)
    lookup = _edge_lookup(h)
    data_sets = [frozenset(x) for x in h.edges]
    f = [-1] * q.vertex_count
    used: set[int] = set()
    found: set[tuple[int, ...]] = set()

    def fits(v: int, sig: tuple, earlier: tuple[int, ...]) -> bool:
        images = [f[w] for w in earlier]
        for d in h.incident(v):
            if h.signatures[d] == sig and all(x in data_sets[d] for x in images):
                return True
        return False

    def backtrack(i: int) -> None:
        if i == n:
            found.add(_align(q, f, lookup))
            return
        u = order[i]
        for v in ordered_cands[i]:
            if v in used:
                continue
            if partial[i] and not all(fits(v, sig, earlier) for sig, earlier in partial[i]):
                continue
            f[u] = v
            if all(tuple(sorted(f[w] for w in e)) in edge_set for e in closing[i]):
                used.add(v)
                backtrack(i + 1)
                used.discard(v)
        f[u] = -1

    backtrack(0)
    return found


def brute_force_size(q: Hypergraph, h: Hypergraph) -> int:
    """Number of injective label-preserving vertex maps brute force would try."""
    need = Counter(q.labels)
    have = Counter(h.labels)
    total = 1
    for lab, k in need.items():
        total *= math.perm(have.get(lab, 0), k)
    return total


def brute_force_tiny(
    q: Hypergraph, h: Hypergraph, max_vertices: int = BRUTE_FORCE_MAX_VERTICES
) -> set[tuple[int, ...]]:
    """Try every injective label-preserving vertex map and keep those under
    which each query hyperedge's image is a data hyperedge."""
    if q.vertex_count > max_vertices:
        raise OracleRefusal(
            f"query has {q.vertex_count} vertices; brute force is limited to {max_vertices}"
        )
    groups: dict[int, list[int]] = {}
    for u, lab in enumerate(q.labels):
        groups.setdefault(lab, []).append(u)
    pools: dict[int, list[int]] = {lab: [] for lab in groups}
    for v, lab in enumerate(h.labels):
        if lab in pools:
            pools[lab].append(v)
    if any(len(pools[lab]) < len(us) for lab, us in groups.items()):
        return set()
    labels = list(groups)
    qverts = [u for lab in labels for u in groups[lab]]
    choices: list[Iterable[tuple[int, ...]]] = [
        itertools.permutations(pools[lab], len(groups[lab])) for lab in labels
    ]
    # query edges rewritten as positions into the flattened assignment
    pos = {u: i for i, u in enumerate(qverts)}
    qedges = [tuple(pos[u] for u in e) for e in q.edges]
    lookup = _edge_lookup(h)
    found: set[tuple[int, ...]] = set()
    for combo in itertools.product(*[list(c) for c in choices]):
        assign = [v for part in combo for v in part]
        ids = []
        for e in qedges:
            eid = lookup.get(tuple(sorted(assign[k] for k in e)))
            if eid is None:
                break
            ids.append(eid)
        else:
            found.add(tuple(ids))
    return found

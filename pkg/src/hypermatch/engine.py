"""Match-by-hyperedge enumeration.

A partial embedding is grown one data hyperedge at a time along the matching
order. Candidates for the next step come from set algebra over the inverted
index; each candidate is then checked with a vertex-count test and a
comparison of vertex-profile multisets, so no vertex-level backtracking is
needed.

Vertex profiles are ``(label, step_mask)`` pairs where ``step_mask`` has bit
``i`` set when the vertex lies in the hyperedge matched at step ``i``. Naming
matched hyperedges by their step makes the query-side profiles static, so
they are precomputed in the plan.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .index import IndexedHypergraph
from .planner import QueryPlan
from .setops import intersect_all, union_all


class EmbeddingError(ValueError):
    pass


class MatchTimeout(Exception):
    """Raised when enumeration passes its deadline; ``count`` is the partial tally."""

    def __init__(self, count: int, stats: MatchStats | None = None):
        super().__init__(f"timed out after {count} embeddings")
        self.count = count
        self.stats = stats


class PartialEmbedding:
    """Matched data hyperedges (in matching order) plus the incidence of the
    induced data subhypergraph.

    ``incidence`` maps each covered data vertex to a bitmask of the steps whose
    matched hyperedge contains it. Instances are treated as immutable.
    """

    __slots__ = ("matched", "incidence")

    def __init__(self, matched: tuple[int, ...] = (), incidence: dict[int, int] | None = None):
        self.matched = matched
        self.incidence = {} if incidence is None else incidence

    def __len__(self) -> int:
        return len(self.matched)

    def __repr__(self) -> str:
        return f"PartialEmbedding({self.matched})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialEmbedding):
            return NotImplemented
        return self.matched == other.matched and self.incidence == other.incidence

    def __hash__(self) -> int:
        return hash(self.matched)

    def __reduce__(self):
        return (PartialEmbedding, (self.matched, self.incidence))

    @property
    def vertex_count(self) -> int:
        return len(self.incidence)

    def degree(self, v: int) -> int:
        return self.incidence.get(v, 0).bit_count()

    def steps_of(self, v: int) -> tuple[int, ...]:
        mask = self.incidence.get(v, 0)
        return tuple(i for i in range(len(self.matched)) if mask >> i & 1)


@dataclass(frozen=True)
class VertexProfile:
    label: int
    incident_steps: frozenset[int]

    @classmethod
    def from_mask(cls, label: int, mask: int) -> VertexProfile:
        return cls(label, frozenset(i for i in range(mask.bit_length()) if mask >> i & 1))


def profiles_equal(query_side, data_side) -> bool:
    """Multiset equality of two profile collections (sort-and-compare)."""
    key = lambda p: (p.label, sorted(p.incident_steps))  # noqa: E731
    return sorted(query_side, key=key) == sorted(data_side, key=key)


@dataclass
class CandidateSet:
    candidates: tuple[int, ...]
    forbidden_vertices: int = 0
    incident_sizes: tuple[int, ...] = ()


@dataclass
class MatchStats:
    """Filtering counters; every scanned first-step hyperedge counts as a
    candidate that passed both checks."""

    candidates: int = 0
    filtered: int = 0
    validated: int = 0
    embeddings: int = 0
    per_step_candidates: list[int] = field(default_factory=list)

    def merge(self, other: MatchStats) -> None:
        self.candidates += other.candidates
        self.filtered += other.filtered
        self.validated += other.validated
        self.embeddings += other.embeddings
        if len(self.per_step_candidates) < len(other.per_step_candidates):
            self.per_step_candidates.extend(
                [0] * (len(other.per_step_candidates) - len(self.per_step_candidates))
            )
        for i, c in enumerate(other.per_step_candidates):
            self.per_step_candidates[i] += c

    def as_dict(self) -> dict:
        return {
            "candidates": self.candidates,
            "filtered": self.filtered,
            "validated": self.validated,
            "embeddings": self.embeddings,
            "per_step_candidates": list(self.per_step_candidates),
        }


class Matcher:
    """A query plan bound to an indexed data hypergraph.

    Holds only read-only state apart from ``stats``, which each worker owns
    separately (see :meth:`fork`).
    """

    def __init__(self, plan: QueryPlan, idx: IndexedHypergraph):
        self.plan = plan
        self.idx = idx
        self.depth = len(plan.steps)
        self.labels = idx.graph.labels
        self.edges = idx.graph.edges
        self.inverted = []
        self.adjacency = []
        for st in plan.steps:
            part = idx.partition(st.signature)
            self.inverted.append(part.inverted if part is not None else None)
            self.adjacency.append(
                tuple((j, tuple((s.label, s.prior_degree) for s in shared)) for j, shared in st.adjacent)
            )
        first = idx.partition(plan.steps[0].signature)
        self.first_edges: tuple[int, ...] = tuple(first.edges) if first is not None else ()
        self.empty = any(inv is None for inv in self.inverted)
        self.stats = MatchStats(per_step_candidates=[0] * self.depth)

    def fork(self) -> Matcher:
        clone = object.__new__(Matcher)
        clone.__dict__.update(self.__dict__)
        clone.stats = MatchStats(per_step_candidates=[0] * self.depth)
        return clone

    # SCAN

    def scan(self, edges: tuple[int, ...] | None = None) -> list[PartialEmbedding]:
        """Single-step embeddings for the given slice of the first partition."""
        if edges is None:
            edges = self.first_edges
        if self.empty:
            return []
        data_edges = self.edges
        out = [PartialEmbedding((e,), {v: 1 for v in data_edges[e]}) for e in edges]
        n = len(out)
        self.stats.candidates += n
        self.stats.filtered += n
        self.stats.validated += n
        self.stats.per_step_candidates[0] += n
        return out

    # EXPAND

    def candidates(self, m: PartialEmbedding) -> CandidateSet:
        i = len(m.matched)
        if not 1 <= i < self.depth:
            raise EmbeddingError(f"cannot generate candidates for step {i}")
        inv = self.inverted[i]
        if inv is None:
            return CandidateSet(())
        matched = m.matched
        inc = m.incidence
        edges = self.edges
        labels = self.labels
        forbidden: set[int] = set()
        for j in self.plan.steps[i].nonadjacent:
            forbidden.update(edges[matched[j]])
        lists = []
        sizes = []
        for j, shared in self.adjacency[i]:
            fe = edges[matched[j]]
            for lab, deg in shared:
                admissible = [
                    v
                    for v in fe
                    if labels[v] == lab and inc[v].bit_count() == deg and v not in forbidden
                ]
                sizes.append(len(admissible))
                if not admissible:
                    return CandidateSet((), len(forbidden), tuple(sizes))
                lists.append(union_all([inv.get(v, ()) for v in admissible]))
        result = intersect_all(lists)
        used = set(matched)
        return CandidateSet(
            tuple(c for c in result if c not in used), len(forbidden), tuple(sizes)
        )

    def expand(self, m: PartialEmbedding) -> list[PartialEmbedding]:
        """All valid one-step extensions of ``m``, in ascending candidate order."""
        i = len(m.matched)
        cands = self._candidate_list(m, i)
        stats = self.stats
        stats.candidates += len(cands)
        stats.per_step_candidates[i] += len(cands)
        if not cands:
            return []
        st = self.plan.steps[i]
        target = st.prefix_vertex_count
        template = list(st.profile_template)
        bit = 1 << i
        inc = m.incidence
        base = len(inc)
        labels = self.labels
        edges = self.edges
        matched = m.matched
        out = []
        for c in cands:
            fresh = 0
            prof = []
            ce = edges[c]
            for v in ce:
                mk = inc.get(v)
                if mk is None:
                    fresh += 1
                    prof.append((labels[v], bit))
                else:
                    prof.append((labels[v], mk | bit))
            if base + fresh != target:
                continue
            stats.filtered += 1
            prof.sort()
            if prof != template:
                continue
            stats.validated += 1
            child = inc.copy()
            for v in ce:
                child[v] = child.get(v, 0) | bit
            out.append(PartialEmbedding(matched + (c,), child))
        return out

    def _candidate_list(self, m: PartialEmbedding, i: int) -> list[int]:
        inv = self.inverted[i]
        if inv is None:
            return []
        matched = m.matched
        inc = m.incidence
        edges = self.edges
        labels = self.labels
        nonadj = self.plan.steps[i].nonadjacent
        if nonadj:
            forbidden = set()
            for j in nonadj:
                forbidden.update(edges[matched[j]])
        else:
            forbidden = ()
        lists = []
        for j, shared in self.adjacency[i]:
            fe = edges[matched[j]]
            for lab, deg in shared:
                pls = [
                    inv.get(v, ())
                    for v in fe
                    if labels[v] == lab and inc[v].bit_count() == deg and v not in forbidden
                ]
                if not pls:
                    return []
                lists.append(pls[0] if len(pls) == 1 else union_all(pls))
        result = lists[0] if len(lists) == 1 else intersect_all(lists)
        return [c for c in result if c not in matched]

    def is_complete(self, m: PartialEmbedding) -> bool:
        return len(m.matched) == self.depth

    def align(self, m: PartialEmbedding) -> tuple[int, ...]:
        return self.plan.align(m.matched)


def scan_first(plan: QueryPlan, idx: IndexedHypergraph) -> Iterator[PartialEmbedding]:
    yield from Matcher(plan, idx).scan()


def generate_candidates(
    plan: QueryPlan, step: int, m: PartialEmbedding, idx: IndexedHypergraph
) -> CandidateSet:
    """Candidate data hyperedges for matching-order position ``step`` (0-based)."""
    if len(m.matched) != step:
        raise EmbeddingError(f"embedding has {len(m.matched)} steps, expected {step}")
    return Matcher(plan, idx).candidates(m)


def extend(m: PartialEmbedding, c: int, idx: IndexedHypergraph) -> PartialEmbedding:
    if c in m.matched:
        raise EmbeddingError(f"hyperedge {c} is already matched")
    bit = 1 << len(m.matched)
    inc = m.incidence.copy()
    for v in idx.graph.edges[c]:
        inc[v] = inc.get(v, 0) | bit
    return PartialEmbedding(m.matched + (c,), inc)


def is_valid_embedding(plan: QueryPlan, step: int, m: PartialEmbedding, idx: IndexedHypergraph) -> bool:
    """Check the hyperedge matched at ``step`` (0-based) against the query."""
    if len(m.matched) != step + 1:
        raise EmbeddingError(f"embedding has {len(m.matched)} steps, expected {step + 1}")
    st = plan.steps[step]
    if len(m.incidence) != st.prefix_vertex_count:
        return False
    labels = idx.graph.labels
    data = sorted((labels[v], m.incidence[v]) for v in idx.graph.edges[m.matched[step]])
    return data == list(st.profile_template)


def enumerate_sequential(
    plan: QueryPlan,
    idx: IndexedHypergraph,
    sink: Callable[[tuple[int, ...]], None] | None = None,
    *,
    stats: MatchStats | None = None,
    trace: list | None = None,
    deadline: float | None = None,
) -> int:
    """Depth-first enumeration; returns the number of embeddings.

    Each embedding reaches ``sink`` once as a tuple of data hyperedge ids
    aligned with the query's hyperedge order. ``trace`` (if given) receives the
    matched tuple of every partial embedding in visiting order. Raises
    :class:`MatchTimeout` once ``deadline`` (a ``time.monotonic`` value) passes.
    """
    mt = Matcher(plan, idx)
    depth = mt.depth
    count = 0
    ticks = 0

    def visit(m: PartialEmbedding) -> None:
        nonlocal count, ticks
        if trace is not None:
            trace.append(m.matched)
        if len(m.matched) == depth:
            count += 1
            if sink is not None:
                sink(plan.align(m.matched))
            return
        if deadline is not None:
            ticks += 1
            if ticks & 255 == 0 and time.monotonic() > deadline:
                raise MatchTimeout(count, mt.stats)
        for child in mt.expand(m):
            visit(child)

    try:
        for m in mt.scan():
            visit(m)
    finally:
        mt.stats.embeddings = count
        if stats is not None:
            stats.merge(mt.stats)
    return count


def find_embeddings(plan: QueryPlan, idx: IndexedHypergraph) -> set[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    enumerate_sequential(plan, idx, out.add)
    return out

import random

import pytest

from hypermatch.engine import enumerate_sequential
from hypermatch.hypergraph import is_connected
from hypermatch.index import build_index
from hypermatch.planner import plan_query
from hypermatch.querygen import (
    PRESETS,
    QueryGenerationError,
    QuerySettings,
    generate_queries,
    generate_queries_with_sources,
    random_walk,
)


class TestSettings:
    def test_presets(self):
        q2 = PRESETS["q2"]
        assert q2 == (2, 5, 15)

    @pytest.mark.parametrize("args", [(0, 1, 2), (2, 5, 4)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            QuerySettings(*args)


class TestGenerate:
    def test_f1_self_match(self, f1, f1_idx):
        queries = generate_queries(f1, QuerySettings(2, 2, 6, seed=7, num_queries=5))
        assert len(queries) == 5
        for q in queries:
            assert q.edge_count == 2 and is_connected(q)
            assert 2 <= q.vertex_count <= 6
            assert enumerate_sequential(plan_query(q, f1_idx), f1_idx) >= 1

    def test_deterministic(self, f1):
        s = QuerySettings(3, 1, 10, seed=11, num_queries=4)
        assert generate_queries(f1, s) == generate_queries(f1, s)

    def test_single_edge_always_accepted(self, f1):
        qs = generate_queries(f1, QuerySettings(1, 1, 4, seed=3, num_queries=10))
        assert all(q.edge_count == 1 for q in qs)

    def test_sources_are_connected_walks(self, f1):
        for q, src in generate_queries_with_sources(f1, QuerySettings(3, 1, 10, seed=5, num_queries=5)):
            assert len(set(src)) == 3
            assert sorted(f1.signature(i) for i in src) == sorted(q.signatures)

    def test_walk_collects_distinct_edges(self, f1):
        walk = random_walk(f1, 6, random.Random(0))
        assert sorted(walk) == list(range(6))

    def test_infeasible_settings_fail(self, f1):
        with pytest.raises(QueryGenerationError, match="2"):
            generate_queries(f1, QuerySettings(2, 50, 60, seed=1))

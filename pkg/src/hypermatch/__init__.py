"""Exact subhypergraph matching by hyperedges, with a work-stealing parallel runtime."""

from .engine import (
    CandidateSet,
    Matcher,
    MatchStats,
    MatchTimeout,
    PartialEmbedding,
    VertexProfile,
    enumerate_sequential,
    extend,
    find_embeddings,
    generate_candidates,
    is_valid_embedding,
    scan_first,
)
from .hypergraph import (
    Hyperedge,
    Hypergraph,
    HypergraphError,
    HypergraphStats,
    canonicalize,
    is_connected,
    make_signature,
    stats,
)
from .index import IndexedHypergraph, Partition, build_index, cardinality, incident_in_partition, index_size_stats
from .planner import QueryPlan, compile_plan, compute_matching_order, plan_query
from .runtime import EngineConfig, ExecutionReport, execute_parallel

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "EngineConfig",
    "ExecutionReport",
    "Hyperedge",
    "Hypergraph",
    "HypergraphError",
    "HypergraphStats",
    "IndexedHypergraph",
    "MatchStats",
    "MatchTimeout",
    "Matcher",
    "PartialEmbedding",
    "Partition",
    "QueryPlan",
    "VertexProfile",
    "build_index",
    "canonicalize",
    "cardinality",
    "compile_plan",
    "compute_matching_order",
    "enumerate_sequential",
    "execute_parallel",
    "extend",
    "find_embeddings",
    "generate_candidates",
    "incident_in_partition",
    "index_size_stats",
    "is_connected",
    "is_valid_embedding",
    "make_signature",
    "plan_query",
    "scan_first",
    "stats",
]

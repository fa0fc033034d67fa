"""Parallel execution of a compiled plan as SCAN -> EXPAND* -> SINK tasks.

Every worker runs newest-first from the head of its own deque, which keeps
the number of materialised partial embeddings bounded, and idle workers steal
half of a random busy worker's tasks from the tail.
"""

from __future__ import annotations

from ..engine import Matcher
from ..index import IndexedHypergraph
from ..planner import QueryPlan
from .core import (
    EXPAND,
    SCAN,
    SINK,
    EngineConfig,
    ExecutionReport,
    Task,
    WorkerReport,
    split_slices,
)
from .deque import WorkerDeque, steal
from .processes import available_cores, run_processes
from .threads import run_threads


def execute_parallel(plan: QueryPlan, idx: IndexedHypergraph, config: EngineConfig | None = None) -> ExecutionReport:
    cfg = config or EngineConfig()
    matcher = Matcher(plan, idx)
    if cfg.backend == "process":
        return run_processes(matcher, cfg)
    return run_threads(matcher, cfg)


def memory_bound(plan: QueryPlan, idx: IndexedHypergraph, workers: int) -> int:
    """Upper bound on simultaneously live tasks: p x |E(q)| x largest partition."""
    return workers * len(plan.order) * idx.max_partition_size


__all__ = [
    "EXPAND",
    "SCAN",
    "SINK",
    "EngineConfig",
    "ExecutionReport",
    "Task",
    "WorkerDeque",
    "WorkerReport",
    "available_cores",
    "execute_parallel",
    "memory_bound",
    "split_slices",
    "steal",
]

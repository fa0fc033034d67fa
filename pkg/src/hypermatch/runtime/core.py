"""Tasks, configuration, reports and the task-execution step shared by the
thread and process backends."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ..engine import Matcher, MatchStats, PartialEmbedding

SCAN = "scan"
EXPAND = "expand"
SINK = "sink"


class Task(NamedTuple):
    kind: str
    payload: object  # scan: tuple of first-step edge ids; otherwise a PartialEmbedding

    @property
    def step(self) -> int:
        """Matching-order position this task works on (0-based)."""
        if self.kind == SCAN:
            return 0
        return len(self.payload.matched)


@dataclass(frozen=True)
class EngineConfig:
    workers: int = 1
    sink_mode: str = "count"  # "count" or "emit"
    instrument_memory: bool = True
    backend: str = "thread"  # "thread" or "process"
    steal: bool = True
    initial_split: str = "even"  # "even" or "skewed" (every scan slice on worker 0)
    fuse_sinks: bool = True
    timeout_secs: float | None = None
    trace: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.sink_mode not in ("count", "emit"):
            raise ValueError(f"unknown sink mode {self.sink_mode!r}")
        if self.backend not in ("thread", "process"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.initial_split not in ("even", "skewed"):
            raise ValueError(f"unknown initial split {self.initial_split!r}")


@dataclass
class WorkerReport:
    worker: int
    scan_tasks: int = 0
    expand_tasks: int = 0
    sink_tasks: int = 0
    steals: int = 0
    steal_attempts: int = 0
    busy_secs: float = 0.0
    peak_deque: int = 0
    embeddings: int = 0

    @property
    def tasks(self) -> int:
        return self.scan_tasks + self.expand_tasks + self.sink_tasks

    def as_dict(self) -> dict:
        return {
            "worker": self.worker,
            "tasks": self.tasks,
            "scan_tasks": self.scan_tasks,
            "expand_tasks": self.expand_tasks,
            "sink_tasks": self.sink_tasks,
            "steals": self.steals,
            "steal_attempts": self.steal_attempts,
            "busy_secs": self.busy_secs,
            "peak_deque": self.peak_deque,
            "embeddings": self.embeddings,
        }


@dataclass
class ExecutionReport:
    count: int
    elapsed_secs: float
    workers: list[WorkerReport]
    peak_live_tasks: int
    stats: MatchStats
    backend: str = "thread"
    timed_out: bool = False
    pending_zero_hits: int = 0
    embeddings: list[tuple[int, ...]] | None = None
    trace: list[tuple[str, tuple[int, ...]]] | None = None

    @property
    def total_expand_tasks(self) -> int:
        return sum(w.expand_tasks for w in self.workers)

    @property
    def total_steals(self) -> int:
        return sum(w.steals for w in self.workers)

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "elapsed_ms": self.elapsed_secs * 1000.0,
            "backend": self.backend,
            "timed_out": self.timed_out,
            "peak_live_tasks": self.peak_live_tasks,
            "workers": [w.as_dict() for w in self.workers],
        }


def split_slices(edges: tuple[int, ...], parts: int) -> list[tuple[int, ...]]:
    """Contiguous near-equal slices (sizes differ by at most one)."""
    n = len(edges)
    base, extra = divmod(n, parts)
    out = []
    start = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        out.append(edges[start : start + size])
        start += size
    return out


def initial_tasks(matcher: Matcher, cfg: EngineConfig) -> list[list[Task]]:
    """Scan tasks per worker, one slice each (or all on worker 0 when skewed)."""
    per_worker: list[list[Task]] = [[] for _ in range(cfg.workers)]
    if matcher.empty:
        return per_worker
    for w, sl in enumerate(split_slices(matcher.first_edges, cfg.workers)):
        if sl:
            per_worker[0 if cfg.initial_split == "skewed" else w].append(Task(SCAN, sl))
    return per_worker


class TaskRunner:
    """Executes one task and returns the child tasks it spawns.

    Owner-private: counters, output buffer and match statistics belong to a
    single worker until merged after quiescence.
    """

    def __init__(self, wid: int, matcher: Matcher, cfg: EngineConfig):
        self.matcher = matcher.fork()
        self.report = WorkerReport(wid)
        self.emit = cfg.sink_mode == "emit"
        self.fuse = cfg.fuse_sinks
        self.output: list[tuple[int, ...]] = []
        self.trace: list[tuple[str, tuple[int, ...]]] | None = [] if cfg.trace else None
        self.depth = matcher.depth

    def run(self, task: Task) -> list[Task]:
        kind = task.kind
        rep = self.report
        if kind == EXPAND:
            rep.expand_tasks += 1
            m = task.payload
            if self.trace is not None:
                self.trace.append((EXPAND, m.matched))
            children = self.matcher.expand(m)
        elif kind == SINK:
            rep.sink_tasks += 1
            m = task.payload
            if self.trace is not None:
                self.trace.append((SINK, m.matched))
            rep.embeddings += 1
            if self.emit:
                self.output.append(self.matcher.align(m))
            return []
        else:
            rep.scan_tasks += 1
            children = self.matcher.scan(task.payload)
        if not children:
            return []
        if len(children[0].matched) < self.depth:
            return [Task(EXPAND, c) for c in children]
        if self.fuse:
            rep.sink_tasks += len(children)
            rep.embeddings += len(children)
            if self.emit:
                align = self.matcher.align
                self.output.extend(align(c) for c in children)
            if self.trace is not None:
                self.trace.extend((SINK, c.matched) for c in children)
            return []
        return [Task(SINK, c) for c in children]

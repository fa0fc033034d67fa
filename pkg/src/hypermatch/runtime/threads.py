"""Thread-pool backend with shared deques and a pending-task counter.

The counter is raised by ``children - 1`` when a task finishes, before the
children are published, so it never drops below the number of tasks that
still exist and reaches zero exactly once, at quiescence. Its running maximum
is the global peak of live tasks.
"""

from __future__ import annotations

import random
import threading
import time

from ..engine import Matcher, MatchStats
from .core import EngineConfig, ExecutionReport, TaskRunner, initial_tasks
from .deque import WorkerDeque


class PendingCounter:
    def __init__(self, value: int):
        self._lock = threading.Lock()
        self.value = value
        self.peak = value
        self.zero_hits = 1 if value == 0 else 0

    def add(self, delta: int) -> None:
        with self._lock:
            self.value += delta
            if self.value > self.peak:
                self.peak = self.value
            elif self.value == 0:
                self.zero_hits += 1


class _Worker(threading.Thread):
    CHECK_EVERY = 256

    def __init__(self, wid, pool, runner: TaskRunner, dq: WorkerDeque, seed: int):
        super().__init__(name=f"hm-worker-{wid}", daemon=True)
        self.wid = wid
        self.pool = pool
        self.runner = runner
        self.dq = dq
        self.rng = random.Random(seed)
        self.error: BaseException | None = None

    def run(self) -> None:
        try:
            self._loop()
        except BaseException as exc:  # surfaced by the pool after join
            self.error = exc
            self.pool.abort.set()

    def _loop(self) -> None:
        pool = self.pool
        dq = self.dq
        run = self.runner.run
        pending = pool.pending
        rep = self.runner.report
        abort = pool.abort
        deadline = pool.deadline
        idle = 0.0
        ticks = 0
        start = time.perf_counter()
        while True:
            task = dq.pop()
            if task is not None:
                children = run(task)
                pending.add(len(children) - 1)
                if children:
                    dq.push_all(children)
                ticks += 1
                if ticks % self.CHECK_EVERY == 0:
                    if abort.is_set():
                        break
                    if deadline is not None and time.monotonic() > deadline:
                        pool.timed_out = True
                        abort.set()
                        break
                continue
            t0 = time.perf_counter()
            got = self._steal()
            idle += time.perf_counter() - t0
            if not got:
                break
        rep.busy_secs = time.perf_counter() - start - idle
        rep.peak_deque = dq.peak

    def _steal(self) -> bool:
        """Spin until a steal succeeds (True) or the pool is quiescent (False)."""
        pool = self.pool
        backoff = 1e-5
        while True:
            if pool.pending.value == 0 or pool.abort.is_set():
                return False
            if pool.cfg.steal:
                victims = [w for w in pool.workers if w is not self and w.dq]
                if victims:
                    victim = self.rng.choice(victims)
                    self.runner.report.steal_attempts += 1
                    batch = victim.dq.steal_half()
                    if batch:
                        self.runner.report.steals += 1
                        self.dq.push_tail_batch(batch)
                        return True
                    continue
            time.sleep(backoff)
            backoff = min(backoff * 2, 1e-3)


class ThreadPool:
    def __init__(self, matcher: Matcher, cfg: EngineConfig):
        self.cfg = cfg
        seeds = initial_tasks(matcher, cfg)
        self.pending = PendingCounter(sum(len(s) for s in seeds))
        self.abort = threading.Event()
        self.timed_out = False
        self.deadline = time.monotonic() + cfg.timeout_secs if cfg.timeout_secs else None
        self.workers = [
            _Worker(w, self, TaskRunner(w, matcher, cfg), WorkerDeque(seeds[w]), cfg.seed * 7919 + w)
            for w in range(cfg.workers)
        ]

    def run(self) -> ExecutionReport:
        t0 = time.perf_counter()
        if self.cfg.workers == 1:
            self.workers[0].run()
        else:
            for w in self.workers:
                w.start()
            for w in self.workers:
                w.join()
        elapsed = time.perf_counter() - t0
        for w in self.workers:
            if w.error is not None:
                raise w.error
        return _report(self, elapsed)


def _report(pool: ThreadPool, elapsed: float) -> ExecutionReport:
    stats = MatchStats()
    count = 0
    out = [] if pool.cfg.sink_mode == "emit" else None
    trace = [] if pool.cfg.trace else None
    for w in pool.workers:
        stats.merge(w.runner.matcher.stats)
        count += w.runner.report.embeddings
        if out is not None:
            out.extend(w.runner.output)
        if trace is not None:
            trace.extend(w.runner.trace)
    stats.embeddings = count
    return ExecutionReport(
        count=count,
        elapsed_secs=elapsed,
        workers=[w.runner.report for w in pool.workers],
        peak_live_tasks=pool.pending.peak,
        stats=stats,
        backend="thread",
        timed_out=pool.timed_out,
        pending_zero_hits=pool.pending.zero_hits,
        embeddings=out,
        trace=trace,
    )


def run_threads(matcher: Matcher, cfg: EngineConfig) -> ExecutionReport:
    return ThreadPool(matcher, cfg).run()

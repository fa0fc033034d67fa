"""Forked-process backend for real multi-core execution.

Each worker process owns a plain deque. Stealing is request/response: an idle
worker posts its id to a random busy victim's request queue; the victim polls
that queue between tasks (never blocking on it) and answers with ceil(n/2)
tasks taken from its tail, or with an empty batch.

Termination uses a shared idle-worker count instead of a per-task counter,
which would cost a cross-process lock per task. A worker registers as idle
when its deque empties. A victim that hands over a non-empty batch marks the
thief active again *before* sending, and it is itself active while doing so,
so the count can only reach ``p`` once no task exists anywhere, including
inside a pipe.
"""

from __future__ import annotations

import multiprocessing as mp
import os
import random
import time
import traceback
from collections import deque

from ..engine import Matcher, MatchStats
from .core import EngineConfig, ExecutionReport, TaskRunner, initial_tasks

POLL_EVERY = 16


def _worker_main(wid, matcher, cfg, seeds, shared, requests, replies, results):
    lengths, idle, abort = shared
    p = cfg.workers
    runner = TaskRunner(wid, matcher, cfg)
    rep = runner.report
    rng = random.Random(cfg.seed * 7919 + wid)
    dq = deque(seeds)
    peak = len(dq)
    my_requests = requests[wid]
    my_reply = replies[wid][0]
    deadline = time.monotonic() + cfg.timeout_secs if cfg.timeout_secs else None
    timed_out = False
    run = runner.run
    idle_secs = 0.0
    start = time.perf_counter()

    def serve() -> None:
        while not my_requests.empty():
            thief = my_requests.get()
            k = (len(dq) + 1) // 2
            batch = [dq.popleft() for _ in range(k)]
            if batch:
                with idle.get_lock():
                    idle.value -= 1
            replies[thief][1].send(batch)

    try:
        while True:
            ticks = 0
            while dq:
                task = dq.pop()
                children = run(task)
                if children:
                    dq.extend(reversed(children))
                    if len(dq) > peak:
                        peak = len(dq)
                ticks += 1
                if ticks % POLL_EVERY == 0:
                    lengths[wid] = len(dq)
                    if cfg.steal:
                        serve()
                    if abort.value:
                        break
                    if deadline is not None and ticks % (POLL_EVERY * 16) == 0 and time.monotonic() > deadline:
                        timed_out = True
                        abort.value = 1
                        break
            if abort.value:
                break
            lengths[wid] = 0
            t0 = time.perf_counter()
            with idle.get_lock():
                idle.value += 1
            got = False
            backoff = 1e-5
            while not got:
                serve()
                if idle.value >= p or abort.value:
                    break
                victims = [w for w in range(p) if w != wid and lengths[w] > 0] if cfg.steal else []
                if not victims:
                    time.sleep(backoff)
                    backoff = min(backoff * 2, 1e-3)
                    continue
                victim = rng.choice(victims)
                rep.steal_attempts += 1
                requests[victim].put(wid)
                while not my_reply.poll(0.0002):
                    serve()
                    if idle.value >= p or abort.value:
                        break
                else:
                    batch = my_reply.recv()
                    if batch:
                        rep.steals += 1
                        dq.extend(batch)
                        if len(dq) > peak:
                            peak = len(dq)
                        lengths[wid] = len(dq)
                        got = True
                    continue
                break
            idle_secs += time.perf_counter() - t0
            if not got:
                break
        rep.busy_secs = time.perf_counter() - start - idle_secs
        rep.peak_deque = peak
        results.put((wid, rep, runner.matcher.stats, runner.output, runner.trace, timed_out, None))
    except BaseException:
        abort.value = 1
        results.put((wid, None, None, None, None, False, traceback.format_exc()))


def run_processes(matcher: Matcher, cfg: EngineConfig) -> ExecutionReport:
    ctx = mp.get_context("fork")
    p = cfg.workers
    seeds = initial_tasks(matcher, cfg)
    t0 = time.perf_counter()
    lengths = ctx.Array("q", [len(s) for s in seeds], lock=False)
    idle = ctx.Value("i", 0)
    abort = ctx.Value("b", 0, lock=False)
    requests = [ctx.SimpleQueue() for _ in range(p)]
    replies = [ctx.Pipe(duplex=False) for _ in range(p)]
    results = ctx.SimpleQueue()
    procs = [
        ctx.Process(
            target=_worker_main,
            args=(w, matcher, cfg, seeds[w], (lengths, idle, abort), requests, replies, results),
            daemon=True,
        )
        for w in range(p)
    ]
    for proc in procs:
        proc.start()
    collected = [results.get() for _ in range(p)]
    for proc in procs:
        proc.join()
    elapsed = time.perf_counter() - t0
    errors = [r[6] for r in collected if r[6] is not None]
    if errors:
        raise RuntimeError("worker process failed:\n" + errors[0])
    collected.sort(key=lambda r: r[0])
    stats = MatchStats()
    reports = []
    out = [] if cfg.sink_mode == "emit" else None
    trace = [] if cfg.trace else None
    timed_out = False
    for _, rep, wstats, output, wtrace, wtimeout, _err in collected:
        reports.append(rep)
        stats.merge(wstats)
        if out is not None:
            out.extend(output)
        if trace is not None:
            trace.extend(wtrace)
        timed_out = timed_out or wtimeout
    count = sum(r.embeddings for r in reports)
    stats.embeddings = count
    return ExecutionReport(
        count=count,
        elapsed_secs=elapsed,
        workers=reports,
        # per-worker peaks need not coincide, so their sum bounds the global peak
        peak_live_tasks=sum(r.peak_deque for r in reports),
        stats=stats,
        backend="process",
        timed_out=timed_out,
        embeddings=out,
        trace=trace,
    )


def available_cores() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1

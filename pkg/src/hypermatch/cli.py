"""Command-line entry point: ``hypermatch {stats,gen-queries,run,verify}``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 only timeouts, 4 an oracle refused an oversized instance.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .engine import MatchStats, MatchTimeout, enumerate_sequential
from .hypergraph import HypergraphError, stats
from .index import build_index
from .instances import random_instance
from .io import GraphFormatError, load_hypergraph, save_hypergraph, write_hypergraph
from .oracle import OracleRefusal, brute_force_tiny, enumerate_by_vertex
from .planner import PlanError, plan_query
from .querygen import QueryGenerationError, QuerySettings, generate_queries
from .runtime import EngineConfig, execute_parallel

log = logging.getLogger("hypermatch")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_TIMEOUT = 3
EXIT_REFUSED = 4

DEFAULT_TIMEOUT = 3600.0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypermatch", description="Exact subhypergraph matching.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="print hypergraph and index statistics")
    p.add_argument("--graph", required=True)
    p.add_argument("--report", choices=("json", "text"), default="text")

    p = sub.add_parser("gen-queries", help="sample connected queries by random walk")
    p.add_argument("--graph", required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--min-vertices", type=int, required=True)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("run", help="match queries against a data hypergraph")
    _add_inputs(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--backend", choices=("thread", "process"), default="process")
    p.add_argument("--mode", choices=("count", "print"), default="count")
    p.add_argument("--timeout-secs", type=float, default=DEFAULT_TIMEOUT)
    p.add_argument("--report", choices=("json", "text"), default="json")
    p.add_argument("--report-file", help="write the report here instead of stdout/stderr")
    p.add_argument("--diagnostics", action="store_true", help="include filtering counters")

    p = sub.add_parser("verify", help="cross-check the engine against reference matchers")
    p.add_argument("--graph")
    p.add_argument("--query")
    p.add_argument("--query-dir")
    p.add_argument("--random", type=int, metavar="N", help="check N seeded random instances instead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle", choices=("vertex", "bruteforce", "both"), default="both")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--backend", choices=("thread", "process"), default="thread")
    p.add_argument("--counterexample-dir", default="counterexamples")
    return parser


def _add_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query")
    group.add_argument("--query-dir")


def _query_paths(args) -> list[Path]:
    if args.query:
        return [Path(args.query)]
    paths = sorted(Path(args.query_dir).glob("*.hg"))
    if not paths:
        raise FileNotFoundError(f"no *.hg query files in {args.query_dir}")
    return paths


def cmd_stats(args) -> int:
    graph, _ = load_hypergraph(args.graph)
    t0 = time.perf_counter()
    idx = build_index(graph)
    build_ms = (time.perf_counter() - t0) * 1000.0
    out = stats(graph).as_dict()
    out["index"] = dict(idx.size_stats()._asdict(), build_ms=build_ms)
    if args.report == "json":
        print(json.dumps(out, indent=2))
    else:
        for k, v in out.items():
            if k != "index":
                print(f"{k}: {v}")
        for k, v in out["index"].items():
            print(f"index.{k}: {v}")
    return EXIT_OK


def cmd_gen_queries(args) -> int:
    graph, labels = load_hypergraph(args.graph)
    settings = QuerySettings(args.edges, args.min_vertices, args.max_vertices, args.seed, args.count)
    queries = generate_queries(graph, settings)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(2, len(str(len(queries))))
    for i, q in enumerate(queries):
        save_hypergraph(out / f"q{args.edges}_{i:0{width}d}.hg", q, labels)
    print(f"wrote {len(queries)} queries to {out}")
    return EXIT_OK


def run_query(qgraph, idx, threads: int, backend: str, emit: bool, timeout: float | None, sink=None) -> dict:
    """Plan and execute one query; returns a report entry."""
    plan = plan_query(qgraph, idx)
    entry: dict = {"order": list(plan.order)}
    t0 = time.perf_counter()
    if threads <= 1:
        mstats = MatchStats()
        deadline = time.monotonic() + timeout if timeout else None
        try:
            count = enumerate_sequential(plan, idx, sink, stats=mstats, deadline=deadline)
            entry["timed_out"] = False
        except MatchTimeout as exc:
            count = exc.count
            entry["timed_out"] = True
        entry["count"] = count
        entry["elapsed_ms"] = (time.perf_counter() - t0) * 1000.0
        entry["workers"] = []
        entry["peak_live_tasks"] = None
    else:
        cfg = EngineConfig(
            workers=threads,
            backend=backend,
            sink_mode="emit" if emit else "count",
            timeout_secs=timeout,
        )
        rep = execute_parallel(plan, idx, cfg)
        mstats = rep.stats
        if emit and sink is not None:
            for emb in rep.embeddings:
                sink(emb)
        entry.update(rep.as_dict())
        entry["elapsed_ms"] = (time.perf_counter() - t0) * 1000.0
    entry["candidates"] = mstats.candidates
    entry["filtered"] = mstats.filtered
    entry["embeddings"] = entry["count"]
    entry["validated"] = mstats.validated
    return entry


def cmd_run(args) -> int:
    if args.threads < 1:
        raise _UsageError("--threads must be at least 1")
    graph, labels = load_hypergraph(args.graph)
    t0 = time.perf_counter()
    idx = build_index(graph)
    build_ms = (time.perf_counter() - t0) * 1000.0
    report = {
        "graph": str(args.graph),
        "stats": stats(graph).as_dict(),
        "index": dict(idx.size_stats()._asdict(), build_ms=build_ms),
        "threads": args.threads,
        "queries": [],
    }
    printing = args.mode == "print"
    sink = None
    if printing:
        def sink(emb):
            sys.stdout.write(" ".join(map(str, emb)) + "\n")
    for path in _query_paths(args):
        qgraph, _ = load_hypergraph(path, labels)
        entry = {"query": str(path)}
        entry.update(run_query(qgraph, idx, args.threads, args.backend, printing, args.timeout_secs, sink))
        if not args.diagnostics:
            for key in ("candidates", "filtered", "validated"):
                entry.pop(key, None)
        report["queries"].append(entry)
    _emit_report(report, args)
    if any(q["timed_out"] for q in report["queries"]):
        return EXIT_TIMEOUT
    return EXIT_OK


def _emit_report(report: dict, args) -> None:
    if args.report == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        lines = [f"graph {report['graph']}: index built in {report['index']['build_ms']:.1f} ms"]
        for q in report["queries"]:
            line = f"{q['query']}: count={q['count']} elapsed_ms={q['elapsed_ms']:.2f} order={q['order']}"
            if q["timed_out"]:
                line += " TIMED OUT"
            if "candidates" in q:
                line += f" candidates={q['candidates']} filtered={q['filtered']}"
            lines.append(line)
        text = "\n".join(lines) + "\n"
    if args.report_file:
        Path(args.report_file).write_text(text)
    elif args.mode == "print":
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)


def _verify_one(name, data, query, labels, args, cex_dir: Path) -> str:
    """Returns 'ok', 'mismatch' or 'refused'."""
    idx = build_index(data)
    plan = plan_query(query, idx)
    if args.threads > 1:
        rep = execute_parallel(plan, idx, EngineConfig(workers=args.threads, backend=args.backend, sink_mode="emit"))
        engine = set(rep.embeddings)
        if len(engine) != len(rep.embeddings):
            log.error("%s: engine emitted duplicate embeddings", name)
            _dump(cex_dir, name, data, query, labels, {"duplicates": len(rep.embeddings) - len(engine)})
            return "mismatch"
    else:
        engine = set()
        enumerate_sequential(plan, idx, engine.add)
    oracles = {}
    refused = False
    if args.oracle in ("vertex", "both"):
        oracles["vertex"] = enumerate_by_vertex(query, data, use_ihs=True)
    if args.oracle in ("bruteforce", "both"):
        try:
            oracles["bruteforce"] = brute_force_tiny(query, data)
        except OracleRefusal as exc:
            log.warning("%s: %s", name, exc)
            refused = True
    for oname, found in oracles.items():
        if found != engine:
            _dump(
                cex_dir,
                name,
                data,
                query,
                labels,
                {
                    "oracle": oname,
                    "engine_only": sorted(engine - found),
                    "oracle_only": sorted(found - engine),
                },
            )
            return "mismatch"
    return "refused" if refused else "ok"


def _dump(cex_dir: Path, name: str, data, query, labels, detail: dict) -> None:
    cex_dir.mkdir(parents=True, exist_ok=True)
    stem = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)
    (cex_dir / f"{stem}.data.hg").write_text(write_hypergraph(data, labels))
    (cex_dir / f"{stem}.query.hg").write_text(write_hypergraph(query, labels))
    (cex_dir / f"{stem}.json").write_text(json.dumps(detail, indent=2))
    log.error("counterexample %s written to %s", name, cex_dir)


def cmd_verify(args) -> int:
    cex_dir = Path(args.counterexample_dir)
    outcomes = []
    if args.random is not None:
        for k in range(args.random):
            inst = random_instance(args.seed + k)
            outcomes.append(_verify_one(f"random-{inst.seed}", inst.data, inst.query, None, args, cex_dir))
    else:
        if not args.graph or not (args.query or args.query_dir):
            raise _UsageError("verify needs --graph with --query/--query-dir, or --random N")
        data, labels = load_hypergraph(args.graph)
        for path in _query_paths(args):
            query, _ = load_hypergraph(path, labels)
            outcomes.append(_verify_one(path.stem, data, query, labels, args, cex_dir))
    mismatches = outcomes.count("mismatch")
    refused = outcomes.count("refused")
    print(f"checked {len(outcomes)} instance(s): {outcomes.count('ok')} agree, {mismatches} disagree, {refused} refused")
    if mismatches:
        return EXIT_MISMATCH
    if refused:
        return EXIT_REFUSED
    return EXIT_OK


class _UsageError(Exception):
    pass


COMMANDS = {
    "stats": cmd_stats,
    "gen-queries": cmd_gen_queries,
    "run": cmd_run,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (GraphFormatError, HypergraphError, PlanError, QueryGenerationError, _UsageError, ValueError) as exc:
        print(f"hypermatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hypermatch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

import json

import pytest

from hypermatch import cli
from hypermatch.cli import main
from hypermatch.io import GraphFormatError, LabelDictionary, parse_hypergraph, read_hypergraph, write_hypergraph

F1_TEXT = """c fixture F1
t 7 6
v 0 A
v 1 C
v 2 A
v 3 C
v 4 B
v 5 A
v 6 A
e 2 4
e 4 6
e 0 1 2
e 3 5 6
e 0 1 4 6
e 2 3 4 5
"""

Q_TEXT = """t 5 3
v 0 A
v 1 C
v 2 A
v 3 A
v 4 B
e 2 4
e 0 1 2
e 0 1 3 4
"""


@pytest.fixture
def files(tmp_path):
    g = tmp_path / "f1.hg"
    g.write_text(F1_TEXT)
    q = tmp_path / "q.hg"
    q.write_text(Q_TEXT)
    return g, q


class TestFormat:
    def test_f1_parses_to_fixture(self, f1):
        h, labels = read_hypergraph(F1_TEXT)
        assert labels.names == ["A", "C", "B"]
        assert h.edges == f1.edges
        remap = [labels.id(n) for n in "ABC"]  # fixture ids A=0, B=1, C=2
        assert [remap[x] for x in f1.labels] == list(h.labels)

    def test_round_trip(self):
        h, labels = read_hypergraph(F1_TEXT)
        text = write_hypergraph(h, labels)
        h2, _ = read_hypergraph(text, LabelDictionary())
        assert h2 == h and write_hypergraph(h2, labels) == text

    def test_canonicalizes_input(self):
        h = parse_hypergraph("t 3 3\nv 0 x\nv 1 x\nv 2 y\ne 1 0\ne 0 1\ne 2 2 1\n")
        assert h.edges == ((0, 1), (1, 2))

    def test_too_many_vertex_lines(self):
        with pytest.raises(GraphFormatError) as info:
            parse_hypergraph("t 3 1\nv 0 A\nv 1 A\nv 2 A\nv 2 A\ne 0\n")
        assert info.value.line == 5

    def test_dangling_vertex(self):
        with pytest.raises(GraphFormatError) as info:
            parse_hypergraph("t 2 1\nv 0 A\nv 1 A\ne 0   5\n")
        assert (info.value.line, info.value.column) == (4, 7)

    @pytest.mark.parametrize(
        "text, needle",
        [
            ("v 0 A\n", "header"),
            ("", "missing"),
            ("t 2 1\nv 0 A\ne 0\n", "no 'v' line"),
            ("t 1 2\nv 0 A\ne 0\n", "declared 2 hyperedges"),
            ("t 1 1\nv 0 A\ne 0\nv 0 B\n", "after hyperedge"),
            ("t 1 1\nv 0 A\ne x\n", "integer"),
            ("t 1 1\nv 0 A\nz 0\n", "unknown"),
        ],
    )
    def test_errors(self, text, needle):
        with pytest.raises(GraphFormatError, match=needle):
            parse_hypergraph(text)


class TestCli:
    def test_stats_json(self, files, capsys):
        assert main(["stats", "--graph", str(files[0]), "--report", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert (out["num_vertices"], out["num_hyperedges"], out["num_labels"], out["max_arity"]) == (7, 6, 3, 4)
        assert out["mean_arity"] == 3.0
        assert out["index"]["total_posting_entries"] == 18

    @pytest.mark.parametrize("threads, backend", [(1, "thread"), (4, "thread"), (4, "process")])
    def test_run_json(self, files, capsys, threads, backend):
        g, q = files
        argv = ["run", "--graph", str(g), "--query", str(q), "--threads", str(threads), "--backend", backend, "--diagnostics"]
        assert main(argv) == 0
        rep = json.loads(capsys.readouterr().out)
        (entry,) = rep["queries"]
        assert entry["count"] == 2 and entry["order"] == [0, 1, 2]
        assert entry["candidates"] >= entry["filtered"] >= entry["embeddings"] == 2
        assert {"elapsed_ms", "workers", "peak_live_tasks"} <= set(entry)
        if threads > 1:
            assert len(entry["workers"]) == 4

    def test_run_print(self, files, capsys):
        g, q = files
        assert main(["run", "--graph", str(g), "--query", str(q), "--mode", "print", "--report", "text"]) == 0
        out = capsys.readouterr()
        assert sorted(out.out.split("\n")[:-1]) == ["0 2 4", "1 3 5"]
        assert "count=2" in out.err

    def test_run_absent_signature(self, files, tmp_path, capsys):
        q = tmp_path / "zz.hg"
        q.write_text("t 2 1\nv 0 B\nv 1 B\ne 0 1\n")
        assert main(["run", "--graph", str(files[0]), "--query", str(q)]) == 0
        assert json.loads(capsys.readouterr().out)["queries"][0]["count"] == 0

    def test_run_timeout_exit(self, tmp_path, capsys, monkeypatch):
        from hypermatch.instances import star_instance
        from hypermatch.io import save_hypergraph

        data, q = star_instance(hubs=10, leaves=60, arms=3)
        save_hypergraph(tmp_path / "g.hg", data)
        save_hypergraph(tmp_path / "q.hg", q)
        code = main(["run", "--graph", str(tmp_path / "g.hg"), "--query", str(tmp_path / "q.hg"), "--timeout-secs", "0.05"])
        assert code == 3
        assert json.loads(capsys.readouterr().out)["queries"][0]["timed_out"] is True

    def test_gen_queries_then_run_dir(self, files, tmp_path, capsys):
        out = tmp_path / "qs"
        assert main(["gen-queries", "--graph", str(files[0]), "--edges", "2", "--min-vertices", "2",
                     "--max-vertices", "6", "--count", "4", "--seed", "7", "--out-dir", str(out)]) == 0
        assert len(list(out.glob("q2_*.hg"))) == 4
        capsys.readouterr()
        assert main(["run", "--graph", str(files[0]), "--query-dir", str(out)]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert all(q["count"] >= 1 for q in rep["queries"])

    def test_verify_f1(self, files, tmp_path):
        g, q = files
        assert main(["verify", "--graph", str(g), "--query", str(q), "--counterexample-dir", str(tmp_path / "cx")]) == 0

    def test_verify_random(self, tmp_path, capsys):
        assert main(["verify", "--random", "30", "--counterexample-dir", str(tmp_path / "cx"), "--threads", "2"]) == 0
        assert "30 agree" in capsys.readouterr().out

    def test_verify_detects_faulty_engine(self, files, tmp_path, monkeypatch):
        real = cli.enumerate_sequential

        def lossy(plan, idx, sink=None, **kw):
            seen = []
            real(plan, idx, seen.append, **kw)
            for emb in seen[1:]:
                sink(emb)
            return len(seen) - 1

        monkeypatch.setattr(cli, "enumerate_sequential", lossy)
        g, q = files
        cx = tmp_path / "cx"
        assert main(["verify", "--graph", str(g), "--query", str(q), "--counterexample-dir", str(cx)]) == 2
        detail = json.loads(next(cx.glob("*.json")).read_text())
        assert len(detail["oracle_only"]) == 1

    def test_verify_refusal(self, tmp_path):
        big = "t 11 1\n" + "".join(f"v {i} A\n" for i in range(11)) + "e " + " ".join(map(str, range(11))) + "\n"
        (tmp_path / "g.hg").write_text(big)
        code = main(["verify", "--graph", str(tmp_path / "g.hg"), "--query", str(tmp_path / "g.hg"), "--oracle", "bruteforce"])
        assert code == 4

    def test_bad_input_exit(self, tmp_path, capsys):
        (tmp_path / "bad.hg").write_text("t 1 1\nv 0 A\ne 3\n")
        assert main(["stats", "--graph", str(tmp_path / "bad.hg")]) == 1
        assert "bad.hg:3:" in capsys.readouterr().err

    def test_usage_error_exit(self):
        with pytest.raises(SystemExit) as info:
            main(["run"])
        assert info.value.code == 1

    def test_missing_file(self, tmp_path):
        assert main(["stats", "--graph", str(tmp_path / "nope.hg")]) == 1

"""Plain-text hypergraph files.

One whitespace-separated record per line; ``c`` lines and blank lines are
ignored::

    t <num_vertices> <num_hyperedges>
    v <vertex_id> <label>        (num_vertices lines, ids 0..n-1)
    e <v_1> ... <v_k>            (num_hyperedges lines)

Labels are arbitrary non-space strings, interned into dense ids through a
:class:`LabelDictionary` that queries share with their data graph.
"""

from __future__ import annotations

from pathlib import Path

from .hypergraph import Hypergraph, HypergraphError, canonicalize


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
            if column is not None:
                where += f"{column}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.column = column


class LabelDictionary:
    """Bidirectional string <-> dense integer label map."""

    def __init__(self, names: list[str] | None = None):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for name in names or ():
            self.intern(name)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def intern(self, name: str) -> int:
        lid = self._ids.get(name)
        if lid is None:
            lid = self._ids[name] = len(self._names)
            self._names.append(name)
        return lid

    def id(self, name: str) -> int | None:
        return self._ids.get(name)

    def name(self, lid: int) -> str:
        if 0 <= lid < len(self._names):
            return self._names[lid]
        return str(lid)

    @property
    def names(self) -> list[str]:
        return list(self._names)


def _column(raw: str, token_index: int) -> int:
    pos = 0
    for i, tok in enumerate(raw.split()):
        pos = raw.index(tok, pos)
        if i == token_index:
            return pos + 1
        pos += len(tok)
    return 1


def _int(tok: str, raw: str, idx: int, lineno: int, source: str | None) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {tok!r}", lineno, _column(raw, idx), source) from None
    if val < 0:
        raise GraphFormatError(f"expected a non-negative integer, got {val}", lineno, _column(raw, idx), source)
    return val


def read_hypergraph(
    text: str, labels: LabelDictionary | None = None, source: str | None = None
) -> tuple[Hypergraph, LabelDictionary]:
    """Parse and canonicalize; returns the graph and the (possibly shared)
    label dictionary."""
    labels = labels if labels is not None else LabelDictionary()
    header: tuple[int, int] | None = None
    vertex_labels: list[int | None] = []
    raw_edges: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        kind = toks[0]
        if header is None:
            if kind != "t":
                raise GraphFormatError(f"expected a 't' header line, got {kind!r}", lineno, 1, source)
            if len(toks) != 3:
                raise GraphFormatError("header must be 't <num_vertices> <num_hyperedges>'", lineno, 1, source)
            header = (_int(toks[1], raw, 1, lineno, source), _int(toks[2], raw, 2, lineno, source))
            vertex_labels = [None] * header[0]
            seen_vertices = 0
            continue
        n, m = header
        if kind == "t":
            raise GraphFormatError("duplicate 't' header", lineno, 1, source)
        if kind == "v":
            if len(toks) != 3:
                raise GraphFormatError("vertex line must be 'v <vertex_id> <label>'", lineno, 1, source)
            if raw_edges:
                raise GraphFormatError("vertex line after hyperedge lines", lineno, 1, source)
            seen_vertices += 1
            if seen_vertices > n:
                raise GraphFormatError(f"more than the declared {n} vertex lines", lineno, 1, source)
            vid = _int(toks[1], raw, 1, lineno, source)
            if vid >= n:
                raise GraphFormatError(f"vertex id {vid} out of range 0..{n - 1}", lineno, _column(raw, 1), source)
            if vertex_labels[vid] is not None:
                raise GraphFormatError(f"vertex {vid} declared twice", lineno, _column(raw, 1), source)
            vertex_labels[vid] = labels.intern(toks[2])
        elif kind == "e":
            if len(toks) < 2:
                raise GraphFormatError("hyperedge line needs at least one vertex", lineno, 1, source)
            if len(raw_edges) >= m:
                raise GraphFormatError(f"more than the declared {m} hyperedge lines", lineno, 1, source)
            verts = []
            for i, tok in enumerate(toks[1:], start=1):
                v = _int(tok, raw, i, lineno, source)
                if v >= n:
                    raise GraphFormatError(f"dangling vertex id {v} (graph has {n})", lineno, _column(raw, i), source)
                verts.append(v)
            raw_edges.append(verts)
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", lineno, 1, source)
    if header is None:
        raise GraphFormatError("missing 't' header", source=source)
    n, m = header
    missing = [v for v, lab in enumerate(vertex_labels) if lab is None]
    if missing:
        raise GraphFormatError(f"declared {n} vertices but {len(missing)} have no 'v' line (first: {missing[0]})", source=source)
    if len(raw_edges) != m:
        raise GraphFormatError(f"declared {m} hyperedges but found {len(raw_edges)}", source=source)
    try:
        graph = canonicalize(raw_edges, vertex_labels)
    except HypergraphError as exc:
        raise GraphFormatError(str(exc), source=source) from exc
    return graph, labels


def parse_hypergraph(text: str, labels: LabelDictionary | None = None) -> Hypergraph:
    return read_hypergraph(text, labels)[0]


def write_hypergraph(h: Hypergraph, labels: LabelDictionary | None = None) -> str:
    name = labels.name if labels is not None else str
    lines = [f"t {h.vertex_count} {h.edge_count}"]
    lines.extend(f"v {v} {name(lab)}" for v, lab in enumerate(h.labels))
    lines.extend("e " + " ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def load_hypergraph(path: str | Path, labels: LabelDictionary | None = None) -> tuple[Hypergraph, LabelDictionary]:
    path = Path(path)
    return read_hypergraph(path.read_text(), labels, source=str(path))


def save_hypergraph(path: str | Path, h: Hypergraph, labels: LabelDictionary | None = None) -> None:
    Path(path).write_text(write_hypergraph(h, labels))

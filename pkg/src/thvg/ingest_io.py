"""Publication parsing, rating estimation, and graph interchange formats.

Graph formats
-------------
``adj_json``  n, node list and the 0/1 adjacency matrix. Row is the pointing
              (later) node, column the pointed-to (earlier) node. Source-graph
              edge weights other than 1 go in a sparse ``weights`` list.
``edge_csv``  ``from,to,weight`` rows; an isolated node is written as
              ``id,,0``. Node attributes are not carried.
``dot``       Graphviz digraph.
``graphml``   GraphML digraph.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import IO, Iterable, Optional, Union
from xml.sax.saxutils import escape, quoteattr

from .model import (
    MessageGraph,
    Publication,
    SourceGraph,
    SourceNode,
    ThvgError,
    ValidationError,
)

SOURCE_ID_RE = re.compile(r"[A-Za-z0-9._-]+\Z")
_EPOCH_RE = re.compile(r"-?\d+\Z")

Graph = Union[MessageGraph, SourceGraph]


class ParseError(ThvgError, ValueError):
    """Malformed input document."""


class RatingMode(str, enum.Enum):
    PROVIDED = "provided"
    ESTIMATE = "estimate"


@dataclass(frozen=True)
class RatingPolicy:
    mode: RatingMode = RatingMode.PROVIDED
    volume_weight: float = 1.0
    rate_weight: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", RatingMode(self.mode))
        if self.volume_weight < 0 or self.rate_weight < 0:
            raise ValueError("rating weights must be >= 0")
        if self.mode is RatingMode.ESTIMATE and self.volume_weight + self.rate_weight <= 0:
            raise ValueError("ESTIMATE needs volume_weight + rate_weight > 0")

    def snapshot(self) -> dict:
        return {"mode": self.mode.value, "volume_weight": self.volume_weight,
                "rate_weight": self.rate_weight}


def parse_timestamp(value: str) -> int:
    """Epoch seconds from an integer string or an ISO-8601 instant (naive means UTC)."""
    value = value.strip()
    if _EPOCH_RE.match(value):
        return int(value)
    iso = value[:-1] + "+00:00" if value.endswith(("Z", "z")) else value
    try:
        dt = datetime.fromisoformat(iso)
    except ValueError:
        raise ParseError(f"unknown timestamp format: {value!r}") from None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _text(data: Union[bytes, str, IO]) -> str:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"input is not UTF-8: {e}") from None
    return data


def _record(line_no: int, ts, source, rating, message_id, policy: RatingPolicy) -> Publication:
    if ts is None or str(ts).strip() == "":
        raise ParseError(f"line {line_no}: missing timestamp")
    source = "" if source is None else str(source).strip()
    if not SOURCE_ID_RE.match(source):
        raise ParseError(f"line {line_no}: invalid source_id {source!r}")
    try:
        t = int(ts) if isinstance(ts, int) and not isinstance(ts, bool) else parse_timestamp(str(ts))
    except ParseError as e:
        raise ParseError(f"line {line_no}: {e}") from None
    if rating is None or str(rating).strip() == "":
        if policy.mode is RatingMode.PROVIDED:
            raise ParseError(f"line {line_no}: missing rating (rating policy is 'provided')")
        r = None
    else:
        try:
            r = float(rating)
        except (TypeError, ValueError):
            raise ParseError(f"line {line_no}: rating {rating!r} is not a number") from None
        if not math.isfinite(r) or r <= 0:
            raise ParseError(f"line {line_no}: rating must be positive, got {rating!r}")
    mid = str(message_id).strip() if message_id not in (None, "") else f"{source}#{line_no}"
    return Publication(mid, source, t, r)


def parse_publications(
    data: Union[bytes, str, IO], fmt: str = "csv", policy: RatingPolicy = RatingPolicy()
) -> list[Publication]:
    """Read publications from CSV (``timestamp,source_id,rating[,message_id]``) or JSONL.

    A CSV header row starting with ``timestamp`` is skipped. Line numbers in
    errors and generated message ids are 1-based physical lines.
    """
    text = _text(data)
    out = []
    fmt = fmt.lower()
    if fmt == "csv":
        for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if line_no == 1 and row[0].strip().lower() == "timestamp":
                continue
            if not 2 <= len(row) <= 4:
                raise ParseError(f"line {line_no}: expected 2-4 fields, got {len(row)}")
            row = row + [None] * (4 - len(row))
            out.append(_record(line_no, *row, policy=policy))
    elif fmt == "jsonl":
        for line_no, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"line {line_no}: invalid JSON ({e.msg})") from None
            if not isinstance(obj, dict):
                raise ParseError(f"line {line_no}: expected a JSON object")
            out.append(_record(line_no, obj.get("timestamp"), obj.get("source_id"),
                               obj.get("rating"), obj.get("message_id"), policy))
    else:
        raise ValueError(f"unknown publication format {fmt!r}")
    if policy.mode is RatingMode.ESTIMATE:
        out = estimate_ratings(out, policy)
    return out


def estimate_ratings(raw: list[Publication], policy: RatingPolicy) -> list[Publication]:
    """Assign every record its source's estimated rating in [1, 100].

    Per source: ``volume_weight*ln(1+count) + rate_weight*count/active_days``,
    where active_days is the source's first-to-last span in days, floored at
    one day. Scores are min-max scaled to [1, 100]; identical scores map to 50.
    Ratings already present on the records are replaced.
    """
    if not raw:
        return []
    ts = [p.timestamp for p in raw]
    if max(ts) - min(ts) <= 0:
        raise ValidationError("rating estimation needs a corpus spanning more than zero seconds")
    count: Counter[str] = Counter(p.source_id for p in raw)
    first: dict[str, int] = {}
    last: dict[str, int] = {}
    for p in raw:
        s = p.source_id
        first[s] = min(first.get(s, p.timestamp), p.timestamp)
        last[s] = max(last.get(s, p.timestamp), p.timestamp)
    score = {}
    for s, c in count.items():
        days = max((last[s] - first[s]) / 86400.0, 1.0)
        score[s] = policy.volume_weight * math.log1p(c) + policy.rate_weight * c / days
    lo, hi = min(score.values()), max(score.values())
    if hi == lo:
        rating = {s: 50.0 for s in score}
    else:
        rating = {s: 1.0 + 99.0 * ((v - lo) / (hi - lo)) for s, v in score.items()}
    return [replace(p, rating=rating[p.source_id]) for p in raw]


# --- export -----------------------------------------------------------------

def _message_node(p: Publication) -> dict:
    return {"message_id": p.message_id, "source_id": p.source_id,
            "timestamp": p.timestamp, "rating": p.rating}


def _source_node(sid: str, node: SourceNode) -> dict:
    return {"id": sid, "earliest_timestamp": node.earliest_timestamp,
            "rating": node.rating, "message_count": node.message_count}


def _matrix_rows(n: int, cells: Iterable[tuple[int, int]]) -> list[list[int]]:
    rows = [[0] * n for _ in range(n)]
    for r, c in cells:
        rows[r][c] = 1
    return rows


def _dump_json(doc: dict) -> bytes:
    # One node or matrix row per line: readable and diff-friendly.
    parts = []
    for key, value in doc.items():
        if key in ("nodes", "matrix", "weights") and value:
            inner = ",\n".join("    " + json.dumps(v, separators=(",", ":")) for v in value)
            parts.append(f'  "{key}": [\n{inner}\n  ]')
        else:
            parts.append(f"  {json.dumps(key)}: {json.dumps(value, sort_keys=True)}")
    return ("{\n" + ",\n".join(parts) + "\n}\n").encode("utf-8")


def _adj_json(graph: Graph) -> bytes:
    if isinstance(graph, MessageGraph):
        doc = {
            "format": "adj_json",
            "kind": "message",
            "directed": graph.directed,
            "n": graph.n,
            "convention": "matrix[row][col] = 1 for edge row -> col; row is the later node",
            "meta": graph.meta,
            "nodes": [_message_node(p) for p in graph.nodes],
            "matrix": _matrix_rows(graph.n, graph.edges),
        }
        return _dump_json(doc)
    ids = graph.node_ids()
    pos = {s: k for k, s in enumerate(ids)}
    doc = {
        "format": "adj_json",
        "kind": "source",
        "directed": True,
        "n": graph.n,
        "convention": "matrix[row][col] = 1 for edge row -> col; row is the pointing source",
        "meta": {"dropped_self_loops": graph.dropped_self_loops},
        "nodes": [_source_node(s, graph.nodes[s]) for s in ids],
        "matrix": _matrix_rows(graph.n, ((pos[a], pos[b]) for a, b in graph.edges)),
        "weights": [[pos[a], pos[b], w] for a, b, w in graph.sorted_edges() if w != 1],
    }
    return _dump_json(doc)


def _labelled_edges(graph: Graph) -> tuple[list[str], list[tuple[str, str, int]]]:
    if isinstance(graph, MessageGraph):
        ids = [p.message_id for p in graph.nodes]
        return ids, [(ids[j], ids[i], 1) for j, i in graph.sorted_edges()]
    return graph.node_ids(), graph.sorted_edges()


def _node_attrs(graph: Graph) -> list[tuple[str, dict]]:
    if isinstance(graph, MessageGraph):
        return [(p.message_id, {"source_id": p.source_id, "timestamp": p.timestamp,
                                "rating": p.rating}) for p in graph.nodes]
    return [(s, {k: v for k, v in _source_node(s, graph.nodes[s]).items() if k != "id"})
            for s in graph.node_ids()]


def _edge_csv(graph: Graph) -> bytes:
    ids, edges = _labelled_edges(graph)
    touched = {a for a, _, _ in edges} | {b for _, b, _ in edges}
    lines = ["from,to,weight"] + [f"{a},{b},{w}" for a, b, w in edges]
    lines += [f"{s},,0" for s in ids if s not in touched]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _dot_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    return "\"\"" if v is None else repr(v)


def _dot(graph: Graph) -> bytes:
    _, edges = _labelled_edges(graph)
    lines = ["digraph thvg {"]
    for nid, attrs in _node_attrs(graph):
        body = ", ".join(f"{k}={_dot_value(v)}" for k, v in attrs.items())
        lines.append(f"  {json.dumps(nid)} [{body}];")
    for a, b, w in edges:
        lines.append(f"  {json.dumps(a)} -> {json.dumps(b)} [weight={w}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _graphml(graph: Graph) -> bytes:
    _, edges = _labelled_edges(graph)
    nodes = _node_attrs(graph)
    keys = list(nodes[0][1]) if nodes else []
    types = {"source_id": "string", "timestamp": "long", "earliest_timestamp": "long",
             "rating": "double", "message_count": "int"}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
    ]
    for k in keys:
        out.append(f'  <key id="{k}" for="node" attr.name="{k}" attr.type="{types[k]}"/>')
    out.append('  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>')
    out.append('  <graph id="thvg" edgedefault="directed">')
    for nid, attrs in nodes:
        out.append(f"    <node id={quoteattr(nid)}>")
        for k, v in attrs.items():
            if v is not None:
                out.append(f'      <data key="{k}">{escape(str(v))}</data>')
        out.append("    </node>")
    for a, b, w in edges:
        out.append(f"    <edge source={quoteattr(a)} target={quoteattr(b)}>"
                   f'<data key="weight">{w}</data></edge>')
    out += ["  </graph>", "</graphml>"]
    return ("\n".join(out) + "\n").encode("utf-8")


EXPORTERS = {"adj_json": _adj_json, "edge_csv": _edge_csv, "dot": _dot, "graphml": _graphml}


def export_graph(graph: Graph, fmt: str = "adj_json") -> bytes:
    try:
        return EXPORTERS[fmt.lower()](graph)
    except KeyError:
        raise ValueError(f"unknown export format {fmt!r}") from None


# --- import -----------------------------------------------------------------

def _field(doc: dict, name: str, kind):
    if name not in doc:
        raise ParseError(f"missing field {name!r}")
    value = doc[name]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ParseError(f"field {name!r} has the wrong type")
    return value


def _matrix_cells(matrix, n: int) -> list[tuple[int, int]]:
    if len(matrix) != n or any(not isinstance(row, list) or len(row) != n for row in matrix):
        raise ParseError(f"field 'matrix' must be a square {n}x{n} matrix")
    cells = []
    for r, row in enumerate(matrix):
        for c, v in enumerate(row):
            if v not in (0, 1) or isinstance(v, bool):
                raise ParseError(f"field 'matrix' entry [{r}][{c}] must be 0 or 1")
            if v:
                cells.append((r, c))
    return cells


def _import_adj_json(text: str, allow_self_loops: bool) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level document must be an object")
    kind = doc.get("kind", "source")
    n = _field(doc, "n", int)
    nodes = _field(doc, "nodes", list)
    if len(nodes) != n:
        raise ParseError(f"field 'nodes' has {len(nodes)} entries but n = {n}")
    cells = _matrix_cells(_field(doc, "matrix", list), n)
    try:
        if kind == "message":
            pubs = tuple(
                Publication(d["message_id"], d["source_id"], d["timestamp"], d.get("rating"))
                for d in nodes
            )
            return MessageGraph(pubs, frozenset(cells), directed=doc.get("directed", True),
                                meta=doc.get("meta") or {})
        if kind != "source":
            raise ParseError(f"field 'kind' must be 'source' or 'message', got {kind!r}")
        ids, snodes = [], {}
        for d in nodes:
            if isinstance(d, str):
                sid, node = d, SourceNode()
            else:
                sid = d["id"]
                node = SourceNode(d.get("earliest_timestamp"), d.get("rating"),
                                  d.get("message_count", 0))
            if sid in snodes:
                raise ParseError(f"field 'nodes' repeats id {sid!r}")
            ids.append(sid)
            snodes[sid] = node
        edges = {}
        for r, c in cells:
            if r == c and not allow_self_loops:
                raise ParseError(f"field 'matrix' has a self-loop on {ids[r]!r}")
            edges[ids[r], ids[c]] = 1
        for entry in doc.get("weights") or []:
            r, c, w = entry
            if (ids[r], ids[c]) not in edges:
                raise ParseError(f"field 'weights' refers to a missing edge [{r}, {c}]")
            edges[ids[r], ids[c]] = w
        meta = doc.get("meta") or {}
        return SourceGraph(dict(sorted(snodes.items())), dict(sorted(edges.items())),
                           dropped_self_loops=meta.get("dropped_self_loops", 0))
    except (KeyError, TypeError) as e:
        raise ParseError(f"field 'nodes' entry is malformed: {e}") from None
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e)) from None


def _import_edge_csv(text: str, allow_self_loops: bool) -> SourceGraph:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["from", "to", "weight"]:
        raise ParseError("edge CSV header must be 'from,to,weight'")
    nodes: set[str] = set()
    weights: defaultdict[tuple[str, str], int] = defaultdict(int)
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != 3:
            raise ParseError(f"line {line}: expected 3 fields")
        a, b, w = (x.strip() for x in row)
        try:
            w = int(w)
        except ValueError:
            raise ParseError(f"line {line}: weight {w!r} is not an integer") from None
        if not a:
            raise ParseError(f"line {line}: empty 'from'")
        nodes.add(a)
        if not b:
            if w != 0:
                raise ParseError(f"line {line}: isolated-node row must have weight 0")
            continue
        if w < 1:
            raise ParseError(f"line {line}: edge weight must be >= 1")
        if a == b and not allow_self_loops:
            raise ParseError(f"line {line}: self-loop on {a!r}")
        nodes.add(b)
        weights[a, b] += w
    return SourceGraph({s: SourceNode() for s in sorted(nodes)},
                       dict(sorted(weights.items())))


def import_graph(data: Union[bytes, str, IO], fmt: str = "adj_json",
                 allow_self_loops: bool = False) -> Graph:
    """Inverse of :func:`export_graph` for ``adj_json`` and ``edge_csv``.

    ``edge_csv`` always yields a :class:`SourceGraph` with attribute-free nodes.
    """
    text = _text(data)
    fmt = fmt.lower()
    if fmt == "adj_json":
        return _import_adj_json(text, allow_self_loops)
    if fmt == "edge_csv":
        return _import_edge_csv(text, allow_self_loops)
    raise ValueError(f"cannot import format {fmt!r}")


def read_graph(path: str, allow_self_loops: bool = True) -> Graph:
    fmt = "edge_csv" if path.lower().endswith(".csv") else "adj_json"
    with open(path, "rb") as fh:
        return import_graph(fh.read(), fmt, allow_self_loops=allow_self_loops)

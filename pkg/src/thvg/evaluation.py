"""Precision / recall / F-measure of a predicted source-edge set."""

from __future__ import annotations

import csv
import io
from typing import Iterable

from .model import EvalReport, SourceGraph, ValidationError

EdgeSet = frozenset


def edge_set(pairs: Iterable[tuple[str, str]], allow_self: bool = False) -> frozenset[tuple[str, str]]:
    out = set()
    for a, b in pairs:
        if a == b and not allow_self:
            raise ValidationError(f"self-pair {a}->{b} not permitted")
        out.add((a, b))
    return frozenset(out)


def edges_of(graph: SourceGraph) -> frozenset[tuple[str, str]]:
    return frozenset(graph.edges)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def scores(tp: int, fp: int, fn: int) -> EvalReport:
    p = _ratio(tp, tp + fp)
    r = _ratio(tp, tp + fn)
    f = 2 * p * r / (p + r) if p + r else 0.0
    return EvalReport(tp, fp, fn, p, r, f)


def f_measure(precision: float, recall: float) -> float:
    return 2 * precision * recall / (precision + recall) if precision + recall else 0.0


def evaluate(predicted, gold, directed: bool = True) -> EvalReport:
    """Compare edge sets; with ``directed=False`` A->B matches B->A."""
    if not directed:
        predicted = {frozenset(e) for e in predicted}
        gold = {frozenset(e) for e in gold}
    predicted, gold = set(predicted), set(gold)
    tp = len(predicted & gold)
    return scores(tp, len(predicted - gold), len(gold - predicted))


def read_edge_csv(text: str, allow_self: bool = False) -> frozenset[tuple[str, str]]:
    """Edge set from CSV with a ``from_source,to_source`` header.

    An exported ``from,to,weight`` edge list is accepted as well; its
    isolated-node rows are skipped.
    """
    reader = csv.DictReader(io.StringIO(text))
    fields = set(reader.fieldnames or ())
    if {"from_source", "to_source"} <= fields:
        ka, kb, exported = "from_source", "to_source", False
    elif {"from", "to"} <= fields:
        ka, kb, exported = "from", "to", True
    else:
        raise ValidationError("edge CSV needs columns from_source,to_source")
    pairs = []
    for row in reader:
        a, b = (row[ka] or "").strip(), (row[kb] or "").strip()
        if exported and a and not b:
            continue
        if not a or not b:
            raise ValidationError(f"line {reader.line_num}: empty source id")
        pairs.append((a, b))
    return edge_set(pairs, allow_self=allow_self)


def write_edge_csv(edges: Iterable[tuple[str, str]]) -> str:
    lines = ["from_source,to_source"] + [f"{a},{b}" for a, b in sorted(edges)]
    return "\n".join(lines) + "\n"

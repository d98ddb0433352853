"""Merge message nodes of the same source into a source-influence network."""

from __future__ import annotations

from collections import Counter

from .model import Config, MessageGraph, SourceGraph, SourceNode


def compact(graph: MessageGraph, config: Config = Config()) -> SourceGraph:
    """Collapse ``graph`` by source id.

    Parallel message edges in one direction become a single source edge whose
    weight counts them; opposite directions stay separate. Same-source edges
    are dropped when ``config.drop_self_loops`` is set (their count is kept in
    ``dropped_self_loops``).
    """
    earliest: dict[str, int] = {}
    rating: dict[str, float] = {}
    count: Counter[str] = Counter()
    for p in graph.nodes:
        s = p.source_id
        count[s] += 1
        if s not in earliest or p.timestamp < earliest[s]:
            earliest[s] = p.timestamp
        if p.rating is not None and (s not in rating or p.rating > rating[s]):
            rating[s] = p.rating
    nodes = {
        s: SourceNode(earliest[s], rating.get(s), count[s]) for s in sorted(count)
    }

    weights: Counter[tuple[str, str]] = Counter()
    dropped = 0
    src = [p.source_id for p in graph.nodes]
    for j, i in graph.edges:
        a, b = src[j], src[i]
        if a == b and config.drop_self_loops:
            dropped += 1
            continue
        weights[a, b] += 1
    edges = {k: weights[k] for k in sorted(weights)}
    return SourceGraph(nodes, edges, dropped_self_loops=dropped)

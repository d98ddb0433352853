"""Horizontal visibility graphs and the rating-window (THVG) augmentation.

Nodes are series indices. Two nodes i < j see each other horizontally when
every rating strictly between them is strictly lower than both endpoints;
an equal intermediate value blocks the view.
"""

from __future__ import annotations

import bisect

from .model import Config, ConfigError, MessageGraph, Method, PublicationSeries, TauUnit


def hvg_pairs(values) -> list[tuple[int, int]]:
    """Visible pairs ``(j, i)`` with i < j, in O(n) with a monotonic stack.

    The stack holds indices whose values are strictly decreasing from bottom
    to top; everything else is already hidden from all future nodes.
    """
    pairs = []
    stack: list[int] = []
    for j, x in enumerate(values):
        while stack and values[stack[-1]] < x:
            pairs.append((j, stack.pop()))
        if stack:
            top = stack[-1]
            pairs.append((j, top))
            if values[top] == x:
                stack.pop()
        stack.append(j)
    return pairs


def _ratings(series: PublicationSeries) -> list[float]:
    return [p.rating for p in series.items]


def build_hvg_undirected(series: PublicationSeries) -> MessageGraph:
    pairs = hvg_pairs(_ratings(series))
    edges = frozenset(pairs) | frozenset((i, j) for j, i in pairs)
    return MessageGraph(series.items, edges, directed=False, meta={"method": "hvg", "directed": False})


def build_hvg_directed(series: PublicationSeries) -> MessageGraph:
    """HVG with every link oriented from the later message to the earlier one."""
    edges = frozenset(hvg_pairs(_ratings(series)))
    return MessageGraph(series.items, edges, meta={"method": "hvg"})


def window_pairs(series: PublicationSeries, config: Config) -> list[tuple[int, int]]:
    """Pairs ``(j, i)`` inside the look-back window whose earlier node is rated strictly higher."""
    ratings = _ratings(series)
    pairs = []
    if config.tau_unit is TauUnit.INDEX:
        for j, sj in enumerate(ratings):
            for i in range(max(0, j - config.tau + 1), j):
                if ratings[i] > sj:
                    pairs.append((j, i))
    else:
        window = config.time_window_seconds
        if window is None:
            raise ConfigError("tau_unit=seconds requires time_window_seconds")
        ts = [p.timestamp for p in series.items]
        for j, sj in enumerate(ratings):
            lo = bisect.bisect_right(ts, ts[j] - window, 0, j)
            for i in range(lo, j):
                if ratings[i] > sj:
                    pairs.append((j, i))
    return pairs


def build_thvg(series: PublicationSeries, config: Config) -> MessageGraph:
    """Rating-window graph.

    ``Method.THVG`` adds the window edges to the directed HVG; ``Method.EQ1_ONLY``
    returns the window edges alone.
    """
    if config.method is Method.HVG:
        raise ConfigError("build_thvg needs method THVG or EQ1_ONLY; use build_hvg_directed")
    edges = set(window_pairs(series, config))
    if config.method is Method.THVG:
        edges.update(hvg_pairs(_ratings(series)))
    meta = {"method": config.method.value, "tau": config.tau, "tau_unit": config.tau_unit.value}
    if config.tau_unit is TauUnit.SECONDS:
        meta["time_window_seconds"] = config.time_window_seconds
        meta["extension"] = "wall-clock window replaces the node-index window"
    return MessageGraph(series.items, frozenset(edges), meta=meta)


def build_graph(series: PublicationSeries, config: Config) -> MessageGraph:
    """Dispatch on ``config.method``."""
    if config.method is Method.HVG:
        return build_hvg_directed(series)
    return build_thvg(series, config)

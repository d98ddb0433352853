"""Network statistics, density sweeps, logarithmic fitting and source ranking."""

from __future__ import annotations

import enum
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .compaction import compact
from .model import (
    Config,
    LogFit,
    MessageGraph,
    NetworkMetrics,
    PublicationSeries,
    SourceGraph,
    ThvgError,
)
from .visibility import build_graph

Graph = Union[MessageGraph, SourceGraph]


class SweepError(ThvgError, ValueError):
    """A sweep size cannot be satisfied by the series."""


def undirected_links(graph: Graph) -> tuple[int, list[tuple[int, int]]]:
    """Node count and the undirected link list over integer node positions.

    Reciprocal pairs count once; self-loops are not links.
    """
    if isinstance(graph, SourceGraph):
        pos = {s: k for k, s in enumerate(graph.node_ids())}
        directed = [(pos[a], pos[b]) for a, b in graph.edges]
    else:
        directed = list(graph.edges)
    links = {(min(x, y), max(x, y)) for x, y in directed if x != y}
    return graph.n, sorted(links)


def _csgraph(n: int, links: list[tuple[int, int]]):
    if links:
        r, c = np.array(links).T
    else:
        r = c = np.array([], dtype=int)
    data = np.ones(len(r), dtype=np.int8)
    m = coo_matrix((data, (r, c)), shape=(n, n)).tocsr()
    return m


def diameter(n: int, links: list[tuple[int, int]], chunk: int = 512) -> int:
    """Largest finite shortest-path length on the undirected graph (0 if no links)."""
    if n == 0 or not links:
        return 0
    m = _csgraph(n, links)
    best = 0
    for start in range(0, n, chunk):
        d = shortest_path(m, method="D", directed=False, unweighted=True,
                          indices=np.arange(start, min(n, start + chunk)))
        finite = d[np.isfinite(d)]
        if finite.size:
            best = max(best, int(finite.max()))
    return best


def network_metrics(graph: Graph, with_diameter: bool = True) -> NetworkMetrics:
    """Density, degree statistics, component count and diameter.

    ``with_diameter=False`` skips the all-pairs search, which dominates the
    cost on large message graphs; ``diameter`` is then None.
    """
    n, links = undirected_links(graph)
    v = len(links)
    density = 2 * v / (n * (n - 1)) if n >= 2 else 0.0
    avg = 2 * v / n if n >= 1 else 0.0
    deg = Counter()
    for x, y in links:
        deg[x] += 1
        deg[y] += 1
    hist = Counter(deg[k] for k in range(n))
    ncomp = connected_components(_csgraph(n, links), directed=False)[0] if n else 0
    return NetworkMetrics(
        n=n,
        v=v,
        directed_edge_count=len(graph.edges),
        density=density,
        average_degree=avg,
        diameter=diameter(n, links) if with_diameter else None,
        component_count=int(ncomp),
        degree_histogram=dict(sorted(hist.items())),
    )


class Sampling(str, enum.Enum):
    PREFIX = "prefix"
    RANDOM_SUBSET = "random"


@dataclass(frozen=True)
class SweepSpec:
    sizes: tuple[int, ...]
    sampling: Sampling = Sampling.PREFIX
    seed: int = 0
    repeats: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "sampling", Sampling(self.sampling))
        if not self.sizes:
            raise ValueError("sweep sizes must be nonempty")
        if any(s < 2 for s in self.sizes):
            raise ValueError("every sweep size must be >= 2")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sweep sizes must be strictly increasing")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")


def prefix_with_sources(series: PublicationSeries, size: int) -> PublicationSeries:
    """Longest temporal prefix containing exactly ``size`` distinct sources."""
    seen: set[str] = set()
    for k, p in enumerate(series.items):
        if p.source_id not in seen:
            if len(seen) == size:
                return PublicationSeries(series.items[:k])
            seen.add(p.source_id)
    if len(seen) < size:
        raise SweepError(f"size {size} exceeds the {len(seen)} distinct sources available")
    return series


def subset_of_sources(series: PublicationSeries, size: int, seed: int, repeat: int) -> PublicationSeries:
    sources = sorted(series.sources())
    if len(sources) < size:
        raise SweepError(f"size {size} exceeds the {len(sources)} distinct sources available")
    rng = np.random.default_rng([seed, size, repeat])
    keep = {sources[k] for k in rng.choice(len(sources), size=size, replace=False)}
    return PublicationSeries(tuple(p for p in series.items if p.source_id in keep))


def _sweep_point(series: PublicationSeries, config: Config, spec: SweepSpec, size: int) -> tuple[int, float]:
    if spec.sampling is Sampling.PREFIX:
        samples = [prefix_with_sources(series, size)]
    else:
        samples = [subset_of_sources(series, size, spec.seed, r) for r in range(spec.repeats)]
    densities = [
        network_metrics(compact(build_graph(s, config), config), with_diameter=False).density
        for s in samples
    ]
    return size, math.fsum(densities) / len(densities)


def density_sweep(
    series: PublicationSeries, config: Config, spec: SweepSpec, workers: int = 1
) -> list[tuple[int, float]]:
    """Source-network density for each requested source count.

    PREFIX ignores ``repeats`` (the prefix is unique). Each size draws from its
    own seeded generator, so parallel and sequential runs agree exactly.
    """
    available = len(series.sources())
    for size in spec.sizes:
        if size > available:
            raise SweepError(f"size {size} exceeds the {available} distinct sources available")
    if workers > 1 and len(spec.sizes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, series, config, spec, s) for s in spec.sizes]
            return [f.result() for f in futures]
    return [_sweep_point(series, config, spec, s) for s in spec.sizes]


def fit_log(points: Sequence[tuple[float, float]]) -> LogFit:
    """Least-squares fit of ``D = a*ln(n) + b``."""
    pts = tuple((float(n), float(d)) for n, d in points)
    if any(n < 2 for n, _ in pts):
        raise ValueError("every n must be >= 2")
    if len({n for n, _ in pts}) < 2:
        raise ValueError("need at least two distinct n")
    x = [math.log(n) for n, _ in pts]
    y = [d for _, d in pts]
    if min(y) == max(y):
        # the float mean of equal values can miss them by an ulp
        return LogFit(0.0, y[0], 1.0, pts)
    k = len(pts)
    xm = math.fsum(x) / k
    ym = math.fsum(y) / k
    sxx = math.fsum((xi - xm) ** 2 for xi in x)
    sxy = math.fsum((xi - xm) * (yi - ym) for xi, yi in zip(x, y))
    a = sxy / sxx
    b = ym - a * xm
    ss_res = math.fsum((yi - (a * xi + b)) ** 2 for xi, yi in zip(x, y))
    ss_tot = math.fsum((yi - ym) ** 2 for yi in y)
    if ss_tot == 0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return LogFit(a, b, r2, pts)


@dataclass(frozen=True)
class RankedSource:
    source_id: str
    in_weight: int
    in_degree: int
    out_degree: int
    earliest_timestamp: Optional[int]
    rating: Optional[float]
    score: float


def _ts_key(ts: Optional[int]) -> float:
    return math.inf if ts is None else ts


def _source_stats(graph: SourceGraph) -> list[RankedSource]:
    in_w, in_d, out_d = Counter(), Counter(), Counter()
    for (a, b), w in graph.edges.items():
        in_w[b] += w
        in_d[b] += 1
        out_d[a] += 1
    return [
        RankedSource(s, in_w[s], in_d[s], out_d[s], node.earliest_timestamp, node.rating, float(in_w[s]))
        for s, node in graph.nodes.items()
    ]


def rank_sources(graph: SourceGraph) -> list[RankedSource]:
    """Sources by incoming weight, earliest first on ties."""
    return sorted(
        _source_stats(graph),
        key=lambda r: (-r.score, _ts_key(r.earliest_timestamp), r.source_id),
    )


def infer_primary(graph: SourceGraph, top_k: int = 1) -> list[str]:
    """Heuristic primary-source nominees.

    Favors sources that many others point to, that point to few others, and
    that published earliest.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    ranked = sorted(
        _source_stats(graph),
        key=lambda r: (-r.in_weight, r.out_degree, _ts_key(r.earliest_timestamp), r.source_id),
    )
    return [r.source_id for r in ranked[:top_k]]

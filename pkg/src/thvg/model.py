"""Core domain types shared by the graph builders, metrics and I/O layers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

# Plausible publication window, epoch seconds (1990-01-01 .. 2100-01-01 UTC).
DEFAULT_TIME_RANGE = (
    int(datetime(1990, 1, 1, tzinfo=timezone.utc).timestamp()),
    int(datetime(2100, 1, 1, tzinfo=timezone.utc).timestamp()),
)


class ThvgError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ThvgError, ValueError):
    """A record or graph violates a domain invariant."""


class ConfigError(ThvgError, ValueError):
    """Inconsistent construction parameters."""


class Method(str, enum.Enum):
    HVG = "hvg"
    THVG = "thvg"
    EQ1_ONLY = "eq1"


class TauUnit(str, enum.Enum):
    INDEX = "index"
    SECONDS = "seconds"


@dataclass(frozen=True)
class Publication:
    """One timestamped message. ``rating`` may be None only before estimation."""

    message_id: str
    source_id: str
    timestamp: int
    rating: Optional[float] = None

    def __post_init__(self):
        if not self.message_id:
            raise ValidationError("empty message_id")
        if not self.source_id:
            raise ValidationError(f"{self.message_id}: empty source_id")
        if isinstance(self.timestamp, bool) or not isinstance(self.timestamp, (int, np.integer)):
            raise ValidationError(f"{self.message_id}: timestamp must be integer epoch seconds")
        if self.rating is not None:
            r = float(self.rating)
            if not math.isfinite(r) or r <= 0:
                raise ValidationError(
                    f"{self.message_id}: rating must be positive and finite, got {self.rating!r}"
                )


@dataclass(frozen=True)
class PublicationSeries:
    """Time-ordered publications; position in ``items`` is the series index."""

    items: tuple[Publication, ...] = ()

    @property
    def n(self) -> int:
        return len(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @cached_property
    def ratings(self) -> np.ndarray:
        return np.array([p.rating for p in self.items], dtype=float)

    @cached_property
    def timestamps(self) -> np.ndarray:
        return np.array([p.timestamp for p in self.items], dtype=np.int64)

    def sources(self) -> list[str]:
        """Distinct source ids in order of first appearance."""
        return list(dict.fromkeys(p.source_id for p in self.items))


def normalize_series(
    raw: Iterable[Publication], time_range: tuple[int, int] = DEFAULT_TIME_RANGE
) -> PublicationSeries:
    """Validate publications and put them into the canonical series order.

    Order is timestamp ascending; equal timestamps keep input order, with
    source_id as the final key. Since input position is unique, the last key
    only matters when a caller re-sorts a concatenation of series.
    """
    raw = list(raw)
    seen: set[str] = set()
    lo, hi = time_range
    for pos, p in enumerate(raw):
        if p.message_id in seen:
            raise ValidationError(f"duplicate message_id {p.message_id!r}")
        seen.add(p.message_id)
        if p.rating is None:
            raise ValidationError(f"record {pos} ({p.message_id}) has no rating")
        if not lo <= p.timestamp < hi:
            raise ValidationError(
                f"record {pos} ({p.message_id}): timestamp {p.timestamp} outside [{lo}, {hi})"
            )
    order = sorted(range(len(raw)), key=lambda k: (raw[k].timestamp, k, raw[k].source_id))
    return PublicationSeries(tuple(raw[k] for k in order))


def series_from_ratings(
    ratings: Sequence[float],
    sources: Optional[Sequence[str]] = None,
    start: int = 1_600_000_000,
    step: int = 60,
) -> PublicationSeries:
    """Evenly spaced series; one source per message unless ``sources`` is given."""
    if sources is None:
        sources = [f"s{k + 1}" for k in range(len(ratings))]
    if len(sources) != len(ratings):
        raise ValueError("ratings and sources differ in length")
    return normalize_series(
        Publication(f"m{k + 1}", src, start + k * step, float(r))
        for k, (r, src) in enumerate(zip(ratings, sources))
    )


@dataclass(frozen=True)
class Config:
    tau: int = 1
    method: Method = Method.THVG
    tau_unit: TauUnit = TauUnit.INDEX
    drop_self_loops: bool = True
    time_window_seconds: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "tau_unit", TauUnit(self.tau_unit))
        if isinstance(self.tau, bool) or not isinstance(self.tau, int) or self.tau < 1:
            raise ConfigError(f"tau must be an integer >= 1, got {self.tau!r}")
        if self.tau_unit is TauUnit.SECONDS:
            if self.time_window_seconds is None:
                raise ConfigError("tau_unit=seconds requires time_window_seconds")
            if self.time_window_seconds <= 0:
                raise ConfigError("time_window_seconds must be positive")

    def snapshot(self) -> dict:
        return {
            "tau": self.tau,
            "method": self.method.value,
            "tau_unit": self.tau_unit.value,
            "drop_self_loops": self.drop_self_loops,
            "time_window_seconds": self.time_window_seconds,
        }


@dataclass(frozen=True)
class MessageGraph:
    """Message-level visibility graph.

    Edges are ``(j, i)`` index pairs meaning j -> i. Directed graphs only hold
    backward edges (i < j); undirected ones store both orientations.
    """

    nodes: tuple[Publication, ...]
    edges: frozenset[tuple[int, int]]
    directed: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.nodes)
        for j, i in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"edge ({j}, {i}) out of range for {n} nodes")
            if i == j:
                raise ValidationError(f"self-loop on node {i}")
            if self.directed and not i < j:
                raise ValidationError(f"edge {j}->{i} does not point backward in time")
            if not self.directed and (i, j) not in self.edges:
                raise ValidationError(f"undirected graph missing reverse of ({j}, {i})")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def adjacency(self) -> np.ndarray:
        """Boolean matrix with ``a[j, i]`` set for edge j -> i (row = later node)."""
        a = np.zeros((self.n, self.n), dtype=bool)
        if self.edges:
            rows, cols = zip(*self.edges)
            a[list(rows), list(cols)] = True
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class SourceNode:
    earliest_timestamp: Optional[int] = None
    rating: Optional[float] = None
    message_count: int = 0


@dataclass(frozen=True)
class SourceGraph:
    """Compacted source-influence network; ``edges`` maps (a, b) to weight."""

    nodes: dict[str, SourceNode]
    edges: dict[tuple[str, str], int]
    dropped_self_loops: int = field(default=0, compare=False)

    def __post_init__(self):
        for (a, b), w in self.edges.items():
            if a not in self.nodes or b not in self.nodes:
                raise ValidationError(f"edge {a}->{b} references an unknown source")
            if not isinstance(w, (int, np.integer)) or w < 1:
                raise ValidationError(f"edge {a}->{b} has invalid weight {w!r}")

    @property
    def n(self) -> int:
        return len(self.nodes)

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def sorted_edges(self) -> list[tuple[str, str, int]]:
        return [(a, b, w) for (a, b), w in sorted(self.edges.items())]

    @property
    def adjacency(self) -> np.ndarray:
        ids = self.node_ids()
        pos = {s: k for k, s in enumerate(ids)}
        a = np.zeros((len(ids), len(ids)), dtype=bool)
        for x, y in self.edges:
            a[pos[x], pos[y]] = True
        return a


@dataclass(frozen=True)
class NetworkMetrics:
    n: int
    v: int
    directed_edge_count: int
    density: float
    average_degree: float
    diameter: Optional[int]
    component_count: int
    degree_histogram: dict[int, int]


@dataclass(frozen=True)
class LogFit:
    a: float
    b: float
    r_squared: float
    points: tuple[tuple[float, float], ...]

    def predict(self, n):
        return self.a * np.log(n) + self.b


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_measure: float

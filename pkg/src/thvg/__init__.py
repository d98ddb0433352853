"""Visibility-graph construction of information-source influence networks."""

__version__ = "0.1.0"

from .compaction import compact
from .evaluation import evaluate
from .ingest_io import RatingPolicy, export_graph, import_graph, parse_publications, estimate_ratings
from .metrics import SweepSpec, density_sweep, fit_log, infer_primary, network_metrics, rank_sources
from .model import (
    Config,
    EvalReport,
    LogFit,
    MessageGraph,
    Method,
    NetworkMetrics,
    Publication,
    PublicationSeries,
    SourceGraph,
    SourceNode,
    TauUnit,
    normalize_series,
)
from .visibility import build_graph, build_hvg_directed, build_hvg_undirected, build_thvg

__all__ = [
    "Config", "EvalReport", "LogFit", "MessageGraph", "Method", "NetworkMetrics", "Publication",
    "PublicationSeries", "RatingPolicy", "SourceGraph", "SourceNode", "SweepSpec", "TauUnit",
    "build_graph", "build_hvg_directed", "build_hvg_undirected", "build_thvg", "compact",
    "density_sweep", "estimate_ratings", "evaluate", "export_graph", "fit_log", "import_graph",
    "infer_primary", "network_metrics", "normalize_series", "parse_publications", "rank_sources",
]

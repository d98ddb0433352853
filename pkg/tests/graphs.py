"""Seeded random graphs for round-trip and determinism checks."""

import numpy as np

from thvg.compaction import compact
from thvg.model import Config, SourceGraph, SourceNode, normalize_series
from thvg.synthetic import random_corpus
from thvg.visibility import build_graph


def random_source_graph(seed, attrs=True, self_loops=False):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, 25))
    ids = sorted({f"src-{int(x)}.{chr(97 + int(x) % 26)}" for x in rng.integers(0, 1000, n)})
    nodes = {}
    for s in ids:
        if attrs:
            nodes[s] = SourceNode(int(rng.integers(1_600_000_000, 1_700_000_000)),
                                  float(rng.lognormal(3, 1)), int(rng.integers(1, 50)))
        else:
            nodes[s] = SourceNode()
    edges = {}
    for _ in range(int(rng.integers(0, 3 * max(1, len(ids))))):
        if not ids:
            break
        a, b = (ids[int(k)] for k in rng.integers(0, len(ids), 2))
        if a == b and not self_loops:
            continue
        edges[a, b] = int(rng.integers(1, 6))
    return SourceGraph(nodes, dict(sorted(edges.items())))


def random_message_graph(seed):
    rng = np.random.default_rng(seed)
    n_sources = int(rng.integers(1, 12))
    corpus = normalize_series(random_corpus(n_sources, int(rng.integers(0, 60)), seed=seed))
    cfg = Config(tau=int(rng.integers(1, 6)), method=["hvg", "thvg", "eq1"][seed % 3])
    return build_graph(corpus, cfg), cfg


def random_compacted_graph(seed):
    g, cfg = random_message_graph(seed)
    return compact(g, cfg)

"""Seeded synthetic publication streams for tests, sweeps and demos."""

from __future__ import annotations

import numpy as np

from .model import Publication, PublicationSeries, normalize_series


def random_corpus(
    n_sources: int,
    n_messages: int,
    seed: int = 0,
    start: int = 1_609_459_200,
    span_seconds: int = 90 * 86400,
    zipf: float = 1.0,
) -> list[Publication]:
    """Stream where each source has a fixed lognormal rating.

    Source activity follows a Zipf-like law; every source publishes at least
    once when ``n_messages >= n_sources``.
    """
    rng = np.random.default_rng(seed)
    ratings = np.round(rng.lognormal(mean=3.0, sigma=0.8, size=n_sources), 3) + 0.001
    weights = 1.0 / np.arange(1, n_sources + 1) ** zipf
    weights /= weights.sum()
    base = list(range(n_sources)) if n_messages >= n_sources else []
    extra = rng.choice(n_sources, size=n_messages - len(base), p=weights)
    who = np.concatenate([np.array(base, dtype=int), extra])
    rng.shuffle(who)
    times = np.sort(rng.integers(0, span_seconds, size=n_messages)) + start
    return [
        Publication(f"m{k:06d}", f"src{int(s):04d}", int(t), float(ratings[s]))
        for k, (s, t) in enumerate(zip(who, times))
    ]


def iid_series(n: int, seed: int = 0, distinct: bool = True) -> PublicationSeries:
    """Uniform i.i.d. ratings in (0, 1], one message per source."""
    rng = np.random.default_rng(seed)
    if distinct:
        # a random permutation gives distinct values with the same visibility law
        values = (rng.permutation(n) + 1) / n
    else:
        values = 1.0 - rng.random(n)
    return normalize_series(
        Publication(f"m{k}", f"s{k}", 1_600_000_000 + k, float(v)) for k, v in enumerate(values)
    )

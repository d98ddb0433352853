import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import hvg_edges, thvg_edges, window_edges
from thvg.model import Config, ConfigError, Method, TauUnit, series_from_ratings
from thvg.visibility import build_graph, build_hvg_directed, build_hvg_undirected, build_thvg, hvg_pairs


def undirected(edges):
    return {frozenset(e) for e in edges}


@pytest.mark.parametrize(
    "ratings, expected",
    [
        ([1, 2, 3, 4], {(1, 0), (2, 1), (3, 2)}),
        ([3, 1, 2], hvg_edges([3, 1, 2])),
        ([2, 2, 2], {(1, 0), (2, 1)}),
    ],
)
def test_hvg_undirected_examples(ratings, expected):
    g = build_hvg_undirected(series_from_ratings(ratings))
    assert not g.directed
    assert g.edges == set(expected) | {(i, j) for j, i in expected}


def test_hvg_three_one_two_is_triangle():
    assert hvg_edges([3, 1, 2]) == {(1, 0), (2, 1), (2, 0)}


@pytest.mark.parametrize(
    "ratings, expected",
    [([3, 1, 2], {(1, 0), (2, 1), (2, 0)}), ([1], set()), ([1, 2], {(1, 0)}), ([], set())],
)
def test_hvg_directed_examples(ratings, expected):
    assert build_hvg_directed(series_from_ratings(ratings)).edges == expected


def test_thvg_worked_example():
    # ratings 5,2,1,4: HVG gives 2->1, 3->2, 4->3, 4->2, 4->1 (1-based); window adds 3->1
    g = build_thvg(series_from_ratings([5, 2, 1, 4]), Config(tau=4))
    assert g.edges == {(1, 0), (2, 1), (3, 2), (3, 1), (3, 0), (2, 0)}
    assert len(g.edges) == 6
    assert g.edges - build_hvg_directed(series_from_ratings([5, 2, 1, 4])).edges == {(2, 0)}


def test_window_only_example():
    g = build_thvg(series_from_ratings([3, 1, 2]), Config(tau=3, method=Method.EQ1_ONLY))
    assert g.edges == {(1, 0), (2, 0)}


def test_thvg_rejects_hvg_method():
    with pytest.raises(ConfigError):
        build_thvg(series_from_ratings([1, 2]), Config(method="hvg"))
    assert build_graph(series_from_ratings([1, 2]), Config(method="hvg")).edges == {(1, 0)}


def test_equal_ratings_give_no_window_edge():
    g = build_thvg(series_from_ratings([2, 1, 2, 2]), Config(tau=4, method="eq1"))
    assert g.edges == {(1, 0)}


def test_seconds_window():
    # messages at t, t+10, t+100 with falling ratings
    s = series_from_ratings([9, 5, 1], step=1)
    s = type(s)(tuple(p.__class__(p.message_id, p.source_id, p.timestamp + off, p.rating)
                      for p, off in zip(s.items, (0, 9, 98))))
    cfg = Config(tau=1, method="eq1", tau_unit="seconds", time_window_seconds=50)
    g = build_thvg(s, cfg)
    assert g.edges == {(1, 0)}
    assert g.meta["tau_unit"] == "seconds" and "extension" in g.meta
    wide = build_thvg(s, Config(tau=1, method="eq1", tau_unit="seconds", time_window_seconds=200))
    assert wide.edges == {(1, 0), (2, 0), (2, 1)}


def test_hvg_pairs_matches_oracle_small_exhaustive():
    for n in range(0, 7):
        for values in itertools.product(range(3), repeat=n):
            assert set(hvg_pairs(values)) == hvg_edges(values)


ratings_lists = st.lists(st.integers(1, 6), max_size=30)


@given(ratings_lists, st.integers(1, 10))
def test_builders_match_oracle(values, tau):
    s = series_from_ratings(values)
    assert build_hvg_directed(s).edges == hvg_edges(values)
    assert build_thvg(s, Config(tau=tau)).edges == thvg_edges(values, tau)
    assert build_thvg(s, Config(tau=tau, method="eq1")).edges == window_edges(values, tau)


@given(ratings_lists, st.integers(1, 8), st.integers(0, 8))
def test_thvg_superset_and_monotone(values, tau, extra):
    s = series_from_ratings(values)
    hvg = build_hvg_directed(s).edges
    small = build_thvg(s, Config(tau=tau)).edges
    large = build_thvg(s, Config(tau=tau + extra)).edges
    assert hvg <= small <= large
    assert all(i < j for j, i in large)


@given(ratings_lists)
def test_tau_one_is_hvg(values):
    s = series_from_ratings(values)
    assert build_thvg(s, Config(tau=1)).edges == build_hvg_directed(s).edges


@given(st.lists(st.floats(0.1, 100), min_size=2, max_size=40))
def test_adjacent_pairs_always_linked(values):
    edges = build_hvg_directed(series_from_ratings(values)).edges
    assert all((k + 1, k) in edges for k in range(len(values) - 1))


@settings(max_examples=50)
@given(ratings_lists)
def test_undirected_is_symmetric_closure(values):
    s = series_from_ratings(values)
    d = build_hvg_directed(s).edges
    u = build_hvg_undirected(s).edges
    assert u == d | {(i, j) for j, i in d}


def test_hvg_linear_time_on_large_series():
    import time

    values = list(range(200_000, 0, -1)) + list(range(200_000))
    t = time.perf_counter()
    pairs = hvg_pairs(values)
    assert time.perf_counter() - t < 3.0
    assert len(pairs) <= 2 * len(values) - 3

import random

import pytest
from hypothesis import given, strategies as st

from thvg.model import (
    Config,
    ConfigError,
    MessageGraph,
    Method,
    Publication,
    TauUnit,
    ValidationError,
    normalize_series,
    series_from_ratings,
)

T0 = 1_600_000_000


def pub(mid, src="a", t=T0, r=1.0):
    return Publication(mid, src, t, r)


def test_empty_series():
    s = normalize_series([])
    assert s.n == 0 and s.items == ()


def test_sorts_by_timestamp():
    s = normalize_series([pub("x", t=T0 + 3), pub("y", t=T0 + 1), pub("z", t=T0 + 2)])
    assert [p.timestamp for p in s] == [T0 + 1, T0 + 2, T0 + 3]


def test_equal_timestamps_keep_input_order():
    raw = [pub("m3", "zz", T0 + 5), pub("m1", "bb", T0), pub("m2", "aa", T0), pub("m0", "cc", T0)]
    # oracle: stable sort on timestamp alone
    expected = sorted(raw, key=lambda p: p.timestamp)
    assert list(normalize_series(raw).items) == expected
    assert [p.message_id for p in expected] == ["m1", "m2", "m0", "m3"]


def test_duplicate_message_id_named():
    with pytest.raises(ValidationError, match="'dup'"):
        normalize_series([pub("dup"), pub("dup", t=T0 + 1)])


@pytest.mark.parametrize("rating", [0, -3, float("nan"), float("inf")])
def test_bad_rating_rejected(rating):
    with pytest.raises(ValidationError, match="bad"):
        Publication("bad", "a", T0, rating)


def test_missing_rating_rejected_by_normalize():
    with pytest.raises(ValidationError, match="no rating"):
        normalize_series([Publication("m", "a", T0)])


def test_timestamp_range():
    with pytest.raises(ValidationError, match="outside"):
        normalize_series([pub("old", t=0)])
    assert normalize_series([pub("old", t=0)], time_range=(-1, 10)).n == 1


records = st.lists(
    st.tuples(st.integers(T0, T0 + 50), st.sampled_from("abc"), st.floats(0.5, 9.5)),
    max_size=20,
)


@given(records)
def test_idempotent(rows):
    raw = [Publication(f"m{k}", s, t, r) for k, (t, s, r) in enumerate(rows)]
    once = normalize_series(raw)
    assert normalize_series(once.items) == once


@given(st.lists(st.integers(T0, T0 + 10_000), unique=True, max_size=15), st.randoms())
def test_permutation_invariant_for_distinct_timestamps(times, rnd):
    raw = [Publication(f"m{k}", "s", t, 1.0 + k) for k, t in enumerate(times)]
    shuffled = raw[:]
    rnd.shuffle(shuffled)
    assert normalize_series(shuffled) == normalize_series(raw)


def test_config_validation():
    assert Config().method is Method.THVG
    assert Config(method="eq1").method is Method.EQ1_ONLY
    with pytest.raises(ConfigError):
        Config(tau=0)
    with pytest.raises(ConfigError, match="time_window_seconds"):
        Config(method="eq1", tau_unit=TauUnit.SECONDS)
    assert Config(tau_unit="seconds", time_window_seconds=60).time_window_seconds == 60


def test_message_graph_invariants():
    s = series_from_ratings([1, 2, 3])
    g = MessageGraph(s.items, frozenset({(1, 0), (2, 0)}))
    assert g.adjacency.tolist() == [[False] * 3, [True, False, False], [True, False, False]]
    with pytest.raises(ValidationError, match="backward"):
        MessageGraph(s.items, frozenset({(0, 1)}))
    with pytest.raises(ValidationError, match="self-loop"):
        MessageGraph(s.items, frozenset({(1, 1)}))


def test_series_from_ratings_sources_length():
    with pytest.raises(ValueError):
        series_from_ratings([1, 2], sources=["a"])
    random.seed(0)
    s = series_from_ratings([4, 4], sources=["a", "a"])
    assert s.sources() == ["a"]

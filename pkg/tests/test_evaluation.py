import pytest
from hypothesis import given, strategies as st

from oracles import f_measure as oracle_f
from thvg.evaluation import edge_set, evaluate, f_measure, read_edge_csv, scores, write_edge_csv
from thvg.model import ValidationError


@pytest.mark.parametrize("p, r, f", [(0.714, 0.968, 0.822), (0.635, 0.873, 0.735)])
def test_reported_rows_are_consistent(p, r, f):
    assert f_measure(p, r) == pytest.approx(f, abs=1e-3)
    assert f_measure(p, r) == pytest.approx(oracle_f(p, r), abs=1e-15)


def test_counts_reproduce_reported_row():
    rep = scores(tp=968, fp=388, fn=32)
    assert rep.recall == pytest.approx(0.968, abs=1e-12)
    assert rep.precision == pytest.approx(0.714, abs=1e-3)
    assert rep.f_measure == pytest.approx(0.822, abs=1e-3)


def test_perfect_and_empty():
    gold = edge_set([("a", "b"), ("b", "c")])
    rep = evaluate(gold, gold)
    assert (rep.precision, rep.recall, rep.f_measure) == (1.0, 1.0, 1.0)
    empty = evaluate(set(), set())
    assert (empty.tp, empty.fp, empty.fn, empty.precision, empty.recall, empty.f_measure) == (0, 0, 0, 0, 0, 0)


def test_directed_vs_undirected():
    pred, gold = {("a", "b")}, {("b", "a")}
    assert evaluate(pred, gold).tp == 0
    assert evaluate(pred, gold, directed=False).tp == 1


def test_self_pairs():
    with pytest.raises(ValidationError):
        edge_set([("a", "a")])
    assert edge_set([("a", "a")], allow_self=True) == {("a", "a")}


def test_csv_roundtrip_and_duplicates():
    text = "from_source,to_source\na,b\na,b\nc,a\n"
    assert read_edge_csv(text) == {("a", "b"), ("c", "a")}
    assert read_edge_csv(write_edge_csv({("a", "b"), ("c", "a")})) == {("a", "b"), ("c", "a")}
    assert read_edge_csv("from,to,weight\na,b,3\nz,,0\n") == {("a", "b")}
    with pytest.raises(ValidationError):
        read_edge_csv("x,y\na,b\n")


pairs = st.sets(st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdef")).filter(lambda e: e[0] != e[1]))


@given(pairs, pairs)
def test_invariants(a, b):
    rep = evaluate(a, b)
    assert rep.tp + rep.fp == len(a) and rep.tp + rep.fn == len(b)
    assert evaluate(a, b).fp == evaluate(b, a).fn
    if rep.precision + rep.recall > 0:
        lo, hi = sorted((rep.precision, rep.recall))
        assert lo - 1e-12 <= rep.f_measure <= hi + 1e-12
        if rep.precision != rep.recall:
            assert lo < rep.f_measure < hi
        else:
            assert rep.f_measure == pytest.approx(rep.precision)

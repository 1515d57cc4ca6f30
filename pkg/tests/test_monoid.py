"""Graph monoid elements: rewriting, bounded equivalence search, fullness."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import arrow, graphs, looped_pair, random_graph, rose2, single_loop, triangle
from leavitt.graph import Edge, Graph, classify
from leavitt.monoid import (
    Equivalent,
    MonoidElement,
    NotWithinBound,
    contract,
    equivalent,
    expand,
    format_monoid,
    is_full,
    parse_monoid,
    rebalance_full,
)


def disjoint_loops() -> Graph:
    return Graph(("a", "b"), (Edge("la", "a", "a"), Edge("lb", "b", "b")))


# ── elements and text form ────────────────────────────────────────────────────


def test_element_basics():
    m = MonoidElement.of({"b": 2, "a": 1, "c": 0})
    assert m.counts == (("a", 1), ("b", 2))
    assert m.support == ("a", "b")
    assert m.total == 3
    assert m.get("c") == 0
    assert m and not MonoidElement.of({})
    with pytest.raises(ValueError):
        MonoidElement((("a", 1), ("a", 2)))
    with pytest.raises(ValueError):
        MonoidElement((("a", -1),))


def test_parse_format_round_trip():
    g = rose2()
    assert parse_monoid(g, "0") == MonoidElement.of({})
    assert parse_monoid(g, "") == MonoidElement.of({})
    assert parse_monoid(g, "v:2 v:3") == MonoidElement.of({"v": 5})
    assert format_monoid(MonoidElement.of({})) == "0"
    assert format_monoid(MonoidElement.of({"v": 5})) == "v:5"
    with pytest.raises(ValueError):
        parse_monoid(g, "v")
    with pytest.raises(ValueError):
        parse_monoid(g, "v:x")
    with pytest.raises(ValueError):
        parse_monoid(g, "v:-1")
    with pytest.raises(ValueError):
        parse_monoid(g, "w:1")


# ── the defining relation ─────────────────────────────────────────────────────


def test_expand_examples():
    assert expand(rose2(), MonoidElement.of({"v": 1}), "v") == MonoidElement.of({"v": 2})
    g = single_loop()
    assert expand(g, MonoidElement.of({"v": 1}), "v") == MonoidElement.of({"v": 1})
    t = triangle()
    assert expand(t, MonoidElement.of({"v": 1}), "v") == MonoidElement.of({"u": 1})


def test_expand_errors():
    with pytest.raises(ValueError, match="not in the support"):
        expand(triangle(), MonoidElement.of({"v": 1}), "u")
    with pytest.raises(ValueError, match="singular"):
        expand(arrow(), MonoidElement.of({"2": 1}), "2")


def test_contract_inverts_expand():
    g = rose2()
    assert contract(g, MonoidElement.of({"v": 2}), "v") == MonoidElement.of({"v": 1})
    with pytest.raises(ValueError, match="not contained"):
        contract(g, MonoidElement.of({"v": 1}), "v")


@settings(max_examples=60)
@given(graphs(), st.data())
def test_expand_contract_round_trip(g, data):
    regular = [v for v in g.vertices if g.out_edges(v)]
    if not regular:
        return
    v = data.draw(st.sampled_from(regular))
    extra = data.draw(st.dictionaries(st.sampled_from(g.vertices), st.integers(0, 3), max_size=3))
    m = MonoidElement.of({v: 1} | {u: k for u, k in extra.items() if u != v})
    assert contract(g, expand(g, m, v), v) == m


# ── bounded equivalence search ────────────────────────────────────────────────


def test_equivalent_trivial_and_one_step():
    g = rose2()
    a = MonoidElement.of({"v": 1})
    assert equivalent(g, a, a, 1, 1) == Equivalent(0)
    assert equivalent(g, a, MonoidElement.of({"v": 2}), 5, 50) == Equivalent(1)


def test_equivalent_exhausts_single_loop():
    g = single_loop()
    out = equivalent(g, MonoidElement.of({"v": 1}), MonoidElement.of({"v": 2}), 10, 100)
    assert out == NotWithinBound(10, 100, True)


def test_equivalent_bound_checks():
    g = rose2()
    a = MonoidElement.of({"v": 1})
    with pytest.raises(ValueError):
        equivalent(g, a, a, 0, 5)
    with pytest.raises(ValueError):
        equivalent(g, a, a, 5, 0)


def test_equivalent_reports_unexhausted_cutoff():
    g = rose2()
    out = equivalent(g, MonoidElement.of({"v": 1}), MonoidElement.of({"v": 5}), 1, 2)
    assert isinstance(out, NotWithinBound) and not out.exhausted


def test_equivalent_symmetric_steps():
    rng = random.Random(7)
    for _ in range(20):
        g = random_graph(rng, max_vertices=4, max_edges=8, no_sinks=True)
        a = MonoidElement.of({rng.choice(g.vertices): rng.randint(1, 2)})
        b = MonoidElement.of({rng.choice(g.vertices): rng.randint(1, 2)})
        fwd = equivalent(g, a, b, 4, 40)
        rev = equivalent(g, b, a, 4, 40)
        if isinstance(fwd, Equivalent):
            assert fwd == rev


@settings(max_examples=60)
@given(graphs(), st.data())
def test_expand_stays_equivalent(g, data):
    regular = [v for v in g.vertices if g.out_edges(v)]
    if not regular:
        return
    v = data.draw(st.sampled_from(regular))
    m = MonoidElement.of({v: 1})
    out = equivalent(g, m, expand(g, m, v), 1, 10_000)
    assert isinstance(out, Equivalent) and out.steps <= 1


# ── fullness ──────────────────────────────────────────────────────────────────


def test_is_full_examples():
    assert is_full(looped_pair(), MonoidElement.of({"v": 1}))
    assert not is_full(looped_pair(), MonoidElement.of({"w": 1}))
    assert not is_full(disjoint_loops(), MonoidElement.of({"a": 1}))
    g = disjoint_loops()
    assert is_full(g, MonoidElement.of({"a": 1, "b": 1}))
    with pytest.raises(ValueError):
        is_full(g, MonoidElement.of({}))


@settings(max_examples=60)
@given(graphs(), st.data())
def test_is_full_invariant_under_expand(g, data):
    regular = [v for v in g.vertices if g.out_edges(v)]
    if not regular:
        return
    v = data.draw(st.sampled_from(regular))
    extra = data.draw(st.dictionaries(st.sampled_from(g.vertices), st.integers(0, 2), max_size=2))
    m = MonoidElement.of({v: 1} | {u: k for u, k in extra.items() if u != v})
    assert is_full(g, expand(g, m, v)) == is_full(g, m)


# ── rebalancing full elements ─────────────────────────────────────────────────


def test_rebalance_spreads_support():
    g = looped_pair()
    out = rebalance_full(g, MonoidElement.of({"v": 1}))
    assert out == MonoidElement.of({"v": 1, "w": 1})


def test_rebalance_keeps_covered_element():
    g = looped_pair()
    m = MonoidElement.of({"v": 2, "w": 1})
    assert rebalance_full(g, m) == m


def test_rebalance_output_is_equivalent():
    rng = random.Random(11)
    done = 0
    while done < 15:
        g = random_graph(rng, max_vertices=5, max_edges=10, no_sinks=True)
        cl = classify(g)
        if cl.sources or not all(any(e.dst == v for e in g.out_edges(v)) for v in g.vertices):
            continue
        m = MonoidElement.of({rng.choice(g.vertices): rng.randint(1, 2)})
        if not is_full(g, m):
            continue
        out = rebalance_full(g, m)
        assert all(out.get(v) >= 1 for v in g.vertices)
        cert = equivalent(g, m, out, 30, 5000)
        assert isinstance(cert, Equivalent)
        done += 1


def test_rebalance_precondition_errors():
    with pytest.raises(ValueError, match="sink"):
        rebalance_full(arrow(), MonoidElement.of({"1": 1}))
    src = Graph(("s", "v"), (Edge("a", "s", "v"), Edge("l", "v", "v")))
    with pytest.raises(ValueError, match="source"):
        rebalance_full(src, MonoidElement.of({"s": 1}))
    from conftest import two_way_line

    with pytest.raises(ValueError, match="no loop"):
        rebalance_full(two_way_line(), MonoidElement.of({"v2": 1}))
    with pytest.raises(ValueError, match="not full"):
        rebalance_full(disjoint_loops(), MonoidElement.of({"a": 1}))

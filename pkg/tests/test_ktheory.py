"""K-theory bookkeeping: Smith normal form, rank formulas, verdicts.

Two independent oracles come first: invariant factors from gcds of k x k
minors (cofactor-expansion determinants), and rational rank by fraction-free
(Bareiss) Gaussian elimination.  The Smith normal form must agree with both
on random matrices before anything downstream is trusted.
"""

from __future__ import annotations

import random
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import arrow, funnel_into_cycle, graphs, random_graph, rose2, single_loop
from leavitt.graph import Graph, classify
from leavitt.ktheory import (
    INF,
    IntMatrix,
    adjacency,
    classify_algebra,
    k0_invariant_data,
    k_summary,
    presentation_matrix,
    smith_normal_form,
)


# ── oracles ───────────────────────────────────────────────────────────────────


def det(m: list[list[int]]) -> int:
    if len(m) == 1:
        return m[0][0]
    total = 0
    for j, entry in enumerate(m[0]):
        if entry:
            sub = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * entry * det(sub)
    return total


def oracle_invariant_factors(entries) -> tuple[int, ...]:
    """d_1 ... d_k from the gcds D_k of all k x k minors: d_k = D_k / D_{k-1}."""
    rows, cols = len(entries), len(entries[0]) if entries else 0
    factors = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, det([[entries[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return tuple(factors)


def oracle_rank(entries) -> int:
    """Rational rank by Bareiss elimination — all arithmetic stays integral."""
    m = [list(row) for row in entries]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    rank, r, prev = 0, 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


int_matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda rows: st.integers(min_value=1, max_value=5).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


# ── matrices ──────────────────────────────────────────────────────────────────


def test_int_matrix_rejects_ragged():
    with pytest.raises(ValueError):
        IntMatrix(((1, 2), (3,)))


def test_int_matrix_rejects_non_integer():
    with pytest.raises(ValueError):
        IntMatrix(((1.5,),))


def test_adjacency_examples():
    assert adjacency(arrow()).entries == ((0, 1), (0, 0))
    assert adjacency(single_loop()).entries == ((1,),)
    assert adjacency(rose2()).entries == ((2,),)


def test_presentation_examples():
    assert presentation_matrix(arrow()).entries == ((1,), (-1,))
    assert presentation_matrix(single_loop()).entries == ((0,),)
    assert presentation_matrix(rose2()).entries == ((-1,),)


# ── Smith normal form against the oracles ─────────────────────────────────────


def test_snf_frozen_examples():
    assert smith_normal_form(IntMatrix(((2, 0), (0, 3)))) == (1, 6)
    assert smith_normal_form(IntMatrix(((0, 0), (0, 0)))) == ()
    assert smith_normal_form(IntMatrix(((1,), (-1,)))) == (1,)


@settings(max_examples=150)
@given(int_matrices)
def test_snf_matches_minor_gcd_oracle(rows):
    entries = tuple(tuple(r) for r in rows)
    assert smith_normal_form(IntMatrix(entries)) == oracle_invariant_factors(entries)


@settings(max_examples=150)
@given(int_matrices)
def test_snf_rank_matches_bareiss(rows):
    entries = tuple(tuple(r) for r in rows)
    assert len(smith_normal_form(IntMatrix(entries))) == oracle_rank(entries)


@given(int_matrices)
def test_snf_divisibility_chain(rows):
    factors = smith_normal_form(IntMatrix(tuple(tuple(r) for r in rows)))
    assert all(d > 0 for d in factors)
    assert all(a != 0 and b % a == 0 for a, b in zip(factors, factors[1:]))


def test_snf_survives_coefficient_blowup():
    # dense ill-conditioned entries force large intermediates
    rng = random.Random(7)
    entries = tuple(tuple(rng.randint(-99, 99) for _ in range(6)) for _ in range(6))
    factors = smith_normal_form(IntMatrix(entries))
    assert len(factors) == oracle_rank(entries)


# ── rank formulas ─────────────────────────────────────────────────────────────


def test_summary_arrow_infinite_unit_rank():
    s = k_summary(arrow(), INF)
    assert s.rank_k0 == 1
    assert s.rank_k1 == INF
    assert s.torsion == ()
    assert s.singular_count == 1


def test_summary_single_loop():
    s = k_summary(single_loop(), 1)
    assert s.rank == 0
    assert s.rank_k0 == 1
    assert s.rank_k1 == 2
    assert s.singular_count == 0
    assert 2 * s.rank_k0 - s.rank_k1 == s.singular_count


def test_summary_rose2():
    for r in (0, 1, 2, 3):
        s = k_summary(rose2(), r)
        assert (s.rank_k0, s.rank_k1, s.torsion) == (0, 0, ())
        assert s.invariant_factors == (1,)


def test_infinite_rank_collapses_when_k0_trivial():
    # rank inf times zero must not poison the sum: K0 of rose-2 is finite
    s = k_summary(rose2(), INF)
    assert s.rank_k1 == 0


@settings(max_examples=80, deadline=None)
@given(graphs(max_vertices=6, max_edges=12), st.integers(min_value=0, max_value=3))
def test_rank_identity(g, r):
    s = k_summary(g, r)
    assert (r + 1) * s.rank_k0 - s.rank_k1 == s.singular_count


@given(graphs(max_vertices=6, max_edges=12))
def test_cstar_rank_equality(g):
    s = k_summary(g, 0)
    assert s.rank_k1_cstar == s.rank_k1
    assert k0_invariant_data(g) == (s.rank_k0, s.torsion)


def test_torsion_example():
    # two vertices, each with edges to both: B = I - A^t = [[0,-1],[-1,0]] -> K0 free rank 0
    g = Graph(
        ("a", "b"),
        tuple(
            (f"e{i}", s, d)
            for i, (s, d) in enumerate([("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")], 1)
        ),
    )
    s = k_summary(g, 0)
    assert s.invariant_factors == (1, 1)
    assert s.torsion == ()
    # rose with 3 loops: B = (-2): K0 = Z/2
    g3 = Graph(("v",), (("e", "v", "v"), ("f", "v", "v"), ("g", "v", "v")))
    assert k_summary(g3, 0).torsion == (2,)


# ── verdicts ──────────────────────────────────────────────────────────────────


def test_verdict_arrow():
    v = classify_algebra(arrow(), 0)
    assert not v.no_sinks and not v.is_ck and not v.strongly_graded
    assert v.criterion4 is False
    assert v.criterion5 is False
    assert v.consistent


def test_verdict_single_loop():
    v = classify_algebra(single_loop(), 0)
    assert v.no_sinks and v.is_ck and v.strongly_graded
    assert v.criterion4 is True and v.criterion5 is True
    assert v.consistent


def test_verdict_infinite_rank_note():
    v = classify_algebra(arrow(), INF)
    assert v.criterion5 is None
    assert v.criterion5_note == "inapplicable: infinite unit-group rank"


def test_verdict_funnel():
    v = classify_algebra(funnel_into_cycle(), 0)
    assert v.no_sinks and v.is_ck and v.strongly_graded and v.consistent


@settings(max_examples=80, deadline=None)
@given(graphs(max_vertices=6, max_edges=12), st.integers(min_value=0, max_value=3))
def test_consistency_flag_never_fires(g, r):
    assert classify_algebra(g, r).consistent


def test_consistency_on_seeded_batch():
    rng = random.Random(20260818)
    for _ in range(150):
        g = random_graph(rng, max_vertices=8, max_edges=16)
        for r in (0, 1, 2, 3):
            v = classify_algebra(g, r)
            assert v.consistent
            assert v.is_ck == (not classify(g).sinks)

from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, strategies as st

from conftest import graphs, permutations
from graphcode.errors import DimensionError, RangeError
from graphcode.families import cycle
from graphcode.graph import Graph
from graphcode.perm import (
    Permutation,
    apply_to_graph,
    compose,
    inverse,
    lehmer_digits,
    lehmer_rank,
    lehmer_unrank,
)

P = Permutation


def test_compose_identity_left():
    q = P((2, 3, 1))
    assert compose(P.identity(3), q) == q


def test_compose_hand_evaluated():
    # p(q(1)) = p(2) = 3, p(q(2)) = p(1) = 2, p(q(3)) = p(3) = 1
    assert compose(P((2, 3, 1)), P((2, 1, 3))) == P((3, 2, 1))


def test_inverse_examples():
    assert inverse(P.identity(4)) == P.identity(4)
    assert inverse(P((2, 3, 1))) == P((3, 1, 2))


@given(permutations(max_n=9))
def test_inverse_laws(p):
    assert compose(p, inverse(p)) == P.identity(p.n)
    assert compose(inverse(p), p) == P.identity(p.n)
    assert inverse(inverse(p)) == p


@given(st.integers(0, 7).flatmap(lambda n: st.tuples(*(permutations(n=n) for _ in range(3)))))
def test_compose_pointwise_and_associative(pqr):
    p, q, r = pqr
    pq = compose(p, q)
    assert all(pq(i) == p(q(i)) for i in range(1, p.n + 1))
    assert compose(pq, r) == compose(p, compose(q, r))


def test_compose_size_mismatch():
    with pytest.raises(DimensionError):
        compose(P.identity(2), P.identity(3))


def test_rejects_non_permutation():
    with pytest.raises(ValueError):
        P((1, 1, 2))
    with pytest.raises(ValueError):
        P((0, 1))


def test_lehmer_small_values():
    assert lehmer_rank(P.identity(5)) == 0
    assert lehmer_rank(P((3, 2, 1))) == 5
    assert lehmer_rank(P((2, 1))) == 1
    assert lehmer_unrank(3, 0) == P.identity(3)
    assert lehmer_unrank(3, 5) == P((3, 2, 1))


@pytest.mark.parametrize("n", range(0, 7))
def test_lehmer_matches_lexicographic_enumeration(n):
    # itertools yields permutations of a sorted input in lexicographic order
    for r, images in enumerate(itertools.permutations(range(1, n + 1))):
        assert lehmer_rank(P(images)) == r
        assert lehmer_unrank(n, r) == P(images)


def test_lehmer_round_trip_n5_all():
    assert sorted(lehmer_rank(lehmer_unrank(5, r)) for r in range(120)) == list(range(120))


@given(st.integers(1, 25).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, math.factorial(n) - 1))))
def test_lehmer_big_round_trip(nr):
    n, r = nr
    assert lehmer_rank(lehmer_unrank(n, r)) == r


def test_lehmer_digits_are_factorial_base():
    assert lehmer_digits((3, 1, 2)) == [2, 0, 0]


def test_unrank_out_of_range():
    with pytest.raises(RangeError):
        lehmer_unrank(3, 6)
    with pytest.raises(RangeError):
        lehmer_unrank(3, -1)


def test_apply_identity_and_rotation():
    g = cycle(4)
    assert apply_to_graph(P.identity(4), g) == g
    assert apply_to_graph(P((2, 3, 4, 1)), g) == g


def test_apply_moves_edges_and_colors():
    g = Graph.from_edges(3, [(1, 2)], colors=(5, 0, 0))
    h = apply_to_graph(P((3, 1, 2)), g)
    assert h.edges() == [(1, 3)]
    assert h.colors == (0, 0, 5)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(permutations(n=n), permutations(n=n), graphs(min_n=n, max_n=n, colored=True))))
def test_action_law(pqg):
    p, q, g = pqg
    assert apply_to_graph(p, apply_to_graph(q, g)) == apply_to_graph(compose(p, q), g)
    h = apply_to_graph(p, g)
    assert all(h.has_edge(p(v), p(w)) == g.has_edge(v, w) for v in range(1, g.n + 1) for w in range(1, g.n + 1))


def test_apply_size_mismatch():
    with pytest.raises(DimensionError):
        apply_to_graph(P.identity(3), cycle(4))


def test_parse_and_str():
    p = P.parse("3 1 2")
    assert p == P((3, 1, 2))
    assert P.parse(str(p)) == p

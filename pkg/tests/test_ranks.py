from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, strategies as st

from graphcode.errors import RangeError
from graphcode.ranks import radix_pack, radix_unpack, subset_rank, subset_unrank


def colex_key(s):
    return tuple(reversed(s))


@pytest.mark.parametrize("n", range(0, 9))
def test_subset_rank_is_colex_position(n):
    # independent oracle: sort all k-subsets colexicographically and number them
    for k in range(n + 1):
        subsets = sorted(itertools.combinations(range(1, n + 1), k), key=colex_key)
        for r, s in enumerate(subsets):
            assert subset_rank(n, s) == r
            assert subset_unrank(n, k, r) == s


def test_subset_examples():
    assert subset_rank(6, [1, 2, 3]) == 0
    assert subset_unrank(6, 3, 0) == (1, 2, 3)
    assert subset_unrank(4, 2, 5) == (3, 4)
    # the six 2-subsets of [4] in colex order: 12 13 23 14 24 34
    assert [subset_unrank(4, 2, r) for r in range(6)] == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]


@pytest.mark.parametrize("n,k", [(5, 2), (8, 4), (7, 0), (7, 7)])
def test_max_rank_attained_once(n, k):
    ranks = [subset_rank(n, s) for s in itertools.combinations(range(1, n + 1), k)]
    assert ranks.count(math.comb(n, k) - 1) == 1
    assert max(ranks) == math.comb(n, k) - 1


@given(st.integers(0, 20).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))).flatmap(
    lambda nk: st.tuples(st.just(nk[0]), st.just(nk[1]), st.integers(0, math.comb(*nk) - 1))))
def test_subset_round_trip(nkr):
    n, k, r = nkr
    s = subset_unrank(n, k, r)
    assert len(s) == k and list(s) == sorted(set(s))
    assert subset_rank(n, s) == r


def test_subset_rank_order_of_input_irrelevant():
    assert subset_rank(5, [4, 1]) == subset_rank(5, [1, 4])


def test_subset_errors():
    with pytest.raises(RangeError):
        subset_rank(3, [4])
    with pytest.raises(RangeError):
        subset_rank(3, [1, 1])
    with pytest.raises(RangeError):
        subset_unrank(4, 2, 6)
    with pytest.raises(RangeError):
        subset_unrank(4, 5, 0)


def test_radix_pack_exhaustive():
    radices = (3, 4, 5)
    seen = {}
    for values in itertools.product(*(range(m) for m in radices)):
        x = radix_pack(values, radices)
        # first digit least significant
        assert x == values[0] + 3 * (values[1] + 4 * values[2])
        seen[x] = values
        assert tuple(radix_unpack(x, radices)) == values
    assert sorted(seen) == list(range(60))


def test_radix_trivial_cases():
    assert radix_pack([0, 0, 0], [7, 8, 9]) == 0
    assert radix_pack([5], [9]) == 5
    assert radix_unpack(5, [9]) == [5]
    assert radix_pack([], []) == 0


@given(st.lists(st.integers(1, 10**30), min_size=1, max_size=8).flatmap(
    lambda rs: st.tuples(st.just(rs), st.tuples(*(st.integers(0, m - 1) for m in rs)))))
def test_radix_round_trip_big(case):
    radices, values = case
    x = radix_pack(values, radices)
    assert 0 <= x < math.prod(radices)
    assert tuple(radix_unpack(x, radices)) == values


def test_radix_errors():
    with pytest.raises(RangeError):
        radix_pack([3], [3])
    with pytest.raises(RangeError):
        radix_unpack(60, [3, 4, 5])
    with pytest.raises(ValueError):
        radix_pack([1, 2], [3])

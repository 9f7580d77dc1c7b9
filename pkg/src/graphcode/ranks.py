"""
Exact integer encodings on Python's arbitrary-precision ints.

Subsets use the combinatorial number system in colexicographic order; tuples
are packed in mixed radix with the first value as the least significant digit:
x = v1 + n1 * (v2 + n2 * (v3 + ...)).
"""
from __future__ import annotations

from math import comb, prod
from typing import Sequence

from .errors import RangeError


def subset_rank(n: int, subset: Sequence[int]) -> int:
    """
    Colex rank of a k-subset of [n] within [0, C(n, k)).

    >>> subset_rank(4, [3, 4])
    5
    """
    s = sorted(subset)
    if len(set(s)) != len(s) or (s and (s[0] < 1 or s[-1] > n)):
        raise RangeError(f"{list(subset)} is not a subset of [{n}]")
    return sum(comb(v - 1, i) for i, v in enumerate(s, 1))


def subset_unrank(n: int, k: int, r: int) -> tuple[int, ...]:
    """
    >>> subset_unrank(4, 2, 5)
    (3, 4)
    """
    if not 0 <= k <= n:
        raise RangeError(f"k={k} outside [0, {n}]")
    if not 0 <= r < comb(n, k):
        raise RangeError(f"rank {r} outside [0, C({n},{k}))")
    out = []
    top = n
    for i in range(k, 0, -1):
        # largest c < top with C(c, i) <= r
        c = top - 1
        while comb(c, i) > r:
            c -= 1
        out.append(c + 1)
        r -= comb(c, i)
        top = c
    return tuple(reversed(out))


def radix_pack(values: Sequence[int], radices: Sequence[int]) -> int:
    if len(values) != len(radices):
        raise ValueError("values and radices differ in length")
    x = 0
    for v, m in zip(reversed(values), reversed(radices)):
        if not 0 <= v < m:
            raise RangeError(f"digit {v} outside [0, {m})")
        x = x * m + v
    return x


def radix_unpack(x: int, radices: Sequence[int]) -> list[int]:
    if not 0 <= x < prod(radices):
        raise RangeError(f"{x} outside [0, {prod(radices)})")
    out = []
    for m in radices:
        x, v = divmod(x, m)
        out.append(v)
    return out

"""
Permutations of [n] = {1, ..., n} in one-line notation.

A permutation p is stored as the tuple (p(1), ..., p(n)). Composition applies
the right factor first: compose(p, q)(i) == p(q(i)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TYPE_CHECKING

from .errors import DimensionError, RangeError

if TYPE_CHECKING:
    from .graph import Graph


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of [{n}]: {self.images}")

    @classmethod
    def trusted(cls, images: tuple[int, ...]) -> Permutation:
        """Build without the bijectivity check; callers guarantee validity."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, images: Iterable[int]) -> Permutation:
        return cls(tuple(int(v) + 1 for v in images))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """
        >>> Permutation.parse("2 3 1")
        Permutation(images=(2, 3, 1))
        """
        return cls(tuple(int(tok) for tok in text.split()))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    def __str__(self) -> str:
        return " ".join(map(str, self.images))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    def zero_based(self) -> tuple[int, ...]:
        return tuple(v - 1 for v in self.images)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """
    The product p∘q, i.e. apply q first.

    >>> compose(Permutation((2, 3, 1)), Permutation((2, 1, 3)))
    Permutation(images=(3, 2, 1))
    """
    if p.n != q.n:
        raise DimensionError(f"cannot compose permutations of {p.n} and {q.n} points")
    pi = p.images
    return Permutation.trusted(tuple(pi[j - 1] for j in q.images))


def inverse(p: Permutation) -> Permutation:
    """
    >>> inverse(Permutation((2, 3, 1)))
    Permutation(images=(3, 1, 2))
    """
    inv = [0] * p.n
    for i, v in enumerate(p.images, 1):
        inv[v - 1] = i
    return Permutation.trusted(tuple(inv))


def lehmer_digits(images: Sequence[int]) -> list[int]:
    """Factorial-base digits: digit k counts later entries smaller than entry k."""
    n = len(images)
    return [sum(1 for j in range(k + 1, n) if images[j] < images[k]) for k in range(n)]


def lehmer_rank(p: Permutation) -> int:
    """
    Position of p in the lexicographic order of S_n, starting at 0.

    >>> lehmer_rank(Permutation((3, 2, 1)))
    5
    """
    n = p.n
    rank = 0
    for k, d in enumerate(lehmer_digits(p.images)):
        rank += d * math.factorial(n - 1 - k)
    return rank


def lehmer_unrank(n: int, r: int) -> Permutation:
    """
    Inverse of lehmer_rank.

    >>> lehmer_unrank(3, 5)
    Permutation(images=(3, 2, 1))
    """
    if n < 0:
        raise RangeError("n must be non-negative")
    if not 0 <= r < math.factorial(n):
        raise RangeError(f"rank {r} outside [0, {n}!)")
    remaining = list(range(1, n + 1))
    out = []
    for k in range(n - 1, -1, -1):
        d, r = divmod(r, math.factorial(k))
        out.append(remaining.pop(d))
    return Permutation(tuple(out))


def apply_to_graph(p: Permutation, g: Graph) -> Graph:
    """The copy p(G): (p(v), p(w)) is an edge iff (v, w) is, and p(v) inherits v's color."""
    from .graph import Graph

    if p.n != g.n:
        raise DimensionError(f"permutation on {p.n} points applied to graph on {g.n} vertices")
    img = p.zero_based()
    rows = [0] * g.n
    for v in range(g.n):
        row = g.rows[v]
        mask = 0
        while row:
            low = row & -row
            mask |= 1 << img[low.bit_length() - 1]
            row ^= low
        rows[img[v]] = mask
    colors = [0] * g.n
    for v in range(g.n):
        colors[img[v]] = g.colors[v]
    return Graph(g.n, tuple(rows), tuple(colors))

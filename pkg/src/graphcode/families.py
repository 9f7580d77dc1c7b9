"""Named graph families used as fixtures by the tests, the CLI self-test and the docs."""
from __future__ import annotations

import itertools

from .graph import Graph


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def empty(n: int) -> Graph:
    return Graph(n, (0,) * n)


def disjoint_triangles() -> Graph:
    """Two disjoint triangles: same order and size as C6 but not isomorphic to it."""
    return Graph.from_edges(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)])


def petersen_labels() -> list[tuple[int, int]]:
    """Vertex i is the (i)-th 2-subset of {1..5} in lexicographic order: 12, 13, 14, ..., 45."""
    return list(itertools.combinations(range(1, 6), 2))


def petersen() -> Graph:
    """Kneser graph K(5, 2): 2-subsets of [5], adjacent when disjoint."""
    labels = petersen_labels()
    edges = [
        (a + 1, b + 1)
        for a, b in itertools.combinations(range(10), 2)
        if not set(labels[a]) & set(labels[b])
    ]
    return Graph.from_edges(10, edges)


def dumbbell(n: int) -> Graph:
    """Two n/2-cycles on {1..n/2} and {n/2+1..n} joined by the edge (1, n/2+1)."""
    if n < 6 or n % 4 != 2:
        raise ValueError("dumbbell needs n >= 6 with n = 2 (mod 4)")
    h = n // 2
    edges = [(i, i % h + 1) for i in range(1, h + 1)]
    edges += [(h + i, h + i % h + 1) for i in range(1, h + 1)]
    edges.append((1, h + 1))
    return Graph.from_edges(n, edges)


def _path_with_chords(n: int, chords) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + list(chords))


def asymmetric_fixtures() -> dict[str, Graph]:
    """
    Small rigid graphs (each verified rigid by exhaustive search in the test suite).

    pendant_triangle_6 and chorded_path_6 are two labelings of the same graph;
    the pairs 6/6b, 7/7b and 8a/8b are non-isomorphic.
    """
    return {
        "pendant_triangle_6": Graph.from_edges(6, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (4, 6)]),
        "chorded_path_6": _path_with_chords(6, [(2, 4)]),
        "chorded_path_6b": _path_with_chords(6, [(1, 3), (1, 5)]),
        "chorded_path_7": _path_with_chords(7, [(1, 3), (2, 5)]),
        "chorded_path_7b": _path_with_chords(7, [(1, 3), (2, 6)]),
        "chorded_path_8a": _path_with_chords(8, [(1, 3), (1, 5)]),
        "chorded_path_8b": _path_with_chords(8, [(1, 3), (1, 6)]),
    }

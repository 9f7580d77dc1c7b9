"""
Exhaustive reference computations over all of S_n.

These deliberately share no code with the pruned search in `group` or with
the codec; tests and the self-test use them as independent oracles. Cost is
n! graph permutations, so keep n <= 8 (n = 10 takes tens of seconds).
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .graph import Graph


def all_permutations(n: int) -> np.ndarray:
    """(n!, n) array of 0-based one-line images in lexicographic order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def _copy_keys(g: Graph, perms: np.ndarray) -> list[bytes]:
    """Byte key of (adjacency, colors) of p(G) for each 0-based permutation row p."""
    m = g.matrix()
    colors = np.asarray(g.colors, dtype=np.int64)
    inv = np.argsort(perms, axis=1)
    adj = m[inv[:, :, None], inv[:, None, :]].reshape(len(perms), -1)
    packed = np.packbits(adj, axis=1)
    cols = colors[inv]
    return [a.tobytes() + c.tobytes() for a, c in zip(packed, cols)]


def graph_key(g: Graph) -> bytes:
    ident = np.arange(g.n, dtype=np.int64)[None, :]
    return _copy_keys(g, ident)[0]


def copies(g: Graph, chunk: int = 200_000) -> dict[bytes, int]:
    """Every distinct copy p(G), keyed by graph_key, mapped to the lexicographically first p's row index."""
    out: dict[bytes, int] = {}
    it = itertools.permutations(range(g.n))
    base = 0
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        perms = np.array(block, dtype=np.int64).reshape(len(block), g.n)
        for k, key in enumerate(_copy_keys(g, perms)):
            out.setdefault(key, base + k)
        base += len(block)
    return out


def automorphism_count(g: Graph) -> int:
    """|Aut(g)| as the number of permutations fixing g (colors respected)."""
    perms = all_permutations(g.n)
    target = graph_key(g)
    return sum(1 for key in _copy_keys(g, perms) if key == target)


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """1-based image tuples of every automorphism, lexicographic order."""
    perms = all_permutations(g.n)
    target = graph_key(g)
    return [tuple(int(v) + 1 for v in perms[k]) for k, key in enumerate(_copy_keys(g, perms)) if key == target]


def isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n:
        return False
    return graph_key(h) in copies(g)


def copy_count(g: Graph) -> int:
    n_copies = len(copies(g))
    assert n_copies * automorphism_count(g) == math.factorial(g.n)
    return n_copies

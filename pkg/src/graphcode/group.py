"""
Automorphism groups, pointwise stabilizer chains, orbits and coset representatives.

Groups are small enough here (n <= 10 by default) to be held as explicit
element lists. Automorphisms and isomorphisms are found by a pruned
backtracking search that respects vertex colors.
"""
from __future__ import annotations

import functools
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapabilityError
from .graph import Graph
from .perm import Permutation, compose, inverse

DEFAULT_BRUTE_FORCE_LIMIT = 10
LIMIT_ENV_VAR = "GRAPHCODE_BRUTE_LIMIT"

OrbitPartition = tuple[tuple[int, ...], ...]


def brute_force_limit() -> int:
    raw = os.environ.get(LIMIT_ENV_VAR)
    return int(raw) if raw else DEFAULT_BRUTE_FORCE_LIMIT


def check_limit(n: int, limit: int | None = None) -> None:
    limit = brute_force_limit() if limit is None else limit
    if n > limit:
        raise CapabilityError(
            f"graph has {n} vertices but the brute-force limit is {limit}; "
            f"use a smaller graph (n <= {limit}) or raise {LIMIT_ENV_VAR}"
        )


@dataclass(frozen=True)
class GroupElements:
    n: int
    elements: tuple[Permutation, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in self._element_set()

    def _element_set(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.elements)
            object.__setattr__(self, "_set", cached)
        return cached

    def is_group(self) -> bool:
        """Contains the identity and is closed under composition and inversion."""
        elems = self._element_set()
        if Permutation.identity(self.n) not in elems:
            return False
        return all(inverse(a) in elems for a in self.elements) and all(
            compose(a, b) in elems for a in self.elements for b in self.elements
        )


@dataclass(frozen=True)
class ChainLevel:
    index: int
    group: GroupElements
    orbits: OrbitPartition

    @property
    def order(self) -> int:
        return self.group.order


@dataclass(frozen=True)
class StabilizerChain:
    """levels[i] is A_i, the automorphisms fixing 1..i pointwise (levels[0] is the whole group)."""

    n: int
    levels: tuple[ChainLevel, ...]

    def __getitem__(self, i: int) -> ChainLevel:
        return self.levels[i]

    def __len__(self) -> int:
        return len(self.levels)

    def transversal(self, i: int) -> dict[int, Permutation]:
        """For each point u in the A_{i-1}-orbit of i, one element of A_{i-1} sending i to u."""
        reps: dict[int, Permutation] = {}
        for a in self.levels[i - 1].group:
            reps.setdefault(a(i), a)
        return reps


# -- backtracking search ------------------------------------------------------


@functools.lru_cache(maxsize=1024)
def _search_order(g: Graph) -> tuple[int, ...]:
    """0-based vertex order: rarest (color, degree) class first, then most-connected to the prefix."""
    n = g.n
    if n == 0:
        return ()
    deg = [bin(r).count("1") for r in g.rows]
    classes = Counter((g.colors[v], deg[v]) for v in range(n))
    remaining = set(range(n))
    order: list[int] = []
    placed = 0
    while remaining:
        v = min(
            remaining,
            key=lambda u: (-bin(g.rows[u] & placed).count("1"), classes[(g.colors[u], deg[u])], u),
        )
        order.append(v)
        placed |= 1 << v
        remaining.remove(v)
    return tuple(order)


@functools.lru_cache(maxsize=1024)
def _search_plan(g: Graph) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Search order plus, for each position, the neighbours placed before it."""
    order = _search_order(g)
    prior = tuple(tuple(w for w in order[:k] if g.rows[order[k]] >> w & 1) for k in range(g.n))
    return order, prior


def _invariant(g: Graph) -> Counter:
    return Counter((g.colors[v], bin(g.rows[v]).count("1")) for v in range(g.n))


def iter_isomorphisms(g: Graph, h: Graph) -> Iterator[Permutation]:
    """Yield every color-preserving isomorphism p with apply_to_graph(p, g) == h."""
    n = g.n
    if h.n != n or _invariant(g) != _invariant(h):
        return
    if n == 0:
        yield Permutation(())
        return
    order, prior_nbrs = _search_plan(g)
    g_rows, h_rows = g.rows, h.rows
    h_class: dict[tuple[int, int], int] = {}
    for u in range(n):
        key = (h.colors[u], bin(h_rows[u]).count("1"))
        h_class[key] = h_class.get(key, 0) | (1 << u)
    v_class = [h_class[(g.colors[v], bin(g_rows[v]).count("1"))] for v in order]

    img = [0] * n

    def extend(k: int, used: int) -> Iterator[Permutation]:
        if k == n:
            yield Permutation.trusted(tuple(img[v] + 1 for v in range(n)))
            return
        v = order[k]
        required = 0
        for w in prior_nbrs[k]:
            required |= 1 << img[w]
        cands = v_class[k] & ~used
        if prior_nbrs[k]:
            cands &= h_rows[img[prior_nbrs[k][0]]]
        while cands:
            low = cands & -cands
            u = low.bit_length() - 1
            cands ^= low
            if h_rows[u] & used != required:
                continue
            img[v] = u
            yield from extend(k + 1, used | low)

    yield from extend(0, 0)


def find_isomorphism(g: Graph, h: Graph) -> Permutation | None:
    """Some p with apply_to_graph(p, g) == h, or None when g and h are not isomorphic."""
    return next(iter_isomorphisms(g, h), None)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


# -- groups ---------------------------------------------------------------------


def automorphism_group(g: Graph, limit: int | None = None) -> GroupElements:
    """All color-preserving automorphisms of g, sorted lexicographically by image list."""
    check_limit(g.n, limit)
    return GroupElements(g.n, tuple(sorted(iter_isomorphisms(g, g))))


def is_rigid(g: Graph, limit: int | None = None) -> bool:
    check_limit(g.n, limit)
    it = iter_isomorphisms(g, g)
    next(it)
    return next(it, None) is None


def orbits(group: Iterable[Permutation], domain: Iterable[int]) -> OrbitPartition:
    """
    Orbits of `group` on `domain` (a union of orbits), blocks ordered by
    minimum element and sorted internally.
    """
    elems = list(group)
    seen: set[int] = set()
    blocks = []
    for x in sorted(domain):
        if x in seen:
            continue
        block = sorted({a(x) for a in elems} | {x})
        seen.update(block)
        blocks.append(tuple(block))
    return tuple(blocks)


def stabilizer_chain(aut: GroupElements, n: int | None = None) -> StabilizerChain:
    n = aut.n if n is None else n
    current = list(aut.elements)
    levels = [ChainLevel(0, aut, orbits(current, range(1, n + 1)))]
    for i in range(1, n + 1):
        current = [a for a in current if a(i) == i]
        group = GroupElements(n, tuple(current))
        levels.append(ChainLevel(i, group, orbits(current, range(1, n + 1))))
    return StabilizerChain(n, tuple(levels))


def canonical_coset_rep(aut: GroupElements, p: Permutation) -> Permutation:
    """Lexicographically least element of the left coset {p∘a : a in aut}."""
    return min(compose(p, a) for a in aut)


def _closure(gens: Sequence[Permutation], n: int) -> set[Permutation]:
    ident = Permutation.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose(s, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(aut: GroupElements) -> list[Permutation]:
    """
    An irredundant generating set: built greedily from the stabilizer chain
    transversals, then pruned of any generator the others already produce.
    """
    chain = stabilizer_chain(aut)
    gens: list[Permutation] = []
    span = {Permutation.identity(aut.n)}
    for i in range(aut.n, 0, -1):
        for rep in chain.transversal(i).values():
            if rep not in span:
                gens.append(rep)
                span = _closure(gens, aut.n)
    for s in list(gens):
        rest = [x for x in gens if x != s]
        if len(_closure(rest, aut.n)) == aut.order:
            gens = rest
    return gens

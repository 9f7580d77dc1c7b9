"""
Simple undirected graphs on [n] with optional vertex colors.

Adjacency is held as one integer bitmask per row (bit v-1 set means an edge
to vertex v). Color 0 means "uncolored"; a graph whose colors are all zero
behaves as a plain graph everywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ParseError, RangeError


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]
    colors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        if not self.colors:
            object.__setattr__(self, "colors", (0,) * self.n)
        elif len(self.colors) != self.n:
            raise ValueError(f"expected {self.n} colors, got {len(self.colors)}")
        if any(c < 0 for c in self.colors):
            raise ValueError("colors must be non-negative")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {v + 1} references a vertex outside [{self.n}]")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v + 1}")
            r = row
            while r:
                low = r & -r
                w = low.bit_length() - 1
                if not self.rows[w] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v + 1}, {w + 1})")
                r ^= low

    @classmethod
    def trusted(cls, n: int, rows: tuple[int, ...], colors: tuple[int, ...]) -> Graph:
        """Skip validation; the caller guarantees a symmetric loop-free adjacency."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", rows)
        object.__setattr__(g, "colors", colors)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], colors=None) -> Graph:
        rows = [0] * n
        for v, w in edges:
            if not (1 <= v <= n and 1 <= w <= n):
                raise RangeError(f"edge ({v}, {w}) outside [{n}]")
            rows[v - 1] |= 1 << (w - 1)
            rows[w - 1] |= 1 << (v - 1)
        return cls(n, tuple(rows), tuple(colors) if colors is not None else ())

    @classmethod
    def from_matrix(cls, matrix, colors=None) -> Graph:
        m = np.asarray(matrix, dtype=bool)
        n = m.shape[0]
        rows = tuple(int(sum(1 << w for w in np.flatnonzero(m[v]))) for v in range(n))
        return cls(n, rows, tuple(colors) if colors is not None else ())

    @property
    def is_colored(self) -> bool:
        return any(self.colors)

    def has_edge(self, v: int, w: int) -> bool:
        return bool(self.rows[v - 1] >> (w - 1) & 1)

    def neighbors(self, v: int) -> list[int]:
        row = self.rows[v - 1]
        return [w + 1 for w in range(self.n) if row >> w & 1]

    def degree(self, v: int) -> int:
        return bin(self.rows[v - 1]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(1, self.n + 1) for w in self.neighbors(v) if v < w]

    def num_edges(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def color(self, v: int) -> int:
        return self.colors[v - 1]

    def matrix(self) -> np.ndarray:
        """n x n boolean adjacency matrix (0-based indices)."""
        m = np.zeros((self.n, self.n), dtype=bool)
        for v, row in enumerate(self.rows):
            for w in range(self.n):
                if row >> w & 1:
                    m[v, w] = True
        return m

    def uncolored(self) -> Graph:
        return Graph(self.n, self.rows)

    def with_colors(self, colors) -> Graph:
        return Graph(self.n, self.rows, tuple(colors))

    def __str__(self) -> str:
        return serialize_graph(self)


def adjacency_bits(g: Graph) -> str:
    """
    Row-major bits of the full n x n adjacency matrix.

    >>> adjacency_bits(Graph.from_edges(2, [(1, 2)]))
    '0110'
    """
    return "".join("1" if row >> w & 1 else "0" for row in g.rows for w in range(g.n))


def color_width(*graphs: Graph) -> int:
    """Bits per vertex needed to write every color of every graph given (0 if none colored)."""
    return max((c.bit_length() for g in graphs for c in g.colors), default=0)


def segment_bits(g: Graph, width: int = 0) -> np.ndarray:
    """
    The string a copy of g contributes to a sample: n^2 adjacency bits, then
    each vertex color as a big-endian `width`-bit field.
    """
    n = g.n
    out = np.empty(n * n + n * width, dtype=np.uint8)
    out[: n * n] = g.matrix().reshape(-1)
    if width:
        cols = np.asarray(g.colors, dtype=np.int64)
        shifts = np.arange(width - 1, -1, -1)
        out[n * n :] = ((cols[:, None] >> shifts[None, :]) & 1).reshape(-1)
    return out


def parse_graph(text: str) -> Graph:
    """
    Parse the text format: a vertex count, n rows of 0/1, and an optional
    ``colors: c1 ... cn`` line.

    >>> parse_graph("2\\n01\\n10").edges()
    [(1, 2)]
    """
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty graph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"malformed header {lines[0]!r}: expected vertex count") from None
    if n < 0:
        raise ParseError("negative vertex count")
    body = lines[1:]
    colors = None
    if body and body[-1].startswith("colors:"):
        try:
            colors = tuple(int(tok) for tok in body[-1][len("colors:"):].split())
        except ValueError:
            raise ParseError(f"malformed colors line {body[-1]!r}") from None
        if len(colors) != n or any(c < 0 for c in colors):
            raise ParseError(f"colors line must hold {n} non-negative integers")
        body = body[:-1]
    if len(body) != n:
        raise ParseError(f"expected {n} matrix rows, got {len(body)}")
    rows = []
    for v, line in enumerate(body):
        if len(line) != n or set(line) - {"0", "1"}:
            raise ParseError(f"row {v + 1} must be {n} characters of 0/1: {line!r}")
        rows.append(sum(1 << w for w, ch in enumerate(line) if ch == "1"))
    try:
        return Graph(n, tuple(rows), colors or ())
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_graph(g: Graph) -> str:
    lines = [str(g.n)]
    bits = adjacency_bits(g)
    lines += [bits[v * g.n : (v + 1) * g.n] for v in range(g.n)]
    if g.is_colored:
        lines.append("colors: " + " ".join(map(str, g.colors)))
    return "\n".join(lines) + "\n"


def individualize(g: Graph, fixed_prefix: int, distinguished: int) -> Graph:
    """
    Label vertices 1..fixed_prefix with colors 1..fixed_prefix, give
    `distinguished` the unique color fixed_prefix + 1 and leave the rest at 0.

    Any color-preserving automorphism of the result fixes the prefix and the
    distinguished vertex.
    """
    if g.is_colored:
        raise ValueError("individualize expects an uncolored graph")
    if not 0 <= fixed_prefix < g.n:
        raise RangeError(f"fixed prefix {fixed_prefix} outside [0, {g.n})")
    if not fixed_prefix < distinguished <= g.n:
        raise RangeError(f"vertex {distinguished} must lie in ({fixed_prefix}, {g.n}]")
    colors = [0] * g.n
    for v in range(fixed_prefix):
        colors[v] = v + 1
    colors[distinguished - 1] = fixed_prefix + 1
    return g.with_colors(colors)


def random_graph(n: int, edge_prob: float, rng) -> Graph:
    """Erdos-Renyi G(n, p). `rng` is a numpy Generator or anything default_rng accepts."""
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = np.random.default_rng(rng)
    iu = np.triu_indices(n, 1)
    draws = rng.random(len(iu[0])) < edge_prob
    m = np.zeros((n, n), dtype=bool)
    m[iu] = draws
    return Graph.from_matrix(m | m.T)

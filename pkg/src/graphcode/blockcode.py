"""
Blocked descriptions of a concatenation of graph copies, with random access.

A target string x is the concatenation of t segments, one per copy. A segment
is the n*n adjacency matrix of the copy in row-major order, followed by each
vertex color as a `color_width`-bit field (no color bits for plain graphs).
x' pads x to a power-of-two length with the complement of x's last bit.

A description stores the base graph(s) once and then the t per-copy integers
(Lehmer ranks or coset codes) packed b at a time into blocks, so each copy
costs log2(m) + 1/b bits instead of ceil(log2 m). Binary layout, MSB first:

    header   64 bits   mode:4  color_width:4  n:8  b:16  t:32
    graphs   n*n + n*color_width bits each (1 graph, or 2 for mode "mixed")
    w        t bits, mode "mixed" only (which graph each copy comes from)
    blocks   ceil(t/b) blocks; block k holds copies k*b .. k*b+r-1 packed with
             radix_pack, width (prod of their radices - 1).bit_length()

Mode "raw" stores x literally after the header.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codec import build_aux, code_range, decode
from .errors import DimensionError, ParseError, RangeError
from .graph import Graph, color_width as graphs_color_width, segment_bits
from .perm import lehmer_unrank, apply_to_graph
from .ranks import radix_pack, radix_unpack

HEADER_BITS = 64
MODES = {"raw": 0, "rank": 1, "coset": 2, "mixed": 3}
MODE_NAMES = {v: k for k, v in MODES.items()}


def next_power_of_two(k: int) -> int:
    return 0 if k == 0 else 1 << (k - 1).bit_length()


@dataclass(frozen=True)
class TargetString:
    x: np.ndarray  # uint8 bits
    segment_length: int

    @property
    def t(self) -> int:
        return len(self.x) // self.segment_length if self.segment_length else 0

    @property
    def x_prime(self) -> np.ndarray:
        size = next_power_of_two(len(self.x))
        if size == len(self.x):
            return self.x
        pad = np.full(size - len(self.x), 1 - self.x[-1], dtype=np.uint8)
        return np.concatenate([self.x, pad])

    def segments(self) -> np.ndarray:
        return self.x.reshape(-1, self.segment_length)

    def bitstring(self, prime: bool = False) -> str:
        return "".join(map(str, (self.x_prime if prime else self.x).tolist()))


def segment_length(n: int, cw: int) -> int:
    return n * n + n * cw


def graph_from_segment(bits, n: int, cw: int) -> Graph:
    bits = np.asarray(bits, dtype=np.uint8)
    m = bits[: n * n].reshape(n, n).astype(bool)
    colors = None
    if cw:
        fields = bits[n * n :].reshape(n, cw)
        colors = [int("".join(map(str, row)), 2) for row in fields.tolist()]
    return Graph.from_matrix(m, colors)


def build_target(copies: Sequence[Graph], cw: int | None = None) -> TargetString:
    """Directly concatenate the segments of the given copies."""
    if not copies:
        return TargetString(np.zeros(0, dtype=np.uint8), 0)
    cw = graphs_color_width(*copies) if cw is None else cw
    n = copies[0].n
    return TargetString(np.concatenate([segment_bits(g, cw) for g in copies]), segment_length(n, cw))


# -- length arithmetic shared with the oracle --------------------------------------


@functools.lru_cache(maxsize=4096)
def _width(radix_product: int) -> int:
    return (radix_product - 1).bit_length()


def graph_bits(n: int, cw: int) -> int:
    return n * n + n * cw


def raw_length(n: int, cw: int, t: int) -> int:
    return HEADER_BITS + t * segment_length(n, cw)


def single_length(n: int, cw: int, t: int, b: int, m: int) -> int:
    full, rest = divmod(t, b)
    blocks = full * _width(m**b) + (_width(m**rest) if rest else 0)
    return HEADER_BITS + graph_bits(n, cw) + blocks


def mixed_length(n: int, cw: int, t: int, b: int, w: Sequence[int], m0: int, m1: int) -> int:
    w = np.asarray(w, dtype=np.int64)
    total = HEADER_BITS + 2 * graph_bits(n, cw) + t
    if t:
        starts = np.arange(0, t, b)
        ones = np.add.reduceat(w, starts)
        sizes = np.minimum(b, t - starts)
        pairs, counts = np.unique(np.stack([sizes, ones]), axis=1, return_counts=True)
        for (r, k), c in zip(pairs.T.tolist(), counts.tolist()):
            total += c * _width(m0 ** (r - k) * m1**k)
    return total


# -- descriptions ------------------------------------------------------------------


@dataclass(frozen=True)
class BlockedDescription:
    mode: str
    n: int
    color_width: int
    b: int
    t: int
    graphs: tuple[Graph, ...] = ()
    w: tuple[int, ...] | None = None
    blocks: tuple[int, ...] = ()
    literal: str | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        # header field widths
        for name, value, bits in (("n", self.n, 8), ("color_width", self.color_width, 4), ("b", self.b, 16), ("t", self.t, 32)):
            if not 0 <= value < 1 << bits:
                raise ValueError(f"{name} = {value} does not fit the {bits}-bit header field")
        if self.b < 1:
            raise ValueError("block size must be at least 1")

    @property
    def t_prime(self) -> int:
        return math.ceil(self.t / self.b) if self.b else 0

    @property
    def segment_length(self) -> int:
        return segment_length(self.n, self.color_width)

    @property
    def x_length(self) -> int:
        return self.t * self.segment_length

    @property
    def x_prime_length(self) -> int:
        return next_power_of_two(self.x_length)

    def ranges(self) -> tuple[int, ...]:
        """Per-graph element radix: n! in rank mode, the coset-code range otherwise."""
        if "ranges" not in self._cache:
            if self.mode == "rank":
                r = (math.factorial(self.n),)
            else:
                r = tuple(code_range(g) for g in self.graphs)
            self._cache["ranges"] = r
        return self._cache["ranges"]

    def element_radices(self, k: int) -> list[int]:
        lo, hi = k * self.b, min((k + 1) * self.b, self.t)
        ranges = self.ranges()
        if self.mode == "mixed":
            return [ranges[self.w[j]] for j in range(lo, hi)]
        return [ranges[0]] * (hi - lo)

    def block_widths(self) -> list[int]:
        if "widths" not in self._cache:
            self._cache["widths"] = [_width(math.prod(self.element_radices(k))) for k in range(self.t_prime)]
        return self._cache["widths"]

    @property
    def total_bits(self) -> int:
        if self.mode == "raw":
            return HEADER_BITS + len(self.literal)
        extra = self.t if self.mode == "mixed" else 0
        return HEADER_BITS + len(self.graphs) * graph_bits(self.n, self.color_width) + extra + sum(self.block_widths())

    def element(self, j: int) -> int:
        k, pos = divmod(j, self.b)
        return radix_unpack(self.blocks[k], self.element_radices(k))[pos]

    def elements(self) -> list[int]:
        return [self.element(j) for j in range(self.t)]

    def to_bits(self) -> str:
        out = [
            format(MODES[self.mode], "04b"),
            format(self.color_width, "04b"),
            format(self.n, "08b"),
            format(self.b, "016b"),
            format(self.t, "032b"),
        ]
        if self.mode == "raw":
            out.append(self.literal)
            return "".join(out)
        for g in self.graphs:
            out.append("".join(map(str, segment_bits(g, self.color_width).tolist())))
        if self.mode == "mixed":
            out.append("".join(map(str, self.w)))
        for value, width in zip(self.blocks, self.block_widths()):
            if width:
                out.append(format(value, f"0{width}b"))
        return "".join(out)

    def to_bytes(self) -> bytes:
        bits = self.to_bits()
        bits += "0" * (-len(bits) % 8)
        return int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""

    @classmethod
    def from_bits(cls, bits: str) -> BlockedDescription:
        try:
            return cls._from_bits(bits)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"malformed description: {exc}") from None

    @classmethod
    def _from_bits(cls, bits: str) -> BlockedDescription:
        pos = 0

        def take(k: int) -> str:
            nonlocal pos
            if pos + k > len(bits):
                raise ParseError("truncated description")
            chunk = bits[pos : pos + k]
            pos += k
            return chunk

        code = int(take(4), 2)
        if code not in MODE_NAMES:
            raise ParseError(f"unknown description mode {code}")
        mode = MODE_NAMES[code]
        cw = int(take(4), 2)
        n = int(take(8), 2)
        b = int(take(16), 2)
        t = int(take(32), 2)
        if mode == "raw":
            return cls(mode, n, cw, b, t, literal=take(t * segment_length(n, cw)))
        count = 2 if mode == "mixed" else 1
        graphs = tuple(graph_from_segment([int(c) for c in take(graph_bits(n, cw))], n, cw) for _ in range(count))
        w = tuple(int(c) for c in take(t)) if mode == "mixed" else None
        shell = cls(mode, n, cw, b, t, graphs, w)
        blocks = tuple(int(take(width), 2) if width else 0 for width in shell.block_widths())
        return cls(mode, n, cw, b, t, graphs, w, blocks)

    @classmethod
    def from_bytes(cls, data: bytes) -> BlockedDescription:
        bits = format(int.from_bytes(data, "big"), f"0{8 * len(data)}b") if data else ""
        return cls.from_bits(bits)


def description_bits(d: BlockedDescription) -> int:
    return d.total_bits


def _pack_blocks(codes: Sequence[int], radices: Sequence[int], b: int) -> tuple[int, ...]:
    return tuple(radix_pack(list(codes[k : k + b]), list(radices[k : k + b])) for k in range(0, len(codes), b))


def _check_codes(codes, radices) -> None:
    for j, (c, m) in enumerate(zip(codes, radices)):
        if not 0 <= c < m:
            raise RangeError(f"code {c} at position {j} outside [0, {m})")


def describe_single(
    g0: Graph,
    codes: Sequence[int],
    m: int,
    b: int,
    kind: str = "coset",
    color_width: int | None = None,
) -> BlockedDescription:
    """
    Describe t copies of g0 by their codes in [0, m): coset codes (m must be
    code_range(g0)) or, with kind="rank", Lehmer ranks (m must be n!).
    """
    if b < 1:
        raise ValueError("block size must be at least 1")
    if kind not in ("coset", "rank"):
        raise ValueError(f"unknown kind {kind!r}")
    expected = math.factorial(g0.n) if kind == "rank" else code_range(g0)
    if m != expected:
        raise ValueError(f"{kind} codes for this graph live in [0, {expected}), not [0, {m})")
    codes = [int(c) for c in codes]
    _check_codes(codes, [m] * len(codes))
    cw = graphs_color_width(g0) if color_width is None else color_width
    return BlockedDescription(kind, g0.n, cw, b, len(codes), (g0,), None, _pack_blocks(codes, [m] * len(codes), b))


def describe_mixed(
    g0: Graph,
    g1: Graph,
    w: Sequence[int],
    codes: Sequence[int],
    m0: int,
    m1: int,
    b: int,
    color_width: int | None = None,
) -> BlockedDescription:
    """Describe a sequence of copies drawn from two graphs; w[j] says which graph copy j comes from."""
    if g0.n != g1.n:
        raise DimensionError("both graphs must have the same number of vertices")
    if b < 1:
        raise ValueError("block size must be at least 1")
    if len(w) != len(codes):
        raise ValueError("w and codes differ in length")
    if (m0, m1) != (code_range(g0), code_range(g1)):
        raise ValueError("m0, m1 must be the coset-code ranges of g0, g1")
    w = tuple(int(bit) for bit in w)
    codes = [int(c) for c in codes]
    radices = [(m0, m1)[bit] for bit in w]
    _check_codes(codes, radices)
    cw = graphs_color_width(g0, g1) if color_width is None else color_width
    return BlockedDescription("mixed", g0.n, cw, b, len(codes), (g0, g1), w, _pack_blocks(codes, radices, b))


def describe_raw(target: TargetString, n: int, color_width: int = 0) -> BlockedDescription:
    t = target.t
    return BlockedDescription("raw", n, color_width, 1, t, literal=target.bitstring())


# -- random access -------------------------------------------------------------------


@functools.lru_cache(maxsize=8192)
def _element_graph(kind: str, g: Graph, value: int) -> Graph:
    if kind == "rank":
        return apply_to_graph(lehmer_unrank(g.n, value), g)
    return decode(build_aux(g), value)


def _segment_bit(h: Graph, cw: int, off: int) -> int:
    n = h.n
    if off < n * n:
        a, c = divmod(off, n)
        return h.rows[a] >> c & 1
    v, k = divmod(off - n * n, cw)
    return h.colors[v] >> (cw - 1 - k) & 1


def reconstruct_bit(d: BlockedDescription, i: int, log: set | None = None) -> int | None:
    """
    Bit i (0-based) of x', or None past the end of x'.

    Reads the header, at most one block and one base graph (plus the indicator
    string w in mode "mixed"); `log`, when given, collects the names of the
    sections read.
    """
    touch = log.add if log is not None else (lambda _name: None)
    touch("header")
    size = d.x_length
    if i < 0 or i >= next_power_of_two(size):
        return None
    if i >= size:
        return 1 - _x_bit(d, size - 1, touch)
    return _x_bit(d, i, touch)


def _x_bit(d: BlockedDescription, i: int, touch) -> int:
    if d.mode == "raw":
        touch("literal")
        return int(d.literal[i])
    j, off = divmod(i, d.segment_length)
    k = j // d.b
    which = 0
    if d.mode == "mixed":
        touch("w")
        which = d.w[j]
    touch(f"block:{k}")
    touch(f"graph:{which}")
    value = d.element(j)
    h = _element_graph("rank" if d.mode == "rank" else "coset", d.graphs[which], value)
    return _segment_bit(h, d.color_width, off)


def reconstruct(d: BlockedDescription) -> np.ndarray:
    """All of x', bit by bit through reconstruct_bit."""
    return np.array([reconstruct_bit(d, i) for i in range(d.x_prime_length)], dtype=np.uint8)

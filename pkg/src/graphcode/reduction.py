"""
Randomized isomorphism tests driven by a description-length oracle.

Given G0 and G1 on n vertices, a sample draws t fair bits w and t uniform
permutations and concatenates the copies pi_j(G_{w_j}). If G0 and G1 are not
isomorphic the string carries about t(1 + log2(n!/|Aut|)) bits of information;
if they are isomorphic it can be described by one base graph plus t coset
codes. The oracle reports the shortest description it can build for the
string, so thresholds on its value separate the two cases.

The oracle only sees the sample's bit string and the two base graphs.
"""
from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from .blockcode import (
    HEADER_BITS,
    TargetString,
    graph_bits,
    mixed_length,
    raw_length,
    segment_length,
    single_length,
)
from .codec import code_range
from .errors import DimensionError
from .graph import Graph, color_width, individualize
from .group import are_isomorphic, automorphism_group
from .perm import Permutation

TABLE_LIMIT = 8  # copy tables are built by enumerating S_n up to this n


# -- parameters ------------------------------------------------------------------------


def desk_t(n: int) -> int:
    return max(256, 8 * n * n * math.ceil(math.log2(n))) if n > 1 else 256


def asymptotic_t(n: int) -> int:
    return 3 * n**5


def default_slack(n: int) -> float:
    return 4 * n * math.log2(n) if n > 1 else 0.0


@dataclass(frozen=True)
class ReductionParams:
    t: int | None = None  # None: take the preset's value for the input size
    b: int = 3
    theta_slack: float | None = None  # None: 4 n log2 n
    trials: int = 3
    seed: int = 0
    preset: str = "desk"

    def __post_init__(self):
        if self.t is not None and self.t < 1:
            raise ValueError("t must be at least 1")
        if self.b < 1:
            raise ValueError("b must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.preset not in ("desk", "asymptotic"):
            raise ValueError(f"unknown preset {self.preset!r}")

    def t_for(self, n: int) -> int:
        if self.t is not None:
            return self.t
        return asymptotic_t(n) if self.preset == "asymptotic" else desk_t(n)

    def slack_for(self, n: int) -> float:
        return default_slack(n) if self.theta_slack is None else self.theta_slack


@dataclass(frozen=True)
class GroupSizeHint:
    """Claimed automorphism group orders of the two inputs."""

    a0: int
    a1: int
    verify: bool = True

    def check(self, g0: Graph, g1: Graph) -> None:
        if not self.verify:
            return
        for claimed, g in ((self.a0, g0), (self.a1, g1)):
            actual = automorphism_group(g).order
            if claimed != actual:
                raise ValueError(f"claimed |Aut| = {claimed} but the graph has {actual} automorphisms")


def trial_rng(seed: int, *stream: int) -> np.random.Generator:
    """Private generator for one trial, derived from the seed and a stream key."""
    return np.random.default_rng([seed, *stream])


# -- sampling --------------------------------------------------------------------------


def uniform_ranks(rng: np.random.Generator, n: int, t: int) -> list[int]:
    bound = math.factorial(n)
    if bound <= 2**62:
        return [int(r) for r in rng.integers(0, bound, size=t)]
    nbytes = (bound.bit_length() + 7) // 8
    out = []
    while len(out) < t:
        r = int.from_bytes(rng.bytes(nbytes), "big") >> (8 * nbytes - bound.bit_length())
        if r < bound:
            out.append(r)
    return out


def unrank_many(n: int, ranks: Sequence[int]) -> np.ndarray:
    """Row j is the 0-based image list of lehmer_unrank(n, ranks[j])."""
    t = len(ranks)
    if n == 0:
        return np.zeros((t, 0), dtype=np.int64)
    if n > 20:
        from .perm import lehmer_unrank

        return np.array([lehmer_unrank(n, r).zero_based() for r in ranks], dtype=np.int64)
    rem = np.array(ranks, dtype=np.int64)
    avail = np.ones((t, n), dtype=bool)
    perms = np.empty((t, n), dtype=np.int64)
    rows = np.arange(t)
    for k in range(n):
        f = math.factorial(n - 1 - k)
        d, rem = np.divmod(rem, f)
        pick = np.argmax(np.cumsum(avail, axis=1) == (d + 1)[:, None], axis=1)
        perms[:, k] = pick
        avail[rows, pick] = False
    return perms


@dataclass(frozen=True)
class TrialSample:
    n: int
    color_width: int
    w: np.ndarray  # uint8, length t
    ranks: tuple[int, ...]  # Lehmer rank of each permutation
    perms: np.ndarray  # (t, n) 0-based images
    target: TargetString

    @property
    def t(self) -> int:
        return len(self.w)

    @property
    def permutations(self) -> list[Permutation]:
        return [Permutation.from_zero_based(row) for row in self.perms]


def build_segments(graphs: Sequence[Graph], w: np.ndarray, perms: np.ndarray, cw: int) -> np.ndarray:
    """(t, segment_length) bits of apply(perms[j], graphs[w[j]])."""
    n = graphs[0].n
    t = len(w)
    mats = np.stack([g.matrix() for g in graphs])
    inv = np.argsort(perms, axis=1)
    adj = mats[w[:, None, None], inv[:, :, None], inv[:, None, :]].reshape(t, n * n).astype(np.uint8)
    if not cw:
        return adj
    cols = np.stack([np.asarray(g.colors, dtype=np.int64) for g in graphs])[w[:, None], inv]
    shifts = np.arange(cw - 1, -1, -1)
    cbits = ((cols[:, :, None] >> shifts[None, None, :]) & 1).reshape(t, n * cw).astype(np.uint8)
    return np.concatenate([adj, cbits], axis=1)


def sample_x(g0: Graph, g1: Graph, t: int, rng, w=None) -> TrialSample:
    """
    Draw w uniformly from {0,1}^t (or use the forced `w`: a bit or a bit
    sequence) and t uniform permutations, and build x.
    """
    if g0.n != g1.n:
        raise DimensionError(f"graphs have {g0.n} and {g1.n} vertices")
    rng = np.random.default_rng(rng)
    n = g0.n
    if w is None:
        bits = rng.integers(0, 2, size=t).astype(np.uint8)
    elif np.ndim(w) == 0:
        bits = np.full(t, int(w), dtype=np.uint8)
    else:
        bits = np.asarray(w, dtype=np.uint8)
        if len(bits) != t:
            raise ValueError("forced w must have length t")
    ranks = uniform_ranks(rng, n, t)
    perms = unrank_many(n, ranks)
    cw = color_width(g0, g1)
    seg = build_segments((g0, g1), bits, perms, cw) if t else np.zeros((0, segment_length(n, cw)), np.uint8)
    target = TargetString(seg.reshape(-1), segment_length(n, cw))
    return TrialSample(n, cw, bits, tuple(ranks), perms, target)


# -- the oracle --------------------------------------------------------------------------


def segment_graphs(segments: np.ndarray, n: int, cw: int) -> list[Graph | None]:
    """Decode each segment row to a graph, or None if it is not a simple graph."""
    t = len(segments)
    adj = segments[:, : n * n].reshape(t, n, n).astype(bool)
    ok = (adj == adj.transpose(0, 2, 1)).all(axis=(1, 2)) & ~adj[:, np.arange(n), np.arange(n)].any(axis=1)
    if n <= 62:
        rows = (adj.astype(np.int64) << np.arange(n, dtype=np.int64)).sum(axis=2).tolist()
    else:
        rows = [[sum(1 << int(w) for w in np.flatnonzero(r)) for r in m] for m in adj]
    if cw:
        weights = 1 << np.arange(cw - 1, -1, -1, dtype=np.int64)
        colors = (segments[:, n * n :].reshape(t, n, cw).astype(np.int64) * weights).sum(axis=2).tolist()
    else:
        colors = [(0,) * n] * t
    return [Graph.trusted(n, tuple(r), tuple(c)) if good else None for r, c, good in zip(rows, colors, ok)]


class ComplexityOracle(Protocol):
    def __call__(self, sample: TrialSample, g0: Graph, g1: Graph) -> int: ...


@functools.lru_cache(maxsize=64)
def _copy_table(g: Graph, cw: int) -> frozenset:
    """Packed segment bytes of every copy of g (n <= TABLE_LIMIT)."""
    from .brute import all_permutations

    perms = all_permutations(g.n)
    w = np.zeros(len(perms), dtype=np.int64)
    seg = build_segments((g,), w, perms, cw)
    packed = np.packbits(seg, axis=1)
    return frozenset(row.tobytes() for row in packed)


@functools.lru_cache(maxsize=1024)
def _pair_isomorphic(g0: Graph, g1: Graph) -> bool:
    return are_isomorphic(g0, g1)


@dataclass
class MDLOracle:
    """
    Shortest description of a sample's string within a fixed family:

    * ``raw``: header plus the string verbatim;
    * ``single0`` / ``single1``: one base graph plus blocked coset codes, valid
      when every segment is a copy of that graph;
    * ``mixed``: both base graphs, the indicator string and blocked coset codes,
      valid when every segment is a copy of one of them.

    Lengths are exactly those of the descriptions `blockcode` serializes.
    """

    table_limit: int = TABLE_LIMIT
    _memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, sample: TrialSample, g0: Graph, g1: Graph) -> int:
        return min(v for v in self.candidates(sample, g0, g1).values() if v is not None)

    def _is_copy(self, segments: np.ndarray, g: Graph, cw: int) -> np.ndarray:
        if g.n <= self.table_limit:
            table = _copy_table(g, cw)
            packed = np.packbits(segments, axis=1)
            return np.fromiter((row.tobytes() in table for row in packed), dtype=bool, count=len(segments))
        out = np.zeros(len(segments), dtype=bool)
        for k, h in enumerate(segment_graphs(segments, g.n, cw)):
            if h is None:
                continue
            key = (g, h)
            hit = self._memo.get(key)
            if hit is None:
                hit = are_isomorphic(g, h)
                if len(self._memo) < 200_000:
                    self._memo[key] = hit
            out[k] = hit
        return out

    def classify(self, sample: TrialSample, g0: Graph, g1: Graph) -> np.ndarray:
        """Per segment: 0 if a copy of g0, 1 if a copy of g1 only, -1 if neither."""
        segments = sample.target.segments() if sample.t else np.zeros((0, 1), np.uint8)
        cw = sample.color_width
        labels = np.full(len(segments), -1, dtype=np.int64)
        if not len(segments):
            return labels
        in0 = self._is_copy(segments, g0, cw)
        labels[in0] = 0
        if not _pair_isomorphic(g0, g1):
            rest = ~in0
            if rest.any():
                in1 = self._is_copy(segments[rest], g1, cw)
                idx = np.flatnonzero(rest)
                labels[idx[in1]] = 1
        return labels

    def candidates(self, sample: TrialSample, g0: Graph, g1: Graph, b: int = 3) -> dict[str, int | None]:
        n, cw, t = sample.n, sample.color_width, sample.t
        if g0.n != n or g1.n != n:
            raise DimensionError("sample and graphs differ in vertex count")
        out: dict[str, int | None] = {"raw": raw_length(n, cw, t)}
        labels = self.classify(sample, g0, g1)
        iso = _pair_isomorphic(g0, g1)
        m0, m1 = code_range(g0), code_range(g1)
        all0 = bool((labels == 0).all())
        all1 = bool((labels == 1).all()) or (iso and all0)
        out["single0"] = single_length(n, cw, t, b, m0) if all0 else None
        out["single1"] = single_length(n, cw, t, b, m1) if all1 else None
        out["mixed"] = mixed_length(n, cw, t, b, labels, m0, m1) if (labels >= 0).all() else None
        return out


def make_oracle(b: int = 3, **kwargs) -> Callable[[TrialSample, Graph, Graph], int]:
    """An MDL oracle with blocks of b codes."""
    base = MDLOracle(**kwargs)

    def oracle(sample: TrialSample, g0: Graph, g1: Graph) -> int:
        return min(v for v in base.candidates(sample, g0, g1, b).values() if v is not None)

    oracle.candidates = lambda s, g0, g1: base.candidates(s, g0, g1, b)
    return oracle


_DEFAULT_ORACLE = MDLOracle()


def mdl_oracle(sample: TrialSample, g0: Graph, g1: Graph, b: int = 3) -> int:
    """Shortest description length of sample.target over raw, single and mixed encodings."""
    return min(v for v in _DEFAULT_ORACLE.candidates(sample, g0, g1, b).values() if v is not None)


# -- tests built on the oracle ---------------------------------------------------------------


def crossover_t(n: int, cw: int, b: int, slack: float) -> int | None:
    """
    Smallest t from which an isomorphic pair can never exceed the threshold:
    the single-graph description is at most H + B + t*s + t/b + 1 bits, and
    that is <= t(s+1) - slack once t(1 - 1/b) >= H + B + 1 + slack.
    """
    if b == 1:
        return None
    return math.ceil((HEADER_BITS + graph_bits(n, cw) + 1 + slack) / (1 - 1 / b))


@dataclass
class NonisoResult:
    decision: str  # "noniso" | "iso-or-unknown"
    value: int
    theta: float
    t: int
    b: int
    crossover: int | None
    seed: int
    stream: tuple

    @property
    def margin(self) -> float:
        return self.value - self.theta

    @property
    def one_sided_guaranteed(self) -> bool:
        return self.crossover is not None and self.t >= self.crossover

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stream"] = list(self.stream)
        d["margin"] = self.margin
        d["one_sided_guaranteed"] = self.one_sided_guaranteed
        return d


def _threshold_test(g0, g1, params, oracle, stream, info_per_copy: float) -> NonisoResult:
    n = g0.n
    t = params.t_for(n)
    slack = params.slack_for(n)
    sample = sample_x(g0, g1, t, trial_rng(params.seed, *stream))
    value = oracle(sample, g0, g1)
    theta = t * (info_per_copy + 1) - slack
    decision = "noniso" if value > theta else "iso-or-unknown"
    cw = sample.color_width
    return NonisoResult(decision, value, theta, t, params.b, crossover_t(n, cw, params.b, slack), params.seed, stream)


def rigid_noniso_test(g0: Graph, g1: Graph, params: ReductionParams, oracle, stream: tuple = (0,)) -> NonisoResult:
    """
    One-sided non-isomorphism test for rigid graphs: "noniso" iff the oracle's
    value on a mixed sample exceeds t(log2 n! + 1) - slack.
    """
    if g0.n != g1.n:
        raise DimensionError(f"graphs have {g0.n} and {g1.n} vertices")
    return _threshold_test(g0, g1, params, oracle, stream, math.log2(math.factorial(g0.n)))


def promise_noniso_test(
    g0: Graph, g1: Graph, hint: GroupSizeHint, params: ReductionParams, oracle, stream: tuple = (0,)
) -> NonisoResult:
    """
    Like rigid_noniso_test but for graphs with known automorphism group
    orders: the per-copy information is the smaller of log2(n!/a0), log2(n!/a1).
    """
    if g0.n != g1.n:
        raise DimensionError(f"graphs have {g0.n} and {g1.n} vertices")
    hint.check(g0, g1)
    fact = math.factorial(g0.n)
    s_min = min(math.log2(fact / hint.a0), math.log2(fact / hint.a1))
    return _threshold_test(g0, g1, params, oracle, stream, s_min)


@dataclass
class Profile:
    est_mix: int
    est_0: int
    est_1: int
    mix_values: list[int]
    values_0: list[int]
    values_1: list[int]
    t: int

    @property
    def difference(self) -> int:
        return self.est_mix - min(self.est_0, self.est_1)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["difference"] = self.difference
        return d


def estimate_profile(g0: Graph, g1: Graph, params: ReductionParams, oracle, stream: tuple = ()) -> Profile:
    """Max oracle value over `trials` draws of: a mixed sample, all copies of g0, all copies of g1."""
    if g0.n != g1.n:
        raise DimensionError(f"graphs have {g0.n} and {g1.n} vertices")
    t = params.t_for(g0.n)
    values: list[list[int]] = [[], [], []]
    for k in range(params.trials):
        for kind, forced in enumerate((None, 0, 1)):
            rng = trial_rng(params.seed, *stream, k, kind)
            values[kind].append(oracle(sample_x(g0, g1, t, rng, w=forced), g0, g1))
    return Profile(max(values[0]), max(values[1]), max(values[2]), *values, t=t)


@dataclass
class GIResult:
    decision: str  # "isomorphic" | "non-isomorphic"
    profile: Profile | None
    threshold: float | None

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "threshold": self.threshold,
            "profile": self.profile.to_dict() if self.profile else None,
        }


def gi_test(g0: Graph, g1: Graph, params: ReductionParams, oracle, stream: tuple = ()) -> GIResult:
    """Non-isomorphic iff est_mix - min(est_0, est_1) >= t/2."""
    if g0.n != g1.n:
        return GIResult("non-isomorphic", None, None)
    prof = estimate_profile(g0, g1, params, oracle, stream)
    threshold = prof.t / 2
    decision = "non-isomorphic" if prof.difference >= threshold else "isomorphic"
    return GIResult(decision, prof, threshold)


def _majority_noniso(g0, g1, params, oracle, stream) -> tuple[bool, list[NonisoResult]]:
    # stops as soon as either answer holds a strict majority of params.trials
    runs: list[NonisoResult] = []
    votes: Counter = Counter()
    for k in range(params.trials):
        r = rigid_noniso_test(g0, g1, params, oracle, (*stream, k))
        runs.append(r)
        votes[r.decision] += 1
        if 2 * max(votes.values()) > params.trials:
            break
    return votes["noniso"] * 2 > params.trials, runs


@dataclass
class GAResult:
    decision: str  # "has-nontrivial-automorphism" | "rigid"
    queries: list[dict]
    witness: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {"decision": self.decision, "witness": self.witness, "queries": self.queries}


def ga_test(g: Graph, params: ReductionParams, oracle, stream: tuple = ()) -> GAResult:
    """
    Ask, for i = n-1 down to 1 and j = i+1..n, whether fixing 1..i-1 and
    labeling i can be told apart from fixing 1..i-1 and labeling j. The first
    pair the non-isomorphism test cannot separate exhibits an automorphism.
    """
    n = g.n
    queries = []
    for i in range(n - 1, 0, -1):
        gi = individualize(g, i - 1, i)
        for j in range(i + 1, n + 1):
            gj = individualize(g, i - 1, j)
            separated, runs = _majority_noniso(gi, gj, params, oracle, (*stream, i, j))
            queries.append({"i": i, "j": j, "noniso": separated, "values": [r.value for r in runs], "theta": runs[0].theta})
            if not separated:
                return GAResult("has-nontrivial-automorphism", queries, (i, j))
    return GAResult("rigid", queries)


@dataclass
class RigidGIResult:
    decision: str  # "isomorphic" | "non-isomorphic" | "not-rigid"
    ga: tuple[GAResult, GAResult]
    runs: list[NonisoResult]

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "ga": [r.to_dict() for r in self.ga],
            "runs": [r.to_dict() for r in self.runs],
        }


def rigid_gi(g: Graph, h: Graph, params: ReductionParams, oracle, stream: tuple = ()) -> RigidGIResult:
    ga_g = ga_test(g, params, oracle, (*stream, 0))
    ga_h = ga_test(h, params, oracle, (*stream, 1))
    if ga_g.decision != "rigid" or ga_h.decision != "rigid":
        return RigidGIResult("not-rigid", (ga_g, ga_h), [])
    if g.n != h.n:
        return RigidGIResult("non-isomorphic", (ga_g, ga_h), [])
    separated, runs = _majority_noniso(g, h, params, oracle, (*stream, 2))
    return RigidGIResult("non-isomorphic" if separated else "isomorphic", (ga_g, ga_h), runs)

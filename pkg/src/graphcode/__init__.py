"""
Exact coset codes for isomorphic copies of small graphs, blocked descriptions
with random access, and isomorphism tests driven by a description-length oracle.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .codec import AuxData, CosetCode, StageTrace, build_aux, code_range, decode, encode, stage_trace
from .errors import (
    CapabilityError,
    DimensionError,
    GraphcodeError,
    NotIsomorphicError,
    ParseError,
    RangeError,
)
from .graph import Graph, individualize, parse_graph, serialize_graph
from .group import automorphism_group, are_isomorphic, stabilizer_chain
from .perm import Permutation, apply_to_graph, compose, inverse, lehmer_rank, lehmer_unrank

__all__ = [
    "AuxData",
    "CapabilityError",
    "CosetCode",
    "DimensionError",
    "Graph",
    "GraphcodeError",
    "NotIsomorphicError",
    "ParseError",
    "Permutation",
    "RangeError",
    "StageTrace",
    "apply_to_graph",
    "are_isomorphic",
    "automorphism_group",
    "build_aux",
    "code_range",
    "compose",
    "decode",
    "encode",
    "individualize",
    "inverse",
    "lehmer_rank",
    "lehmer_unrank",
    "parse_graph",
    "serialize_graph",
    "stabilizer_chain",
    "stage_trace",
]

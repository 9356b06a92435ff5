"""Cutwidth layouts, codewords and strong immersions of semi-complete digraphs."""

from semiwqo.codec import Codeword, Embedding, dominates, encode, encode_layout
from semiwqo.digraph import SemiCompleteDigraph, SimpleDigraph, parse_digraph, serialize_digraph
from semiwqo.immersion import (
    StrongImmersionModel,
    find_immersion_bruteforce,
    immerse_via_codewords,
    verify_strong_immersion,
    wqo_scan,
)
from semiwqo.ordering import VertexOrdering, build_layout, cutwidth_exact

__all__ = [
    "Codeword",
    "Embedding",
    "SemiCompleteDigraph",
    "SimpleDigraph",
    "StrongImmersionModel",
    "VertexOrdering",
    "build_layout",
    "cutwidth_exact",
    "dominates",
    "encode",
    "encode_layout",
    "find_immersion_bruteforce",
    "immerse_via_codewords",
    "parse_digraph",
    "serialize_digraph",
    "verify_strong_immersion",
    "wqo_scan",
]

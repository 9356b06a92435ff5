# digraph.py
#
# Simple and semi-complete digraphs on vertices 0..n-1, stored as a dense
# read-only boolean adjacency matrix. Also: the text format, symmetric-arc
# analysis, the tournament/surplus arc partition and instance generators.

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Union

import networkx as nx
import numpy as np

from semiwqo.errors import DigraphFormatError, NotSemiCompleteError

if TYPE_CHECKING:
    from semiwqo.ordering import VertexOrdering

logger = logging.getLogger(__name__)

Arc = tuple[int, int]


# ----------------------------------------------------------------------
# Digraph types
# ----------------------------------------------------------------------

class SimpleDigraph:
    """
    Digraph without loops or parallel arcs. Both (u, v) and (v, u) may be
    present; such a pair is called symmetric.
    """

    def __init__(self, n: int, arcs: Iterable[Arc] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u},{v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"loop ({u},{v}) is not allowed")
            adj[u, v] = True
        adj.flags.writeable = False
        self._adj = adj
        self._arcs: Optional[tuple[Arc, ...]] = None

    @classmethod
    def from_adjacency(cls, matrix) -> "SimpleDigraph":
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if matrix.diagonal().any():
            raise ValueError("adjacency matrix has a loop")
        rows, cols = np.nonzero(matrix)
        return cls(matrix.shape[0], zip(rows.tolist(), cols.tolist()))

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def arcs(self) -> tuple[Arc, ...]:
        """All arcs, sorted lexicographically by (tail, head)."""
        if self._arcs is None:
            rows, cols = np.nonzero(self._adj)
            self._arcs = tuple(zip(rows.tolist(), cols.tolist()))
        return self._arcs

    @property
    def m(self) -> int:
        return int(self._adj.sum())

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    def successors(self, v: int) -> list[int]:
        return np.flatnonzero(self._adj[v]).tolist()

    def predecessors(self, v: int) -> list[int]:
        return np.flatnonzero(self._adj[:, v]).tolist()

    def out_degree(self, v: int) -> int:
        return int(self._adj[v].sum())

    def in_degree(self, v: int) -> int:
        return int(self._adj[:, v].sum())

    # ------------------------------------------------------------------
    # Derived digraphs and views
    # ------------------------------------------------------------------

    def feedback_arcs(self, ordering: "VertexOrdering") -> list[Arc]:
        """Arcs whose tail comes after their head in `ordering`."""
        return [(u, v) for u, v in self.arcs if ordering.position(u) > ordering.position(v)]

    def is_feedback(self, arc: Arc, ordering: "VertexOrdering") -> bool:
        u, v = arc
        return ordering.position(u) > ordering.position(v)

    def induced_subdigraph(self, vertices: Iterable[int]) -> tuple["SimpleDigraph", dict[int, int]]:
        """Sub-digraph induced on `vertices`, relabelled 0..k-1 in the given order."""
        vertices = list(vertices)
        relabel = {v: i for i, v in enumerate(vertices)}
        sub = self._adj[np.ix_(vertices, vertices)]
        return SimpleDigraph.from_adjacency(sub), relabel

    def relabelled(self, perm) -> "SimpleDigraph":
        """Copy where vertex v becomes perm[v]."""
        perm = list(perm)
        return type(self)(self.n, ((perm[u], perm[v]) for u, v in self.arcs))

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.arcs)
        return g

    # ------------------------------------------------------------------
    # Value semantics
    # ------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimpleDigraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._adj, other._adj))

    def __hash__(self) -> int:
        return hash((self.n, self._adj.tobytes()))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(n={self.n}, m={self.m})"


class SemiCompleteDigraph(SimpleDigraph):
    """Simple digraph with at least one arc between every pair of distinct vertices."""

    def __init__(self, n: int, arcs: Iterable[Arc] = ()):
        super().__init__(n, arcs)
        report = validate_semi_complete(self)
        if not report.semi_complete:
            raise NotSemiCompleteError(report.witness)
        self._tournament = report.tournament

    @classmethod
    def from_digraph(cls, d: SimpleDigraph) -> "SemiCompleteDigraph":
        if isinstance(d, SemiCompleteDigraph):
            return d
        return cls(d.n, d.arcs)

    @property
    def is_tournament(self) -> bool:
        return self._tournament


@dataclass(frozen=True)
class SemiCompletenessReport:
    semi_complete: bool
    tournament: bool
    witness: Optional[Arc] = None


@dataclass(frozen=True)
class ArcPartition:
    """E(S) split into a tournament part e1 and surplus forward arcs e2."""

    e1: frozenset
    e2: frozenset
    ordering: "VertexOrdering"

    def tournament(self, n: int) -> SemiCompleteDigraph:
        return SemiCompleteDigraph(n, sorted(self.e1))


# ----------------------------------------------------------------------
# Text format
# ----------------------------------------------------------------------

def _parse_int_pair(fields: list[str], line_no: int, what: str) -> tuple[int, int]:
    if len(fields) != 2:
        raise DigraphFormatError(line_no, f"expected two integers for {what}, got {len(fields)} fields")
    try:
        a, b = int(fields[0]), int(fields[1])
    except ValueError:
        raise DigraphFormatError(line_no, f"non-integer value in {what}")
    if a < 0 or b < 0:
        raise DigraphFormatError(line_no, f"negative value in {what}")
    return a, b


def parse_digraph(text: Union[bytes, str]) -> SimpleDigraph:
    """
    Parse the "n m" header followed by m "u v" arc lines. Lines starting
    with '#' are comments. Loops, duplicates and out-of-range vertices are
    errors reported with their 1-based line number.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    header = None
    arcs: list[Arc] = []
    seen: dict[Arc, int] = {}
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            header = _parse_int_pair(fields, line_no, "header 'n m'")
            if header[0] == 0:
                raise DigraphFormatError(line_no, "vertex count must be positive")
            continue
        if len(arcs) == header[1]:
            raise DigraphFormatError(line_no, f"more than m={header[1]} arc lines")
        u, v = _parse_int_pair(fields, line_no, "arc 'u v'")
        n = header[0]
        if u >= n or v >= n:
            raise DigraphFormatError(line_no, f"vertex index out of range for n={n}")
        if u == v:
            raise DigraphFormatError(line_no, f"loop arc ({u},{v})")
        if (u, v) in seen:
            raise DigraphFormatError(line_no, f"duplicate arc ({u},{v}), first on line {seen[(u, v)]}")
        seen[(u, v)] = line_no
        arcs.append((u, v))

    if header is None:
        raise DigraphFormatError(last_line + 1, "missing header 'n m'")
    if len(arcs) != header[1]:
        raise DigraphFormatError(last_line + 1, f"expected {header[1]} arcs, found {len(arcs)}")
    return SimpleDigraph(header[0], arcs)


def serialize_digraph(d: SimpleDigraph) -> str:
    lines = [f"{d.n} {d.m}"]
    lines.extend(f"{u} {v}" for u, v in d.arcs)
    return "\n".join(lines) + "\n"


def read_digraph(path) -> SimpleDigraph:
    with open(path, 'rb') as f:
        return parse_digraph(f.read())


def write_digraph(d: SimpleDigraph, path) -> None:
    with open(path, 'w') as f:
        f.write(serialize_digraph(d))


# ----------------------------------------------------------------------
# Semi-completeness and symmetric arcs
# ----------------------------------------------------------------------

def validate_semi_complete(d: SimpleDigraph) -> SemiCompletenessReport:
    """
    Check that every pair is joined in at least one direction. The witness
    is the first uncovered pair scanning by index gap, then lower endpoint.
    """
    adj = d.adjacency
    covered = adj | adj.T
    for gap in range(1, d.n):
        missing = np.flatnonzero(~np.diagonal(covered, offset=gap))
        if missing.size:
            u = int(missing[0])
            return SemiCompletenessReport(False, False, (u, u + gap))
    symmetric = bool(np.triu(adj & adj.T, k=1).any())
    return SemiCompletenessReport(True, not symmetric)


def require_semi_complete(d: SimpleDigraph, index: Optional[int] = None) -> SemiCompleteDigraph:
    if isinstance(d, SemiCompleteDigraph):
        return d
    report = validate_semi_complete(d)
    if not report.semi_complete:
        raise NotSemiCompleteError(report.witness, index)
    return SemiCompleteDigraph(d.n, d.arcs)


def symmetric_pairs(d: SimpleDigraph) -> set[Arc]:
    """Pairs {u, v} (as u < v) joined in both directions."""
    rows, cols = np.nonzero(np.triu(d.adjacency & d.adjacency.T, k=1))
    return set(zip(rows.tolist(), cols.tolist()))


def partition_arcs(s: SimpleDigraph, ordering: "VertexOrdering") -> ArcPartition:
    """
    Split E(S) so that (V, e1) is a tournament: a lone arc goes to e1; of a
    symmetric pair the backward arc goes to e1 and the forward arc to e2.
    """
    e1, e2 = set(), set()
    for u, v in s.arcs:
        if not s.has_arc(v, u):
            e1.add((u, v))
        elif ordering.position(u) < ordering.position(v):
            e1.add((v, u))
            e2.add((u, v))
    logger.debug(f"Partitioned {s.m} arcs into |E1|={len(e1)}, |E2|={len(e2)}")
    return ArcPartition(frozenset(e1), frozenset(e2), ordering)


# ----------------------------------------------------------------------
# Generators
# ----------------------------------------------------------------------

def gen_alternating_cycle(k: int) -> SimpleDigraph:
    """Cycle on 2k vertices, edge {i, i+1} oriented i->i+1 for even i and i+1->i for odd i."""
    if k < 2:
        raise ValueError(f"alternating cycle needs k >= 2, got {k}")
    size = 2 * k
    arcs = []
    for i in range(size):
        j = (i + 1) % size
        arcs.append((i, j) if i % 2 == 0 else (j, i))
    return SimpleDigraph(size, arcs)


def gen_transitive_tournament(n: int) -> SemiCompleteDigraph:
    return SemiCompleteDigraph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def gen_random_tournament(n: int, seed: int) -> SemiCompleteDigraph:
    return gen_random_semicomplete(n, seed, 0.0)


def gen_random_semicomplete(n: int, seed: int, sym_prob: float) -> SemiCompleteDigraph:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= sym_prob <= 1.0:
        raise ValueError(f"sym_prob must lie in [0, 1], got {sym_prob}")
    rng = np.random.default_rng(seed)
    arcs = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < sym_prob:
                arcs.extend([(u, v), (v, u)])
            elif rng.random() < 0.5:
                arcs.append((u, v))
            else:
                arcs.append((v, u))
    return SemiCompleteDigraph(n, arcs)


def gen_random_bounded_ctw(n: int, c: int, seed: int, sym_prob: float = 0.5) -> SemiCompleteDigraph:
    """
    Semi-complete digraph of cutwidth at most c: start from the transitive
    tournament 0 -> 1 -> ... and add backward arcs (flipping the pair or making
    it symmetric) only while every prefix cut of the identity layout stays
    within c. Vertices are then relabelled by a seeded permutation.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if c < 0:
        raise ValueError(f"c must be non-negative, got {c}")
    rng = np.random.default_rng(seed)

    adj = np.zeros((n, n), dtype=bool)
    adj[np.triu_indices(n, k=1)] = True
    # load[i] counts backward arcs crossing the cut after position i (0-indexed)
    load = np.zeros(max(n - 1, 0), dtype=int)

    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for idx in rng.permutation(len(pairs)):
        u, v = pairs[idx]
        if rng.random() < 0.5:
            continue
        if load[u:v].size and load[u:v].max() + 1 > c:
            continue
        load[u:v] += 1
        adj[v, u] = True
        if rng.random() >= sym_prob:
            adj[u, v] = False

    perm = rng.permutation(n).tolist()
    rows, cols = np.nonzero(adj)
    return SemiCompleteDigraph(n, ((perm[a], perm[b]) for a, b in zip(rows.tolist(), cols.tolist())))

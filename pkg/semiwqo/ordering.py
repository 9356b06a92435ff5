# ordering.py
#
# Vertex orderings and their cut sequences, exact cutwidth by subset dynamic
# programming, and construction/verification of linked orderings and linked
# sequences of ordered cuts.
#
# Positions are 1-indexed as in the theory (pi_1..pi_n); cut i separates
# positions <= i from positions > i, for i in 0..n. Vertices are 0-indexed.

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from semiwqo.config import DEFAULT_LIMITS, Limits
from semiwqo.digraph import Arc, SimpleDigraph
from semiwqo.errors import LimitExceededError, ReconstructionError
from semiwqo.flows import arc_disjoint_path_count, endpoint_matched_paths, max_arc_disjoint_paths

logger = logging.getLogger(__name__)

_INF = np.iinfo(np.int64).max // 4


# ----------------------------------------------------------------------
# Types
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class VertexOrdering:
    """Permutation of 0..n-1; `order[p - 1]` is the vertex at position p."""

    order: tuple[int, ...]
    _positions: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"not a permutation of 0..{len(order) - 1}: {order}")
        positions = [0] * len(order)
        for p, v in enumerate(order, start=1):
            positions[v] = p
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_positions", tuple(positions))

    @classmethod
    def identity(cls, n: int) -> "VertexOrdering":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    def vertex_at(self, p: int) -> int:
        return self.order[p - 1]

    def position(self, v: int) -> int:
        return self._positions[v]

    def prefix(self, i: int) -> frozenset:
        return frozenset(self.order[:max(i, 0)])

    def suffix(self, i: int) -> frozenset:
        return frozenset(self.order[max(i, 0):])

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class CutSequence:
    """Cuts E^0..E^n of an ordering; E^i holds the arcs from positions > i to positions <= i."""

    cuts: tuple[frozenset, ...]

    @property
    def cut_vector(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cuts)

    @property
    def width(self) -> int:
        return max(self.cut_vector, default=0)

    def __getitem__(self, i: int) -> frozenset:
        return self.cuts[i]

    def __len__(self) -> int:
        return len(self.cuts)


@dataclass(frozen=True)
class OrderedCutSequence:
    """For each cut index i, the arcs of E^i in epsilon-position order (position s is ordered[i][s-1])."""

    ordered: tuple[tuple[Arc, ...], ...]

    def __getitem__(self, i: int) -> tuple[Arc, ...]:
        return self.ordered[i]

    def __len__(self) -> int:
        return len(self.ordered)

    def position(self, i: int, arc: Arc) -> int:
        """1-based position of `arc` in the ordered cut i."""
        return self.ordered[i].index(arc) + 1

    def matches(self, cuts: CutSequence) -> bool:
        return len(self.ordered) == len(cuts) and all(
            len(eps) == len(cut) and set(eps) == cut for eps, cut in zip(self.ordered, cuts.cuts))


@dataclass(frozen=True)
class CutwidthResult:
    ctw: int
    ordering: VertexOrdering


@dataclass(frozen=True)
class LinkCheck:
    ok: bool
    witness: Optional[tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Layout:
    """A digraph with a linked ordering, its cuts and a linked sequence of ordered cuts."""

    digraph: SimpleDigraph
    ordering: VertexOrdering
    cuts: CutSequence
    ordered_cuts: OrderedCutSequence

    @property
    def width(self) -> int:
        return self.cuts.width


# ----------------------------------------------------------------------
# Cuts
# ----------------------------------------------------------------------

def cut_sequence(d: SimpleDigraph, ordering: VertexOrdering) -> CutSequence:
    if ordering.n != d.n:
        raise ValueError(f"ordering has {ordering.n} vertices, digraph has {d.n}")
    buckets: list[set] = [set() for _ in range(d.n + 1)]
    for u, v in d.arcs:
        tail, head = ordering.position(u), ordering.position(v)
        for i in range(head, tail):
            buckets[i].add((u, v))
    return CutSequence(tuple(frozenset(b) for b in buckets))


def width(d: SimpleDigraph, ordering: VertexOrdering) -> int:
    return cut_sequence(d, ordering).width


def is_ctw_optimal(d: SimpleDigraph, ordering: VertexOrdering, limits: Limits = DEFAULT_LIMITS) -> bool:
    return width(d, ordering) == cutwidth_exact(d, limits).ctw


def separated_symmetric_pairs(d: SimpleDigraph, ordering: VertexOrdering, i: int) -> int:
    """Number of symmetric pairs with one end at a position <= i and the other after i."""
    prefix = ordering.prefix(i)
    return sum(1 for u, v in d.arcs if u < v and d.has_arc(v, u) and ((u in prefix) != (v in prefix)))


def _linked_pairs(vector: Sequence[int]) -> Iterator[tuple[int, int, int]]:
    """Pairs i < j with equal positive cut size t and no smaller cut between them."""
    for i, t in enumerate(vector):
        if t == 0:
            continue
        for j in range(i + 1, len(vector)):
            if vector[j] < t:
                break
            if vector[j] == t:
                yield i, j, t


# ----------------------------------------------------------------------
# Exact cutwidth
# ----------------------------------------------------------------------

class SubsetTable:
    """
    Prefix-cut sizes for every vertex subset A (as a bitmask):
    cut[A] = |E(V \\ A, A)|, the cut when A is the prefix.
    """

    def __init__(self, d: SimpleDigraph):
        n = d.n
        self.n = n
        self.full = (1 << n) - 1
        adj = d.adjacency
        in_mask = [sum(1 << u for u in np.flatnonzero(adj[:, v]).tolist()) for v in range(n)]
        out_mask = [sum(1 << w for w in np.flatnonzero(adj[v]).tolist()) for v in range(n)]

        masks = np.arange(1 << n, dtype=np.int64)
        cut = np.zeros(1 << n, dtype=np.int64)
        for v in range(n):
            lo, hi = 1 << v, 1 << (v + 1)
            lower = masks[:lo]
            with_v = lower | lo
            entering = np.bitwise_count(np.int64(in_mask[v]) & ~with_v & self.full)
            leaving = np.bitwise_count(np.int64(out_mask[v]) & lower)
            cut[lo:hi] = cut[:lo] + entering.astype(np.int64) - leaving.astype(np.int64)
        self.cut = cut
        self.masks = masks

        popcount = np.bitwise_count(masks)
        order = np.argsort(popcount, kind="stable")
        bounds = np.searchsorted(popcount[order], np.arange(n + 2))
        self.layers = [order[bounds[k]:bounds[k + 1]] for k in range(n + 1)]

    def minimise(self, combine) -> np.ndarray:
        """
        Fill value[A] = combine(cut[A], min over v in A of value[A - v]) layer
        by layer, with value[empty] = 0 and _INF marking infeasible subsets.
        """
        value = np.full(1 << self.n, _INF, dtype=np.int64)
        value[0] = 0
        for k in range(1, self.n + 1):
            idx = self.layers[k]
            best = np.full(idx.size, _INF, dtype=np.int64)
            for v in range(self.n):
                bit = np.int64(1 << v)
                has = (idx & bit) != 0
                np.minimum(best, np.where(has, value[idx ^ bit], _INF), out=best)
            value[idx] = combine(self.cut[idx], best)
        return value

    def reconstruct(self, value: np.ndarray, combine) -> VertexOrdering:
        """Walk back from the full set, taking the lowest vertex that attains value[A] as the last of A."""
        order = []
        mask = self.full
        while mask:
            for v in range(self.n):
                bit = 1 << v
                if mask & bit and value[mask ^ bit] < _INF:
                    got = combine(self.cut[mask:mask + 1], value[mask ^ bit:(mask ^ bit) + 1])[0]
                    if got == value[mask]:
                        order.append(v)
                        mask ^= bit
                        break
            else:
                raise ReconstructionError(f"subset DP reconstruction stuck at mask {mask:b}")
        return VertexOrdering(tuple(reversed(order)))


def _width_combine(cut, best):
    return np.where(best >= _INF, _INF, np.maximum(cut, best))


def _check_limit(d: SimpleDigraph, limit: int, what: str) -> None:
    if d.n > limit:
        raise LimitExceededError(what, d.n, limit)


def cutwidth_exact(d: SimpleDigraph, limits: Limits = DEFAULT_LIMITS) -> CutwidthResult:
    """Minimum width over all orderings, with an ordering attaining it."""
    _check_limit(d, limits.cutwidth_n, "cutwidth_exact vertex count")
    if d.n == 0:
        return CutwidthResult(0, VertexOrdering(()))
    table = SubsetTable(d)
    value = table.minimise(_width_combine)
    ctw = int(value[table.full])
    ordering = table.reconstruct(value, _width_combine)
    logger.debug(f"cutwidth_exact: n={d.n}, ctw={ctw}, ordering={ordering.order}")
    return CutwidthResult(ctw, ordering)


def cutwidth_bruteforce(d: SimpleDigraph, limits: Limits = DEFAULT_LIMITS) -> int:
    """Exhaustive search over orderings, cutting branches whose running maximum already reaches the best."""
    _check_limit(d, limits.bruteforce_cutwidth_n, "cutwidth_bruteforce vertex count")
    n = d.n
    into = [d.predecessors(v) for v in range(n)]
    out = [d.successors(v) for v in range(n)]
    placed = [False] * n
    best = d.m + 1

    def extend(count: int, cut: int, worst: int) -> None:
        nonlocal best
        if worst >= best:
            return
        if count == n:
            best = worst
            return
        for v in range(n):
            if placed[v]:
                continue
            new_cut = cut + sum(not placed[u] for u in into[v]) - sum(placed[w] for w in out[v])
            placed[v] = True
            extend(count + 1, new_cut, max(worst, new_cut))
            placed[v] = False

    extend(0, 0, 0)
    return best


# ----------------------------------------------------------------------
# Linked orderings
# ----------------------------------------------------------------------

def check_linked_ordering(d: SimpleDigraph, ordering: VertexOrdering, cuts: CutSequence = None) -> LinkCheck:
    """
    For every i < j with |E^i| = |E^j| = t and no smaller cut between, require
    t arc-disjoint paths from the suffix after j to the prefix up to i.
    """
    cuts = cuts or cut_sequence(d, ordering)
    for i, j, t in _linked_pairs(cuts.cut_vector):
        flow = arc_disjoint_path_count(d, ordering.suffix(j), ordering.prefix(i))
        if flow < t:
            logger.debug(f"Ordering not linked at ({i}, {j}): flow {flow} < {t}")
            return LinkCheck(False, (i, j))
    return LinkCheck(True)


def _orderings_within(d: SimpleDigraph, bound: int) -> Iterator[VertexOrdering]:
    """All orderings whose every prefix cut is at most `bound`, in lexicographic order."""
    n = d.n
    adj = d.adjacency
    order: list[int] = []
    placed = np.zeros(n, dtype=bool)

    def extend(cut: int):
        if len(order) == n:
            yield VertexOrdering(tuple(order))
            return
        for v in range(n):
            if placed[v]:
                continue
            # v joins the prefix: arcs from the rest into v enter, arcs from v into the prefix leave
            rest = ~placed
            rest[v] = False
            new_cut = cut + int(adj[rest, v].sum()) - int(adj[v, placed].sum())
            if new_cut > bound:
                continue
            placed[v] = True
            order.append(v)
            yield from extend(new_cut)
            order.pop()
            placed[v] = False

    yield from extend(0)


def build_linked_ordering(d: SimpleDigraph, limits: Limits = DEFAULT_LIMITS) -> VertexOrdering:
    """
    A width-optimal linked ordering: among orderings whose prefix cuts stay
    within ctw, take one minimising the sum of cut sizes; fall back to
    enumerating width-optimal orderings if that one fails the check.
    """
    _check_limit(d, limits.cutwidth_n, "build_linked_ordering vertex count")
    if d.n == 0:
        return VertexOrdering(())
    table = SubsetTable(d)
    ctw = int(table.minimise(_width_combine)[table.full])

    def sum_combine(cut, best):
        return np.where((cut > ctw) | (best >= _INF), _INF, cut + best)

    value = table.minimise(sum_combine)
    ordering = table.reconstruct(value, sum_combine)
    if check_linked_ordering(d, ordering):
        logger.debug(f"Linked ordering {ordering.order} (ctw={ctw}, cut sum={int(value[table.full])})")
        return ordering

    logger.warning(f"Minimum-sum ordering {ordering.order} is not linked; enumerating width-optimal orderings")
    for candidate in _orderings_within(d, ctw):
        if check_linked_ordering(d, candidate):
            return candidate
    raise ReconstructionError(f"no width-optimal linked ordering found (n={d.n}, ctw={ctw})")


# ----------------------------------------------------------------------
# Linked ordered cuts
# ----------------------------------------------------------------------

def check_linked_ordered_cuts(d: SimpleDigraph, ordering: VertexOrdering, ordered: OrderedCutSequence,
                             cuts: CutSequence = None) -> LinkCheck:
    """
    For every qualifying pair i < j, require an endpoint-matched path system:
    path s starts with the position-s arc of cut j and ends with the
    position-s arc of cut i.
    """
    cuts = cuts or cut_sequence(d, ordering)
    if not ordered.matches(cuts):
        raise ValueError("ordered cuts do not enumerate the cuts of the ordering")
    for i, j, _ in _linked_pairs(cuts.cut_vector):
        if endpoint_matched_paths(d, ordering, i, j, ordered[i], ordered[j]) is None:
            return LinkCheck(False, (i, j))
    return LinkCheck(True)


def _linked_predecessor(vector: Sequence[int], i: int) -> Optional[int]:
    """Nearest j < i with |E^j| = |E^i| and no smaller cut in between."""
    t = vector[i]
    for j in range(i - 1, -1, -1):
        if vector[j] < t:
            return None
        if vector[j] == t:
            return j
    return None


def _propagate(d: SimpleDigraph, ordering: VertexOrdering, cuts: CutSequence,
               ordered: list, i: int) -> tuple[Arc, ...]:
    vector = cuts.cut_vector
    t = vector[i]
    if t == 0:
        return ()
    j = _linked_predecessor(vector, i)
    slots: list[Optional[Arc]] = [None] * t

    if j is not None:
        system = max_arc_disjoint_paths(d, ordering.suffix(i), ordering.prefix(j), t)
        if system is None:
            raise ReconstructionError(f"ordering is not linked between cuts {j} and {i}")
        for s in range(len(system)):
            arcs = system.arcs_of(s)
            late = next(a for a in arcs if a in cuts[i])
            early = next(a for a in arcs if a in cuts[j])
            slots[ordered[j].index(early)] = late
        return tuple(slots)

    # no linked predecessor: arcs persisting from E^{i-1} keep their number when it fits
    fresh = []
    previous = ordered[i - 1] if i > 0 else ()
    for arc in sorted(cuts[i]):
        p = previous.index(arc) if arc in previous else None
        if p is not None and p < t and slots[p] is None:
            slots[p] = arc
        else:
            fresh.append(arc)
    free = iter(s for s in range(t) if slots[s] is None)
    for arc in fresh:
        slots[next(free)] = arc
    return tuple(slots)


def _exhaustive_ordered_cuts(d: SimpleDigraph, ordering: VertexOrdering, cuts: CutSequence) -> Optional[OrderedCutSequence]:
    vector = cuts.cut_vector
    partners = {j: [i for i, jj, _ in _linked_pairs(vector) if jj == j] for j in range(len(vector))}
    chosen: list[tuple[Arc, ...]] = []

    def extend(j: int) -> bool:
        if j == len(vector):
            return True
        for perm in itertools.permutations(sorted(cuts[j])):
            if all(endpoint_matched_paths(d, ordering, i, j, chosen[i], perm) is not None for i in partners[j]):
                chosen.append(perm)
                if extend(j + 1):
                    return True
                chosen.pop()
        return False

    return OrderedCutSequence(tuple(chosen)) if extend(0) else None


def build_linked_ordered_cuts(d: SimpleDigraph, ordering: VertexOrdering,
                              limits: Limits = DEFAULT_LIMITS) -> OrderedCutSequence:
    """
    Sweep the cuts left to right; each cut inherits the numbering of its
    nearest equal-size predecessor (no smaller cut between) through the
    bijection induced by a maximum arc-disjoint path system.
    """
    cuts = cut_sequence(d, ordering)
    ordered: list[tuple[Arc, ...]] = []
    for i in range(d.n + 1):
        ordered.append(_propagate(d, ordering, cuts, ordered, i))
    result = OrderedCutSequence(tuple(ordered))

    check = check_linked_ordered_cuts(d, ordering, result, cuts)
    if check:
        return result

    logger.warning(f"Propagated ordered cuts fail at {check.witness}; trying exhaustive search")
    if d.n > limits.ordered_cuts_exhaustive_n:
        raise ReconstructionError(f"ordered cuts not linked at {check.witness} and n={d.n} is "
                                  f"beyond the exhaustive limit {limits.ordered_cuts_exhaustive_n}")
    found = _exhaustive_ordered_cuts(d, ordering, cuts)
    if found is None:
        raise ReconstructionError("no linked sequence of ordered cuts exists for this ordering")
    return found


def build_layout(d: SimpleDigraph, limits: Limits = DEFAULT_LIMITS) -> Layout:
    ordering = build_linked_ordering(d, limits)
    return Layout(d, ordering, cut_sequence(d, ordering), build_linked_ordered_cuts(d, ordering, limits))


# ----------------------------------------------------------------------
# Text forms
# ----------------------------------------------------------------------

def serialize_ordering(ordering: VertexOrdering) -> str:
    return " ".join(map(str, ordering.order)) + "\n"


def parse_ordering(text: str) -> VertexOrdering:
    return VertexOrdering(tuple(int(x) for x in text.split()))


def serialize_ordered_cuts(ordered: OrderedCutSequence) -> str:
    lines = []
    for i, eps in enumerate(ordered.ordered):
        arcs = " ".join(f"({u},{v})" for u, v in eps)
        lines.append(f"{i}: {arcs}".rstrip())
    return "\n".join(lines) + "\n"


def parse_ordered_cuts(text: str) -> OrderedCutSequence:
    ordered = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        index, _, rest = line.partition(":")
        if not index.strip().isdigit() or int(index) != len(ordered):
            raise ValueError(f"line {lineno}: expected cut index {len(ordered)}, got {index!r}")
        arcs = []
        for token in rest.split():
            u, v = token.strip("()").split(",")
            arcs.append((int(u), int(v)))
        ordered.append(tuple(arcs))
    return OrderedCutSequence(tuple(ordered))

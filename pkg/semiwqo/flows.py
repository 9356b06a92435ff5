# flows.py
#
# Arc-disjoint path systems between vertex sets: unit-capacity max flow with
# path decomposition, an endpoint-matched backtracking variant, an
# independent validator and a brute-force Menger oracle.

import itertools
import logging
from collections import Counter, deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

import networkx as nx

from semiwqo.digraph import Arc, SimpleDigraph

if TYPE_CHECKING:
    from semiwqo.ordering import VertexOrdering

logger = logging.getLogger(__name__)

_SUPER_SOURCE = "_source"
_SUPER_SINK = "_sink"


@dataclass(frozen=True)
class PathSystem:
    """Directed paths given as vertex sequences; a one-vertex path uses no arcs."""

    paths: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def arcs_of(self, s: int) -> list[Arc]:
        path = self.paths[s]
        return list(zip(path, path[1:]))

    def all_arcs(self) -> list[Arc]:
        return [arc for s in range(len(self.paths)) for arc in self.arcs_of(s)]


def serialize_path_system(system: PathSystem) -> str:
    return "".join(" ".join(map(str, path)) + "\n" for path in system.paths)


def validate_path_system(d: SimpleDigraph, system: PathSystem,
                         sources: Iterable[int] = None, sinks: Iterable[int] = None) -> tuple[bool, str]:
    """Check arc existence, arc-disjointness and (when given) endpoint membership."""
    sources = None if sources is None else set(sources)
    sinks = None if sinks is None else set(sinks)
    used: set[Arc] = set()
    for s, path in enumerate(system.paths):
        if not path:
            return False, f"path {s} is empty"
        if sources is not None and path[0] not in sources:
            return False, f"path {s} starts at {path[0]}, not a source"
        if sinks is not None and path[-1] not in sinks:
            return False, f"path {s} ends at {path[-1]}, not a sink"
        for arc in system.arcs_of(s):
            if not d.has_arc(*arc):
                return False, f"path {s} uses non-arc {arc}"
            if arc in used:
                return False, f"arc {arc} used twice"
            used.add(arc)
    return True, "ok"


# ----------------------------------------------------------------------
# Unit-capacity flow
# ----------------------------------------------------------------------

def _flow_network(d: SimpleDigraph, sources: set[int], sinks: set[int], skip: Iterable[Arc] = ()) -> nx.DiGraph:
    skip = set(skip)
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(((u, v) for u, v in d.arcs if (u, v) not in skip), capacity=1)
    # super arcs carry no capacity attribute, which networkx treats as infinite
    g.add_edges_from((_SUPER_SOURCE, v) for v in sources)
    g.add_edges_from((v, _SUPER_SINK) for v in sinks)
    return g


def arc_disjoint_path_count(d: SimpleDigraph, sources: Iterable[int], sinks: Iterable[int],
                            skip: Iterable[Arc] = ()) -> int:
    """Maximum number of arc-disjoint source->sink paths (sources and sinks disjoint)."""
    sources, sinks = set(sources), set(sinks)
    if sources & sinks:
        raise ValueError(f"sources and sinks overlap: {sorted(sources & sinks)}")
    if not sources or not sinks:
        return 0
    value, _ = nx.maximum_flow(_flow_network(d, sources, sinks, skip), _SUPER_SOURCE, _SUPER_SINK)
    return int(value)


def _decompose(flow: dict, sources: set[int], sinks: set[int], t: int) -> list[tuple[int, ...]]:
    remaining = {u: {v: int(x) for v, x in targets.items() if x > 0} for u, targets in flow.items()}
    paths = []
    while len(paths) < t:
        starts = [v for v, x in remaining.get(_SUPER_SOURCE, {}).items() if x > 0]
        if not starts:
            break
        start = starts[0]
        remaining[_SUPER_SOURCE][start] -= 1
        path = [start]
        index = {start: 0}
        v = start
        while remaining.get(v, {}).get(_SUPER_SINK, 0) == 0 or v not in sinks:
            nxt = next(w for w, x in remaining[v].items() if x > 0 and w != _SUPER_SINK)
            remaining[v][nxt] -= 1
            if nxt in index:
                # drop the circulation closed at nxt
                for w in path[index[nxt] + 1:]:
                    del index[w]
                del path[index[nxt] + 1:]
            else:
                index[nxt] = len(path)
                path.append(nxt)
            v = nxt
        remaining[v][_SUPER_SINK] -= 1
        paths.append(tuple(path))
    return paths


def max_arc_disjoint_paths(d: SimpleDigraph, sources: Iterable[int], sinks: Iterable[int], t: int,
                           allow_trivial: bool = False) -> Optional[PathSystem]:
    """
    Return t pairwise arc-disjoint paths from `sources` to `sinks`, or None if
    the unit-capacity max flow is below t. A vertex in both sets is an error
    unless `allow_trivial`, in which case it contributes its one-vertex path
    and nothing else: it stays available as an interior vertex but no longer
    starts or ends a longer path. With sources {a, v}, sinks {v, b} and arcs
    a->v, v->b this gives 2 paths, (v,) and a->v->b, not the 3 of
    (v,), a->v and v->b.
    """
    sources, sinks = set(sources), set(sinks)
    shared = sources & sinks
    if shared and not allow_trivial:
        raise ValueError(f"sources and sinks overlap: {sorted(shared)}")
    if t <= 0:
        return PathSystem(())

    trivial = [(v,) for v in sorted(shared)][:t]
    needed = t - len(trivial)
    sources -= shared
    sinks -= shared
    if needed == 0:
        return PathSystem(tuple(trivial))
    if not sources or not sinks:
        return None

    g = _flow_network(d, sources, sinks)
    value, flow = nx.maximum_flow(g, _SUPER_SOURCE, _SUPER_SINK)
    logger.debug(f"Max flow {value} (need {needed}) from {len(sources)} sources to {len(sinks)} sinks")
    if value < needed:
        return None
    paths = _decompose(flow, sources, sinks, needed)
    return PathSystem(tuple(trivial) + tuple(paths))


def min_arc_cut_bruteforce(d: SimpleDigraph, sources: Iterable[int], sinks: Iterable[int]) -> int:
    """Smallest number of arcs whose removal leaves no source->sink path (Menger oracle)."""
    sources, sinks = set(sources), set(sinks)
    arcs = d.arcs

    def separated(removed: set) -> bool:
        seen = set(sources)
        queue = deque(sources)
        while queue:
            u = queue.popleft()
            if u in sinks:
                return False
            for v in d.successors(u):
                if (u, v) not in removed and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return True

    for k in range(len(arcs) + 1):
        for removed in itertools.combinations(arcs, k):
            if separated(set(removed)):
                return k
    return len(arcs)


# ----------------------------------------------------------------------
# Endpoint-matched path systems
# ----------------------------------------------------------------------

class EndpointMatchedRouter:
    """
    Backtracking search for t arc-disjoint paths where path s begins with a
    prescribed arc of the later cut and ends with the same-position arc of
    the earlier cut. Interior vertices are confined to positions (i, j].
    """

    SINGLE, BLOCKED, JOIN = "single", "blocked", "join"

    def __init__(self, d: SimpleDigraph, ordering: "VertexOrdering", i: int, j: int,
                 eps_i: Sequence[Arc], eps_j: Sequence[Arc]):
        if len(eps_i) != len(eps_j):
            raise ValueError(f"cut sizes differ: |E^{i}|={len(eps_i)}, |E^{j}|={len(eps_j)}")
        if len(set(eps_i)) != len(eps_i) or len(set(eps_j)) != len(eps_j):
            raise ValueError("an ordered cut repeats an arc")
        self.d = d
        self.i, self.j = i, j
        self.eps_i, self.eps_j = tuple(eps_i), tuple(eps_j)
        self.middle = {v for v in range(d.n) if i < ordering.position(v) <= j}
        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(self.middle)
        self.graph.add_edges_from((u, v) for u, v in d.arcs if u in self.middle and v in self.middle)
        self.plans = [self._plan(a, b) for a, b in zip(self.eps_j, self.eps_i)]
        self._dead: set = set()
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _plan(self, a: Arc, b: Arc) -> tuple:
        if a == b:
            return (self.SINGLE,)
        if a[1] not in self.middle or b[0] not in self.middle:
            # a path entering the prefix or leaving the suffix early cannot continue
            return (self.BLOCKED,)
        return (self.JOIN, a[1], b[0])

    def _residual(self, used: frozenset) -> nx.DiGraph:
        g = self.graph.copy()
        g.remove_edges_from(used)
        return g

    def _feasible(self, s: int, used: frozenset) -> bool:
        """Necessary condition: each remaining pair reachable, and all of them routable by one flow."""
        pending = [(p[1], p[2]) for p in self.plans[s:] if p[0] == self.JOIN and p[1] != p[2]]
        if not pending:
            return True
        residual = self._residual(used)
        if not all(nx.has_path(residual, start, end) for start, end in pending):
            return False
        starts = Counter(start for start, _ in pending)
        ends = Counter(end for _, end in pending)
        g = nx.DiGraph()
        g.add_edges_from(residual.edges(), capacity=1)
        g.add_edges_from((_SUPER_SOURCE, v, {"capacity": k}) for v, k in starts.items())
        g.add_edges_from((v, _SUPER_SINK, {"capacity": k}) for v, k in ends.items())
        value, _ = nx.maximum_flow(g, _SUPER_SOURCE, _SUPER_SINK)
        return value >= len(pending)

    def _candidates(self, s: int, used: frozenset):
        a, b = self.eps_j[s], self.eps_i[s]
        plan = self.plans[s]
        if plan[0] == self.SINGLE:
            yield a
        elif plan[0] == self.JOIN:
            _, start, end = plan
            if start == end:
                yield (a[0], start, b[1])
            else:
                # shortest first
                try:
                    for middle in nx.shortest_simple_paths(self._residual(used), start, end):
                        yield (a[0], *middle, b[1])
                except nx.NetworkXNoPath:
                    return

    def _search(self, s: int, used: frozenset, chosen: list) -> Optional[list]:
        if s == len(self.plans):
            return list(chosen)
        if (s, used) in self._dead or not self._feasible(s, used):
            self._dead.add((s, used))
            return None
        for path in self._candidates(s, used):
            interior = frozenset(zip(path[1:-1], path[2:-1]))
            chosen.append(path)
            result = self._search(s + 1, used | interior, chosen)
            if result is not None:
                return result
            chosen.pop()
        self._dead.add((s, used))
        return None

    def solve(self) -> Optional[PathSystem]:
        if any(p[0] == self.BLOCKED for p in self.plans):
            return None
        found = self._search(0, frozenset(), [])
        if found is None:
            self.logger.debug(f"No endpoint-matched system for cuts ({self.i}, {self.j}), t={len(self.plans)}")
            return None
        return PathSystem(tuple(found))


def endpoint_matched_paths(d: SimpleDigraph, ordering: "VertexOrdering", i: int, j: int,
                           eps_i: Sequence[Arc], eps_j: Sequence[Arc]) -> Optional[PathSystem]:
    """
    For cuts i < j of equal size t: t arc-disjoint paths from the suffix after
    j to the prefix up to i where path s starts with eps_j[s] and ends with
    eps_i[s] (0-based s). None when no such system exists.
    """
    if i >= j:
        raise ValueError(f"expected i < j, got ({i}, {j})")
    return EndpointMatchedRouter(d, ordering, i, j, eps_i, eps_j).solve()

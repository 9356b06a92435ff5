# immersion.py
#
# Strong immersion models: verification, a brute-force finder, and the
# constructive route from codeword domination to a model (tournament
# stitching along linked ordered cuts, then symmetric arcs through free
# pivots). Also the pairwise scanner over a stream of digraphs.

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import networkx as nx

from semiwqo.codec import Codeword, Embedding, dominates, encode_layout, interval_isomorphism, tag_modulus
from semiwqo.config import DEFAULT_LIMITS, Limits
from semiwqo.digraph import Arc, SimpleDigraph, partition_arcs, require_semi_complete
from semiwqo.errors import LimitExceededError, ModelFormatError, ReconstructionError, WidthError
from semiwqo.flows import endpoint_matched_paths
from semiwqo.ordering import Layout, OrderedCutSequence, VertexOrdering, build_layout, cutwidth_exact

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Models and verification
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class StrongImmersionModel:
    """Vertex map V(H) -> V(D) and, per arc of H, a directed path in D."""

    vmap: dict
    pmap: dict

    @classmethod
    def identity(cls, d: SimpleDigraph) -> "StrongImmersionModel":
        return cls({v: v for v in range(d.n)}, {arc: arc for arc in d.arcs})

    def arcs_of(self, arc: Arc) -> list[Arc]:
        path = self.pmap[arc]
        return list(zip(path, path[1:]))

    def used_arcs(self) -> set[Arc]:
        return {a for arc in self.pmap for a in self.arcs_of(arc)}


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    clause: Optional[int] = None
    witness: object = None
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def verify_strong_immersion(h: SimpleDigraph, d: SimpleDigraph, m: StrongImmersionModel) -> VerificationResult:
    """
    Check the four clauses: (1) injective vertex map, (2) each arc of H maps
    to a directed path of D between the right images, (3) the paths are
    pairwise arc-disjoint, (4) no path visits the image of a vertex that is
    not an endpoint of its arc.
    """
    vmap, pmap = m.vmap, m.pmap
    if set(vmap) != set(range(h.n)):
        return VerificationResult(False, 1, sorted(set(range(h.n)) ^ set(vmap)), "vertex map domain is not V(H)")
    if any(not 0 <= x < d.n for x in vmap.values()):
        return VerificationResult(False, 1, dict(vmap), "vertex map leaves V(D)")
    preimage: dict[int, int] = {}
    for v, x in vmap.items():
        if x in preimage:
            return VerificationResult(False, 1, (preimage[x], v), f"vertices {preimage[x]} and {v} share image {x}")
        preimage[x] = v

    if set(pmap) != set(h.arcs):
        return VerificationResult(False, 2, sorted(set(pmap) ^ set(h.arcs)), "path map domain is not E(H)")
    for (u, v), path in pmap.items():
        if len(path) < 2 or path[0] != vmap[u] or path[-1] != vmap[v]:
            return VerificationResult(False, 2, (u, v), f"path {path} does not join {vmap[u]} to {vmap[v]}")
        if len(set(path)) != len(path):
            return VerificationResult(False, 2, (u, v), f"path {path} repeats a vertex")
        outside = next((x for x in path if not 0 <= x < d.n), None)
        if outside is not None:
            return VerificationResult(False, 2, (u, v), f"path {path} leaves V(D) at {outside}")
        missing = next((a for a in zip(path, path[1:]) if not d.has_arc(*a)), None)
        if missing is not None:
            return VerificationResult(False, 2, (u, v), f"path {path} uses non-arc {missing}")

    owner: dict[Arc, Arc] = {}
    for arc in pmap:
        for a in m.arcs_of(arc):
            if a in owner:
                return VerificationResult(False, 3, a, f"arc {a} carries both {owner[a]} and {arc}")
            owner[a] = arc

    for (u, v), path in pmap.items():
        for x in path:
            w = preimage.get(x)
            if w is not None and w not in (u, v):
                return VerificationResult(False, 4, ((u, v), w), f"path of ({u},{v}) visits the image of {w}")
    return VerificationResult(True)


def verify_feedback_contract(t: SimpleDigraph, ordering: VertexOrdering, s2: SimpleDigraph,
                             ordering2: VertexOrdering, model: StrongImmersionModel,
                             f: Optional[Embedding] = None) -> VerificationResult:
    """
    Feedback arcs of `t` must map to paths that start and end with feedback
    arcs of `ordering2`; every other arc must map to a single arc. With `f`,
    also require vmap(pi_j) = pi'_{f(j)}.
    """
    if f is not None:
        for j in range(1, ordering.n + 1):
            if model.vmap.get(ordering.vertex_at(j)) != ordering2.vertex_at(f(j)):
                return VerificationResult(False, None, j, f"position {j} is not mapped to position {f(j)}")
    for arc in t.arcs:
        path = model.pmap[arc]
        if t.is_feedback(arc, ordering):
            first, last = (path[0], path[1]), (path[-2], path[-1])
            if not (s2.is_feedback(first, ordering2) and s2.is_feedback(last, ordering2)):
                return VerificationResult(False, None, arc, f"image {path} of feedback arc {arc} "
                                                            f"does not start and end with feedback arcs")
        elif len(path) != 2:
            return VerificationResult(False, None, arc, f"image {path} of non-feedback arc {arc} is not a single arc")
    return VerificationResult(True)


# ----------------------------------------------------------------------
# Brute force
# ----------------------------------------------------------------------

class ImmersionSearch:
    """Backtracking over injective vertex maps, then over arc-disjoint routings."""

    def __init__(self, h: SimpleDigraph, d: SimpleDigraph):
        self.h, self.d = h, d
        self.host = d.to_networkx()
        # high-degree pattern vertices first
        self.order = sorted(range(h.n), key=lambda v: -(h.out_degree(v) + h.in_degree(v)))
        self.arcs = list(h.arcs)
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _images(self, v: int, taken: set) -> Iterator[int]:
        for x in range(self.d.n):
            if x not in taken and self.d.out_degree(x) >= self.h.out_degree(v) \
                    and self.d.in_degree(x) >= self.h.in_degree(v):
                yield x

    def _vertex_maps(self, k: int, vmap: dict) -> Iterator[dict]:
        if k == len(self.order):
            yield dict(vmap)
            return
        v = self.order[k]
        for x in self._images(v, set(vmap.values())):
            vmap[v] = x
            yield from self._vertex_maps(k + 1, vmap)
            del vmap[v]

    def routes(self, vmap: dict, used: set, arc: Arc) -> Iterator[tuple[int, ...]]:
        u, v = arc
        forbidden = {x for w, x in vmap.items() if w not in (u, v)}
        g = nx.restricted_view(self.host, forbidden, used)
        try:
            for path in nx.shortest_simple_paths(g, vmap[u], vmap[v]):
                yield tuple(path)
        except nx.NetworkXNoPath:
            return

    def _route(self, k: int, vmap: dict, used: set, pmap: dict) -> Optional[dict]:
        if k == len(self.arcs):
            return dict(pmap)
        arc = self.arcs[k]
        for path in self.routes(vmap, used, arc):
            arcs = set(zip(path, path[1:]))
            pmap[arc] = path
            found = self._route(k + 1, vmap, used | arcs, pmap)
            if found is not None:
                return found
            del pmap[arc]
        return None

    def run(self) -> Optional[StrongImmersionModel]:
        for vmap in self._vertex_maps(0, {}):
            pmap = self._route(0, vmap, set(), {})
            if pmap is not None:
                return StrongImmersionModel(vmap, pmap)
        return None


def find_immersion_bruteforce(h: SimpleDigraph, d: SimpleDigraph,
                              limits: Limits = DEFAULT_LIMITS) -> Optional[StrongImmersionModel]:
    if h.n > d.n or h.m > d.m:
        return None
    if h.n > limits.immersion_pattern_n:
        raise LimitExceededError("find_immersion_bruteforce pattern size", h.n, limits.immersion_pattern_n)
    if d.n > limits.immersion_host_n:
        raise LimitExceededError("find_immersion_bruteforce host size", d.n, limits.immersion_host_n)
    model = ImmersionSearch(h, d).run()
    if model is not None:
        _assert_verified(h, d, model)
    logger.debug(f"Brute force: {h!r} into {d!r} -> {'found' if model else 'none'}")
    return model


def _assert_verified(h: SimpleDigraph, d: SimpleDigraph, model: StrongImmersionModel, trace=None) -> None:
    result = verify_strong_immersion(h, d, model)
    if not result:
        raise ReconstructionError(f"model fails clause {result.clause}: {result.message}", trace)


# ----------------------------------------------------------------------
# Reconstruction trace
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class StitchRecord:
    """Image of one feedback arc: its ordered-cut positions, the host arcs at the image cuts, the path."""

    arc: Arc
    positions: tuple[int, ...]
    junctions: tuple[Arc, ...]
    path: tuple[int, ...]


@dataclass(frozen=True)
class PivotRecord:
    """Pivot selection for one symmetric forward arc whose endpoints landed with slack between them."""

    arc: Arc
    j: int
    h: int
    fj: int
    fh: int
    unmapped: int
    candidates: int
    excluded_tail: int
    excluded_head: int
    excluded_used: int
    remaining: int
    pivot: int

    @property
    def gap(self) -> int:
        return self.fh - self.fj


@dataclass
class ReconstructionTrace:
    c: int
    embedding: Optional[Embedding] = None
    e1: frozenset = frozenset()
    e2: frozenset = frozenset()
    direct: list = field(default_factory=list)
    pivots: list = field(default_factory=list)
    stitches: list = field(default_factory=list)
    fallback: bool = False


def serialize_trace(trace: ReconstructionTrace) -> str:
    lines = [f"trace c={trace.c} fallback={int(trace.fallback)}"]
    if trace.embedding is not None:
        lines.append("embedding: " + " ".join(map(str, trace.embedding.f)))
    lines.append("e1: " + " ".join(f"({u},{v})" for u, v in sorted(trace.e1)))
    lines.append("e2: " + " ".join(f"({u},{v})" for u, v in sorted(trace.e2)))
    for rec in trace.stitches:
        lines.append(f"stitch ({rec.arc[0]},{rec.arc[1]}) positions={','.join(map(str, rec.positions))} "
                     f"junctions={' '.join(f'({a},{b})' for a, b in rec.junctions)} "
                     f"path={' '.join(map(str, rec.path))}")
    for u, v in trace.direct:
        lines.append(f"direct ({u},{v})")
    for rec in trace.pivots:
        lines.append(f"pivot ({rec.arc[0]},{rec.arc[1]}) j={rec.j} h={rec.h} fj={rec.fj} fh={rec.fh} "
                     f"gap={rec.gap} unmapped={rec.unmapped} candidates={rec.candidates} "
                     f"excluded_tail={rec.excluded_tail} excluded_head={rec.excluded_head} "
                     f"excluded_used={rec.excluded_used} remaining={rec.remaining} pivot={rec.pivot}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


# ----------------------------------------------------------------------
# Tournament core: stitching along linked ordered cuts
# ----------------------------------------------------------------------

class TournamentStitcher:
    """
    Builds the image of a tournament pattern in a host with linked ordered
    cuts, given an embedding of the pattern's codeword into the host's.

    A feedback arc (pi_b, pi_a) sits at position p_l of the ordered cut l for
    l in [a, b-1]; the host arc at position p_l of cut f(l) is its junction
    at l. Junctions at l+1 and l are joined by the endpoint-matched path of
    position p_l between host cuts f(l) and f(l+1)-1.
    """

    def __init__(self, t: SimpleDigraph, ordering: VertexOrdering, ordered: OrderedCutSequence,
                 s2: SimpleDigraph, ordering2: VertexOrdering, ordered2: OrderedCutSequence, f: Embedding):
        self.t, self.ordering, self.ordered = t, ordering, ordered
        self.s2, self.ordering2, self.ordered2 = s2, ordering2, ordered2
        self.f = f
        self.vmap = {ordering.vertex_at(j): ordering2.vertex_at(f(j)) for j in range(1, ordering.n + 1)}
        self._systems: dict = {}
        self.records: list[StitchRecord] = []
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _system(self, l: int):
        if l not in self._systems:
            lo, hi = self.f(l), self.f(l + 1) - 1
            try:
                found = endpoint_matched_paths(self.s2, self.ordering2, lo, hi, self.ordered2[lo], self.ordered2[hi])
            except ValueError as e:
                raise ReconstructionError(f"host cuts {lo} and {hi} cannot be linked: {e}")
            if found is None:
                raise ReconstructionError(f"no endpoint-matched system between host cuts {lo} and {hi}")
            self.logger.debug(f"Host system for gap {l}: cuts ({lo}, {hi}), {len(found)} paths")
            self._systems[l] = found
        return self._systems[l]

    def feedback_image(self, arc: Arc) -> tuple[int, ...]:
        u, v = arc
        a, b = self.ordering.position(v), self.ordering.position(u)
        positions = tuple(self.ordered.position(l, arc) for l in range(a, b))
        junctions = tuple(self.ordered2[self.f(l)][p - 1] for l, p in zip(range(a, b), positions))

        # the first host arc leaves the image of pi_b: position p_{b-1} of cut f(b)-1
        path = list(self.ordered2[self.f(b) - 1][positions[-1] - 1])
        for l in range(b - 1, a - 1, -1):
            k = l - a
            if self.f(l) + 1 == self.f(l + 1):
                if tuple(path[-2:]) != junctions[k]:
                    raise ReconstructionError(f"arc {arc}: host arc {tuple(path[-2:])} is not the "
                                              f"junction {junctions[k]} at cut {self.f(l)}")
                continue
            piece = self._system(l).paths[positions[k] - 1]
            if tuple(piece[:2]) != tuple(path[-2:]) or tuple(piece[-2:]) != junctions[k]:
                raise ReconstructionError(f"arc {arc}: host path {piece} does not join "
                                          f"{tuple(path[-2:])} to {junctions[k]}")
            path.extend(piece[2:])

        self.records.append(StitchRecord(arc, positions, junctions, tuple(path)))
        return tuple(path)

    def run(self) -> StrongImmersionModel:
        pmap = {}
        for arc in self.t.arcs:
            u, v = arc
            if self.t.is_feedback(arc, self.ordering):
                pmap[arc] = self.feedback_image(arc)
            else:
                pmap[arc] = (self.vmap[u], self.vmap[v])
        return StrongImmersionModel(dict(self.vmap), pmap)


def _contract_search(t: SimpleDigraph, ordering: VertexOrdering, s2: SimpleDigraph, ordering2: VertexOrdering,
                     f: Embedding, limits: Limits) -> Optional[StrongImmersionModel]:
    """Backtracking for a model with the fixed vertex placement and the feedback/non-feedback image shapes."""
    if s2.n > limits.immersion_host_n:
        raise ReconstructionError(f"contract search needs host size <= {limits.immersion_host_n}, got {s2.n}")
    vmap = {ordering.vertex_at(j): ordering2.vertex_at(f(j)) for j in range(1, ordering.n + 1)}
    pmap, used = {}, set()
    for arc in t.arcs:
        if not t.is_feedback(arc, ordering):
            image = (vmap[arc[0]], vmap[arc[1]])
            if not s2.has_arc(*image):
                return None
            pmap[arc], used = image, used | {image}

    search = ImmersionSearch(t, s2)
    pending = [arc for arc in t.arcs if t.is_feedback(arc, ordering)]

    def shaped(path) -> bool:
        return s2.is_feedback(path[:2], ordering2) and s2.is_feedback(path[-2:], ordering2)

    def route(k: int, used: set) -> bool:
        if k == len(pending):
            return True
        arc = pending[k]
        for path in search.routes(vmap, used, arc):
            if not shaped(path):
                continue
            pmap[arc] = path
            if route(k + 1, used | set(zip(path, path[1:]))):
                return True
            del pmap[arc]
        return False

    return StrongImmersionModel(vmap, pmap) if route(0, used) else None


def reconstruct_tournament_immersion(t: SimpleDigraph, ordering: VertexOrdering, ordered: OrderedCutSequence,
                                     s2: SimpleDigraph, ordering2: VertexOrdering, ordered2: OrderedCutSequence,
                                     f: Embedding, limits: Limits = DEFAULT_LIMITS,
                                     trace: Optional[ReconstructionTrace] = None) -> StrongImmersionModel:
    """
    Model of the tournament `t` in `s2` with vmap(pi_j) = pi'_{f(j)}, where
    feedback arcs map to paths starting and ending with host feedback arcs
    and all other arcs map to single arcs.
    """
    stitcher = TournamentStitcher(t, ordering, ordered, s2, ordering2, ordered2, f)
    try:
        model = stitcher.run()
        result = verify_strong_immersion(t, s2, model)
        if result:
            result = verify_feedback_contract(t, ordering, s2, ordering2, model, f)
        if not result:
            raise ReconstructionError(f"stitched model rejected: {result.message}")
        if trace is not None:
            trace.stitches.extend(stitcher.records)
        return model
    except ReconstructionError as e:
        logger.warning(f"Stitching failed ({e}); running the contract search")

    if trace is not None:
        trace.fallback = True
    model = _contract_search(t, ordering, s2, ordering2, f, limits)
    if model is None:
        raise ReconstructionError("no model satisfies the tournament contract", trace)
    return model


# ----------------------------------------------------------------------
# Symmetric arcs
# ----------------------------------------------------------------------

def extend_immersion_symmetric(s: SimpleDigraph, ordering: VertexOrdering, ordered: OrderedCutSequence,
                               s2: SimpleDigraph, ordering2: VertexOrdering, ordered2: OrderedCutSequence,
                               f: Embedding, base: StrongImmersionModel, part, c: int,
                               trace: Optional[ReconstructionTrace] = None) -> StrongImmersionModel:
    """
    Add images for the surplus forward arcs e2. An arc whose endpoints keep
    their distance under f takes the direct host arc; otherwise it is routed
    as a 2-path through the smallest free pivot between the two images.
    """
    trace = trace if trace is not None else ReconstructionTrace(c)
    modulus = tag_modulus(c)
    vmap = dict(base.vmap)
    pmap = dict(base.pmap)
    used = base.used_arcs()
    mapped = set(f.f)

    for u, v in sorted(part.e2, key=lambda a: (ordering.position(a[0]), ordering.position(a[1]))):
        j, h = ordering.position(u), ordering.position(v)
        fj, fh = f(j), f(h)
        x, y = vmap[u], vmap[v]

        if fh - fj == h - j:
            # f is consecutive on [j, h]: both intervals induce the same sub-digraph
            try:
                interval_isomorphism(s, ordering, s2, ordering2, j, h, f)
            except ReconstructionError as e:
                raise ReconstructionError(f"arc ({u},{v}): {e}", trace)
            if (x, y) in used:
                raise ReconstructionError(f"direct image ({x},{y}) of ({u},{v}) is already taken", trace)
            pmap[(u, v)] = (x, y)
            used.add((x, y))
            trace.direct.append((u, v))
            continue

        gap = fh - fj
        if (gap - (h - j)) % modulus or gap < h - j + modulus:
            raise ReconstructionError(f"arc ({u},{v}): image gap {gap} breaks the tag arithmetic for "
                                      f"h-j={h - j}, c={c}", trace)
        unmapped = [i for i in range(fj + 1, fh) if i not in mapped]
        no_tail = [i for i in unmapped if not s2.has_arc(x, ordering2.vertex_at(i))]
        no_head = [i for i in unmapped if not s2.has_arc(ordering2.vertex_at(i), y)]
        candidates = [i for i in unmapped if i not in no_tail and i not in no_head]
        free = [i for i in candidates
                if (x, ordering2.vertex_at(i)) not in used and (ordering2.vertex_at(i), y) not in used]

        record = PivotRecord((u, v), j, h, fj, fh, len(unmapped), len(candidates), len(no_tail), len(no_head),
                          len(candidates) - len(free), len(free), free[0] if free else -1)
        trace.pivots.append(record)
        logger.debug(f"Pivot arc ({u},{v}): gap {gap}, {len(candidates)} candidates, {len(free)} free")
        if len(no_tail) > c or len(no_head) > c or record.excluded_used > 2 * c or not free:
            raise ReconstructionError(f"pivot bounds violated for ({u},{v}): {record}", trace)

        w = ordering2.vertex_at(record.pivot)
        pmap[(u, v)] = (x, w, y)
        used.update({(x, w), (w, y)})

    return StrongImmersionModel(vmap, pmap)


# ----------------------------------------------------------------------
# Pipeline
# ----------------------------------------------------------------------

def immerse_layouts(layout: Layout, layout2: Layout, c: int, limits: Limits = DEFAULT_LIMITS,
                    cw: Codeword = None, cw2: Codeword = None
                    ) -> tuple[Optional[StrongImmersionModel], Optional[ReconstructionTrace]]:
    """Encode both layouts under c, test domination and, on success, build and verify a model."""
    cw = cw or encode_layout(layout, c)
    cw2 = cw2 or encode_layout(layout2, c)
    f = dominates(cw, cw2)
    if f is None:
        return None, None

    s, s2 = layout.digraph, layout2.digraph
    part = partition_arcs(s, layout.ordering)
    trace = ReconstructionTrace(c, f, part.e1, part.e2)
    base = reconstruct_tournament_immersion(part.tournament(s.n), layout.ordering, layout.ordered_cuts,
                                            s2, layout2.ordering, layout2.ordered_cuts, f, limits, trace)
    model = extend_immersion_symmetric(s, layout.ordering, layout.ordered_cuts,
                                       s2, layout2.ordering, layout2.ordered_cuts, f, base, part, c, trace)
    _assert_verified(s, s2, model, trace)
    return model, trace


def _checked_layout(d: SimpleDigraph, c: int, limits: Limits, index: Optional[int] = None) -> Layout:
    layout = build_layout(require_semi_complete(d, index), limits)
    if layout.width > c:
        raise WidthError(layout.width, c, index)
    return layout


def immerse_with_trace(s: SimpleDigraph, s2: SimpleDigraph, c: Optional[int] = None,
                       limits: Limits = DEFAULT_LIMITS):
    """
    Run the codeword pipeline; c defaults to the larger exact cutwidth.
    Returns (model or None, trace or None, c).
    """
    if c is None:
        c = max(cutwidth_exact(s, limits).ctw, cutwidth_exact(s2, limits).ctw)
    model, trace = immerse_layouts(_checked_layout(s, c, limits), _checked_layout(s2, c, limits), c, limits)
    return model, trace, c


def immerse_via_codewords(s: SimpleDigraph, s2: SimpleDigraph, c: int,
                          limits: Limits = DEFAULT_LIMITS) -> Optional[StrongImmersionModel]:
    """
    A verified model of `s` in `s2`, or None when the codeword of `s` is not
    dominated. None does not certify that no immersion exists.
    """
    model, _, _ = immerse_with_trace(s, s2, c, limits)
    return model


@dataclass(frozen=True)
class ScanHit:
    i: int
    j: int
    model: StrongImmersionModel
    embedding: Embedding


def encode_stream(sequence: Sequence[SimpleDigraph], c: int,
                  limits: Limits = DEFAULT_LIMITS) -> list[tuple[Layout, Codeword]]:
    encoded = []
    for index, d in enumerate(sequence):
        layout = _checked_layout(d, c, limits, index)
        encoded.append((layout, encode_layout(layout, c)))
    return encoded


def wqo_scan(sequence: Sequence[SimpleDigraph], c: int, limits: Limits = DEFAULT_LIMITS) -> Optional[ScanHit]:
    """First pair i < j (lexicographic) whose codewords dominate, with the model of member i in member j."""
    encoded = encode_stream(sequence, c, limits)
    for i, j in itertools.combinations(range(len(encoded)), 2):
        (layout, cw), (layout2, cw2) = encoded[i], encoded[j]
        model, trace = immerse_layouts(layout, layout2, c, limits, cw, cw2)
        if model is not None:
            logger.info(f"Scan hit: member {i} immerses in member {j}")
            return ScanHit(i, j, model, trace.embedding)
    logger.info(f"Scan of {len(encoded)} members found no dominating pair")
    return None


# ----------------------------------------------------------------------
# Text form
# ----------------------------------------------------------------------

_VMAP_LINE = re.compile(r"^(\d+)\s*->\s*(\d+)$")
_PMAP_LINE = re.compile(r"^\((\d+),(\d+)\):((?:\s+\d+)+)$")


def serialize_model(model: StrongImmersionModel) -> str:
    lines = ["vmap:"]
    lines.extend(f"{v} -> {model.vmap[v]}" for v in sorted(model.vmap))
    lines.append("pmap:")
    lines.extend(f"({u},{v}): " + " ".join(map(str, model.pmap[(u, v)])) for u, v in sorted(model.pmap))
    return "\n".join(lines) + "\n"


def parse_model(text: str) -> StrongImmersionModel:
    vmap, pmap = {}, {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("vmap:", "pmap:"):
            section = line[:-1]
            continue
        if section == "vmap":
            match = _VMAP_LINE.match(line)
            if not match:
                raise ModelFormatError(lineno, f"expected 'h_vertex -> d_vertex', got {line!r}")
            v = int(match.group(1))
            if v in vmap:
                raise ModelFormatError(lineno, f"vertex {v} mapped twice")
            vmap[v] = int(match.group(2))
        elif section == "pmap":
            match = _PMAP_LINE.match(line)
            if not match:
                raise ModelFormatError(lineno, f"expected '(u,v): v0 v1 ...', got {line!r}")
            arc = (int(match.group(1)), int(match.group(2)))
            if arc in pmap:
                raise ModelFormatError(lineno, f"arc {arc} routed twice")
            pmap[arc] = tuple(int(x) for x in match.group(3).split())
        else:
            raise ModelFormatError(lineno, "content before 'vmap:' section")
    return StrongImmersionModel(vmap, pmap)

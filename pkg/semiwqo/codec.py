# codec.py
#
# Canonical finite labels, codewords (n, labels, gaps) of a semi-complete
# digraph with a linked layout, and the domination order between codewords.

import itertools
import logging
import re
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Sequence, Union

from semiwqo.config import DEFAULT_LIMITS, Limits
from semiwqo.digraph import SimpleDigraph
from semiwqo.errors import (
    CodewordFormatError,
    CodewordMismatchError,
    LimitExceededError,
    ReconstructionError,
    WidthError,
)
from semiwqo.ordering import CutSequence, Layout, OrderedCutSequence, VertexOrdering, cut_sequence

logger = logging.getLogger(__name__)


def tag_modulus(c: int) -> int:
    return 4 * c + 1


# ----------------------------------------------------------------------
# Labels
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ProfileClass:
    """
    Shape of two consecutive ordered cuts: their sizes and which positions
    (1-based) hold the same arc in both.
    """

    s1: int
    s2: int
    matches: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        matches = tuple(sorted((int(p), int(q)) for p, q in self.matches))
        object.__setattr__(self, "matches", matches)
        lefts = [p for p, _ in matches]
        rights = [q for _, q in matches]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise ValueError(f"profile matching is not injective: {matches}")
        if any(not (1 <= p <= self.s1 and 1 <= q <= self.s2) for p, q in matches):
            raise ValueError(f"profile matching {matches} out of range for sizes ({self.s1},{self.s2})")

    def __str__(self) -> str:
        pairs = ",".join(f"{p}-{q}" for p, q in self.matches)
        return f"({self.s1},{self.s2};[{pairs}])"


@dataclass(frozen=True)
class Label:
    profile: ProfileClass
    sym_prev: tuple[bool, ...]
    sym_next: tuple[bool, ...]
    tag: int

    def __post_init__(self):
        object.__setattr__(self, "sym_prev", tuple(bool(x) for x in self.sym_prev))
        object.__setattr__(self, "sym_next", tuple(bool(x) for x in self.sym_next))
        if len(self.sym_prev) != self.profile.s1 or len(self.sym_next) != self.profile.s2:
            raise ValueError(f"symmetry flags do not fit profile {self.profile}")
        for p, q in self.profile.matches:
            if self.sym_prev[p - 1] != self.sym_next[q - 1]:
                raise ValueError(f"matched positions {p}-{q} disagree on symmetry")

    def __str__(self) -> str:
        return (f"profile={self.profile} sym_prev={_bits(self.sym_prev)} "
                f"sym_next={_bits(self.sym_next)} tag={self.tag}")


def label_in_universe(label: Union[Label, ProfileClass], c: int) -> bool:
    profile = label.profile if isinstance(label, Label) else label
    if profile.s1 > c or profile.s2 > c:
        return False
    return not isinstance(label, Label) or 0 <= label.tag < tag_modulus(c)


def _matchings(s1: int, s2: int) -> Iterator[tuple[tuple[int, int], ...]]:
    for k in range(min(s1, s2) + 1):
        for lefts in itertools.combinations(range(1, s1 + 1), k):
            for rights in itertools.permutations(range(1, s2 + 1), k):
                yield tuple(zip(lefts, rights))


def enumerate_labels(c: int) -> Iterator[Label]:
    """Every well-formed label for width bound c; the universe is finite."""
    for s1 in range(c + 1):
        for s2 in range(c + 1):
            for matches in _matchings(s1, s2):
                profile = ProfileClass(s1, s2, matches)
                matched_next = {q: p for p, q in matches}
                for sym_prev in itertools.product((False, True), repeat=s1):
                    free = [q for q in range(1, s2 + 1) if q not in matched_next]
                    for extra in itertools.product((False, True), repeat=len(free)):
                        sym_next = [False] * s2
                        for q, p in matched_next.items():
                            sym_next[q - 1] = sym_prev[p - 1]
                        for q, flag in zip(free, extra):
                            sym_next[q - 1] = flag
                        for tag in range(tag_modulus(c)):
                            yield Label(profile, sym_prev, tuple(sym_next), tag)


# ----------------------------------------------------------------------
# Codewords and embeddings
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Codeword:
    """
    Triple (n, labels, zeta) under width bound c: labels[i - 1] is the label
    at position i in 1..n, zeta[j - 1] the gap value at j in 1..n-1.
    """

    n: int
    labels: tuple
    zeta: tuple[int, ...]
    c: int

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "zeta", tuple(int(z) for z in self.zeta))
        if self.n < 1:
            raise ValueError(f"codeword length must be positive, got {self.n}")
        if len(self.labels) != self.n or len(self.zeta) != self.n - 1:
            raise ValueError(f"codeword of length {self.n} has {len(self.labels)} labels "
                             f"and {len(self.zeta)} gap values")
        if any(not 0 <= z <= self.c for z in self.zeta):
            raise ValueError(f"gap values must lie in [0, {self.c}]: {self.zeta}")
        bad = next((i for i, lbl in enumerate(self.labels, start=1) if not label_in_universe(lbl, self.c)), None)
        if bad is not None:
            raise ValueError(f"label {bad} is not well-formed under c={self.c}: {self.labels[bad - 1]}")

    def label(self, i: int):
        return self.labels[i - 1]

    def gap(self, j: int) -> int:
        return self.zeta[j - 1]

    def profile_projection(self) -> "Codeword":
        """Same codeword with symmetry flags and tags dropped from every label."""
        return replace(self, labels=tuple(
            lbl.profile if isinstance(lbl, Label) else lbl for lbl in self.labels))


@dataclass(frozen=True)
class Embedding:
    """Strictly increasing map [1, n] -> [1, n'], stored as f[j - 1] = f(j)."""

    f: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(x) for x in self.f))
        if any(x < 1 for x in self.f):
            raise ValueError(f"embedding values are 1-based: {self.f}")
        if any(a >= b for a, b in zip(self.f, self.f[1:])):
            raise ValueError(f"embedding is not strictly increasing: {self.f}")

    def __call__(self, j: int) -> int:
        return self.f[j - 1]

    def __len__(self) -> int:
        return len(self.f)

    @classmethod
    def identity(cls, n: int) -> "Embedding":
        return cls(tuple(range(1, n + 1)))


def compose_embeddings(f: Embedding, g: Embedding) -> Embedding:
    """The embedding j -> g(f(j))."""
    return Embedding(tuple(g(x) for x in f.f))


def is_embedding_of(cw: Codeword, cw2: Codeword, f: Embedding) -> bool:
    """Check both domination conditions for `f`."""
    if len(f) != cw.n or (f.f and f.f[-1] > cw2.n):
        return False
    if any(cw.label(j) != cw2.label(f(j)) for j in range(1, cw.n + 1)):
        return False
    for j in range(1, cw.n):
        if any(cw2.gap(i) < cw.gap(j) for i in range(f(j), f(j + 1))):
            return False
    return True


# ----------------------------------------------------------------------
# Encoding
# ----------------------------------------------------------------------

def _bits(flags: Sequence[bool]) -> str:
    return "".join("1" if x else "0" for x in flags)


def encode(s: SimpleDigraph, ordering: VertexOrdering, ordered: OrderedCutSequence, c: int,
           cuts: CutSequence = None) -> Codeword:
    cuts = cuts or cut_sequence(s, ordering)
    if cuts.width > c:
        raise WidthError(cuts.width, c)
    if not ordered.matches(cuts):
        raise ValueError("ordered cuts do not enumerate the cuts of the ordering")

    def symmetric(arc) -> bool:
        return s.has_arc(arc[1], arc[0])

    labels = []
    for i in range(1, s.n + 1):
        prev, cur = ordered[i - 1], ordered[i]
        where = {arc: q for q, arc in enumerate(cur, start=1)}
        matches = tuple((p, where[arc]) for p, arc in enumerate(prev, start=1) if arc in where)
        labels.append(Label(ProfileClass(len(prev), len(cur), matches),
                            tuple(map(symmetric, prev)), tuple(map(symmetric, cur)),
                            i % tag_modulus(c)))
    zeta = cuts.cut_vector[1:s.n]
    return Codeword(s.n, tuple(labels), zeta, c)


def encode_layout(layout: Layout, c: int) -> Codeword:
    return encode(layout.digraph, layout.ordering, layout.ordered_cuts, c, layout.cuts)


# ----------------------------------------------------------------------
# Domination
# ----------------------------------------------------------------------

def _require_same_c(cw: Codeword, cw2: Codeword) -> None:
    if cw.c != cw2.c:
        raise CodewordMismatchError(f"codewords encoded under different width bounds: c={cw.c} and c={cw2.c}")


def dominates(cw: Codeword, cw2: Codeword) -> Optional[Embedding]:
    """
    Lexicographically smallest embedding of `cw` into `cw2`, or None.

    reach[j][i] says a valid suffix embedding exists with f(j) = i; it is
    filled right to left, then f is read off greedily left to right.
    """
    _require_same_c(cw, cw2)
    n, n2 = cw.n, cw2.n
    if n > n2:
        return None

    reach = [[False] * (n2 + 2) for _ in range(n + 2)]
    for i in range(1, n2 + 1):
        reach[n][i] = cw.label(n) == cw2.label(i)

    def successors(j: int, i: int) -> Iterator[int]:
        """i' > i with reach[j+1][i'] and every gap in [i, i'-1] at least zeta(j)."""
        need = cw.gap(j)
        for i2 in range(i + 1, n2 + 1):
            if cw2.gap(i2 - 1) < need:
                return
            if reach[j + 1][i2]:
                yield i2

    for j in range(n - 1, 0, -1):
        for i in range(1, n2 + 1):
            if cw.label(j) == cw2.label(i):
                reach[j][i] = next(successors(j, i), None) is not None

    start = next((i for i in range(1, n2 + 1) if reach[1][i]), None)
    if start is None:
        return None
    f = [start]
    for j in range(1, n):
        f.append(next(successors(j, f[-1])))
    return Embedding(tuple(f))


def dominates_bruteforce(cw: Codeword, cw2: Codeword, limits: Limits = DEFAULT_LIMITS) -> Optional[Embedding]:
    _require_same_c(cw, cw2)
    if cw2.n > limits.dominates_bruteforce_n:
        raise LimitExceededError("dominates_bruteforce host length", cw2.n, limits.dominates_bruteforce_n)
    for f in itertools.combinations(range(1, cw2.n + 1), cw.n):
        candidate = Embedding(f)
        if is_embedding_of(cw, cw2, candidate):
            return candidate
    return None


# ----------------------------------------------------------------------
# Interval isomorphism
# ----------------------------------------------------------------------

def interval_isomorphism(s: SimpleDigraph, ordering: VertexOrdering, s2: SimpleDigraph,
                         ordering2: VertexOrdering, j: int, h: int, f: Embedding) -> dict[int, int]:
    """
    Map pi_{j+l} to pi'_{f(j)+l} for l in [0, h-j] and check that it is an
    isomorphism between the induced sub-digraphs on both position intervals.
    """
    if not 1 <= j <= h <= ordering.n:
        raise ValueError(f"interval [{j}, {h}] is not inside 1..{ordering.n}")
    start = f(j)
    if any(f(j + k) != start + k for k in range(h - j + 1)):
        raise ValueError(f"embedding is not consecutive on [{j}, {h}]: {f.f[j - 1:h]}")
    if start + (h - j) > ordering2.n:
        raise ValueError("image interval overruns the host ordering")

    left = [ordering.vertex_at(p) for p in range(j, h + 1)]
    right = [ordering2.vertex_at(start + k) for k in range(h - j + 1)]
    sub, _ = s.induced_subdigraph(left)
    sub2, _ = s2.induced_subdigraph(right)
    if sub != sub2:
        raise ReconstructionError(
            f"positions [{j}, {h}] and [{start}, {start + h - j}] carry matching labels "
            f"but their induced sub-digraphs differ", trace={"left": left, "right": right})
    return dict(zip(left, right))


# ----------------------------------------------------------------------
# Text form
# ----------------------------------------------------------------------

_HEADER = re.compile(r"^codeword n=(\d+) c=(\d+)$")
_LINE = re.compile(r"^(\d+): profile=\((\d+),(\d+);\[([0-9,\-]*)\]\)"
                   r"(?: sym_prev=([01]*) sym_next=([01]*) tag=(\d+))?$")


def serialize_codeword(cw: Codeword) -> str:
    lines = [f"codeword n={cw.n} c={cw.c}"]
    for i, lbl in enumerate(cw.labels, start=1):
        text = str(lbl) if isinstance(lbl, Label) else f"profile={lbl}"
        lines.append(f"{i}: {text}")
    lines.append("zeta: " + " ".join(map(str, cw.zeta)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_codeword(text: str) -> Codeword:
    rows = [(k, line.strip()) for k, line in enumerate(text.splitlines(), start=1)
            if line.strip() and not line.strip().startswith("#")]
    if not rows:
        raise CodewordFormatError(1, "empty codeword")
    lineno, header = rows[0]
    match = _HEADER.match(header)
    if not match:
        raise CodewordFormatError(lineno, f"expected 'codeword n=<n> c=<c>', got {header!r}")
    n, c = int(match.group(1)), int(match.group(2))

    labels = []
    zeta = None
    for lineno, line in rows[1:]:
        if line.startswith("zeta:"):
            try:
                zeta = tuple(int(x) for x in line[len("zeta:"):].split())
            except ValueError:
                raise CodewordFormatError(lineno, "non-integer gap value")
            continue
        match = _LINE.match(line)
        if not match:
            raise CodewordFormatError(lineno, f"malformed label line {line!r}")
        index, s1, s2, pairs, sym_prev, sym_next, tag = match.groups()
        if int(index) != len(labels) + 1:
            raise CodewordFormatError(lineno, f"expected label {len(labels) + 1}, got {index}")
        try:
            matches = tuple(tuple(int(x) for x in pair.split("-")) for pair in pairs.split(",") if pair)
            profile = ProfileClass(int(s1), int(s2), matches)
            if tag is None:
                labels.append(profile)
            else:
                labels.append(Label(profile, tuple(ch == "1" for ch in sym_prev),
                                    tuple(ch == "1" for ch in sym_next), int(tag)))
        except ValueError as e:
            raise CodewordFormatError(lineno, str(e))
        if not label_in_universe(labels[-1], c):
            raise CodewordFormatError(lineno, f"label {index} is not well-formed under c={c}")

    if zeta is None:
        raise CodewordFormatError(rows[-1][0], "missing 'zeta:' line")
    try:
        return Codeword(n, tuple(labels), zeta, c)
    except ValueError as e:
        raise CodewordFormatError(rows[-1][0], str(e))
